#pragma once

#include <random>
#include <vector>

#include "lodom/features.hpp"
#include "lodom/geometry.hpp"
#include "lodom/scene.hpp"

namespace lodom::testing {

inline Eigen::Vector3d random_unit_vector(std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Vector3d v;
  do {
    v = {gauss(rng), gauss(rng), gauss(rng)};
  } while (v.norm() < 1e-6);
  return v.normalized();
}

inline Twist random_twist(std::mt19937& rng, double max_angle,
                          double max_translation) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Twist xi;
  xi.phi = random_unit_vector(rng) * (uni(rng) * max_angle);
  xi.rho = random_unit_vector(rng) * (uni(rng) * max_translation);
  return xi;
}

inline Pose random_pose(std::mt19937& rng, double max_angle,
                        double max_translation) {
  return exp_se3(random_twist(rng, max_angle, max_translation));
}

/// Axis-aligned rectangular room centered on the origin: four walls,
/// floor and ceiling, with inward-facing extents. Optionally a vertical
/// pole in each corner, flush with the walls.
inline Scene box_room(double half_x, double half_y, double half_z,
                      double corner_pole_radius = 0.0) {
  Scene scene;
  auto wall = [&](const Eigen::Vector3d& c, const Eigen::Vector3d& n,
                  double hu, double hv) {
    scene.planes.push_back({c, n, hu, hv});
  };
  // Extents follow plane_basis: u spans y on the x-walls, x on the
  // y-walls, and y on the z-walls; v spans z on vertical walls.
  wall({half_x, 0, 0}, {-1, 0, 0}, half_y, half_z);
  wall({-half_x, 0, 0}, {1, 0, 0}, half_y, half_z);
  wall({0, half_y, 0}, {0, -1, 0}, half_x, half_z);
  wall({0, -half_y, 0}, {0, 1, 0}, half_x, half_z);
  wall({0, 0, half_z}, {0, 0, -1}, half_y, half_x);
  wall({0, 0, -half_z}, {0, 0, 1}, half_y, half_x);
  if (corner_pole_radius > 0.0) {
    for (double sx : {-1.0, 1.0}) {
      for (double sy : {-1.0, 1.0}) {
        scene.poles.push_back({{sx * half_x, sy * half_y, -half_z},
                               {0, 0, 1},
                               corner_pole_radius,
                               2.0 * half_z});
      }
    }
  }
  return scene;
}

/// Regular grid sampling of a wall rectangle, for synthetic map sides.
inline std::vector<Eigen::Vector3d> sample_plane(const ScenePlane& pl,
                                                 double spacing) {
  const auto [u, v] = plane_basis(pl.normal);
  std::vector<Eigen::Vector3d> pts;
  for (double a = -pl.half_u; a <= pl.half_u + 1e-9; a += spacing) {
    for (double b = -pl.half_v; b <= pl.half_v + 1e-9; b += spacing) {
      pts.push_back(pl.center + a * u + b * v);
    }
  }
  return pts;
}

inline std::vector<Eigen::Vector3d> sample_pole_axis(const ScenePole& po,
                                                     double spacing) {
  std::vector<Eigen::Vector3d> pts;
  for (double z = 0.0; z <= po.height + 1e-9; z += spacing) {
    pts.push_back(po.base + z * po.axis);
  }
  return pts;
}

inline FeaturePoint make_feature(const Eigen::Vector3d& p, double sigma,
                                 double s = 0.0, int ring = 1) {
  FeaturePoint fp;
  fp.position = p;
  fp.sigma = sigma;
  fp.azimuth_fraction = s;
  fp.ring = ring;
  return fp;
}

}  // namespace lodom::testing
