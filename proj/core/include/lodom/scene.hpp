#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace lodom {

/// Finite rectangle: center, unit normal, half-extents along the two
/// in-plane axes returned by plane_basis().
struct ScenePlane {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  double half_u = 1.0;
  double half_v = 1.0;
};

/// Finite cylinder (side surface only): base point, unit axis, radius,
/// height measured along the axis from the base.
struct ScenePole {
  Eigen::Vector3d base = Eigen::Vector3d::Zero();
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  double radius = 0.1;
  double height = 1.0;
};

struct Scene {
  std::vector<ScenePlane> planes;
  std::vector<ScenePole> poles;

  bool empty() const { return planes.empty() && poles.empty(); }
};

/// Deterministic in-plane axes (u, v) for a unit normal: u is built from
/// world-z unless the normal is near-vertical, in which case world-x.
std::pair<Eigen::Vector3d, Eigen::Vector3d> plane_basis(
    const Eigen::Vector3d& normal);

/// Distance along the ray to the nearest scene surface, if any.
std::optional<double> raycast(const Scene& scene, const Eigen::Vector3d& origin,
                              const Eigen::Vector3d& direction);

/// Plain-text scene format, one primitive per line:
///   plane px py pz nx ny nz ex ey
///   pole  bx by bz ax ay az r  h
/// '#' starts a comment. Normals and axes are normalized on load.
/// Throws std::runtime_error naming the offending line.
Scene parse_scene(std::istream& in);
Scene load_scene(const std::string& path);
void write_scene(const Scene& scene, std::ostream& out);

}  // namespace lodom
