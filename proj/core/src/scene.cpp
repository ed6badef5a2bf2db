#include "lodom/scene.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lodom {

std::pair<Eigen::Vector3d, Eigen::Vector3d> plane_basis(
    const Eigen::Vector3d& normal) {
  const Eigen::Vector3d ref = std::abs(normal.z()) < 0.9
                                  ? Eigen::Vector3d::UnitZ()
                                  : Eigen::Vector3d::UnitX();
  const Eigen::Vector3d u = ref.cross(normal).normalized();
  const Eigen::Vector3d v = normal.cross(u);
  return {u, v};
}

namespace {

std::optional<double> hit_plane(const ScenePlane& pl,
                                const Eigen::Vector3d& o,
                                const Eigen::Vector3d& d) {
  const double denom = d.dot(pl.normal);
  if (std::abs(denom) < 1e-12) return std::nullopt;
  const double t = (pl.center - o).dot(pl.normal) / denom;
  if (t <= 0.0) return std::nullopt;
  const Eigen::Vector3d q = o + t * d - pl.center;
  const auto [u, v] = plane_basis(pl.normal);
  if (std::abs(q.dot(u)) > pl.half_u || std::abs(q.dot(v)) > pl.half_v) {
    return std::nullopt;
  }
  return t;
}

std::optional<double> hit_pole(const ScenePole& po, const Eigen::Vector3d& o,
                               const Eigen::Vector3d& d) {
  const Eigen::Vector3d oc = o - po.base;
  const Eigen::Vector3d d_perp = d - d.dot(po.axis) * po.axis;
  const Eigen::Vector3d oc_perp = oc - oc.dot(po.axis) * po.axis;
  const double a = d_perp.squaredNorm();
  if (a < 1e-16) return std::nullopt;  // ray parallel to the axis
  const double b = 2.0 * d_perp.dot(oc_perp);
  const double c = oc_perp.squaredNorm() - po.radius * po.radius;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  for (const double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
    if (t <= 0.0) continue;
    const double z = (oc + t * d).dot(po.axis);
    if (z >= 0.0 && z <= po.height) return t;
  }
  return std::nullopt;
}

}  // namespace

std::optional<double> raycast(const Scene& scene, const Eigen::Vector3d& origin,
                              const Eigen::Vector3d& direction) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pl : scene.planes) {
    if (auto t = hit_plane(pl, origin, direction)) best = std::min(best, *t);
  }
  for (const auto& po : scene.poles) {
    if (auto t = hit_pole(po, origin, direction)) best = std::min(best, *t);
  }
  if (!std::isfinite(best)) return std::nullopt;
  return best;
}

namespace {

[[noreturn]] void scene_error(int line, const std::string& what) {
  throw std::runtime_error("scene line " + std::to_string(line) + ": " + what);
}

}  // namespace

Scene parse_scene(std::istream& in) {
  Scene scene;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string kind;
    if (!(ss >> kind)) continue;  // blank or comment-only line

    std::vector<double> vals;
    double v;
    while (ss >> v) vals.push_back(v);
    if (!ss.eof()) scene_error(line_no, "malformed number");

    if (kind == "plane") {
      if (vals.size() != 8) scene_error(line_no, "plane needs 8 values");
      ScenePlane pl;
      pl.center = {vals[0], vals[1], vals[2]};
      Eigen::Vector3d n(vals[3], vals[4], vals[5]);
      if (n.norm() < 1e-12) scene_error(line_no, "zero normal");
      pl.normal = n.normalized();
      pl.half_u = vals[6];
      pl.half_v = vals[7];
      if (pl.half_u <= 0.0 || pl.half_v <= 0.0) {
        scene_error(line_no, "plane extents must be > 0");
      }
      scene.planes.push_back(pl);
    } else if (kind == "pole") {
      if (vals.size() != 8) scene_error(line_no, "pole needs 8 values");
      ScenePole po;
      po.base = {vals[0], vals[1], vals[2]};
      Eigen::Vector3d a(vals[3], vals[4], vals[5]);
      if (a.norm() < 1e-12) scene_error(line_no, "zero axis");
      po.axis = a.normalized();
      po.radius = vals[6];
      po.height = vals[7];
      if (po.radius <= 0.0 || po.height <= 0.0) {
        scene_error(line_no, "pole radius and height must be > 0");
      }
      scene.poles.push_back(po);
    } else {
      scene_error(line_no, "unknown primitive '" + kind + "'");
    }
  }
  return scene;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scene file: " + path);
  return parse_scene(in);
}

void write_scene(const Scene& scene, std::ostream& out) {
  auto num = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::string(buf);
  };
  for (const auto& pl : scene.planes) {
    out << "plane " << num(pl.center.x()) << ' ' << num(pl.center.y()) << ' '
        << num(pl.center.z()) << ' ' << num(pl.normal.x()) << ' '
        << num(pl.normal.y()) << ' ' << num(pl.normal.z()) << ' '
        << num(pl.half_u) << ' ' << num(pl.half_v) << '\n';
  }
  for (const auto& po : scene.poles) {
    out << "pole " << num(po.base.x()) << ' ' << num(po.base.y()) << ' '
        << num(po.base.z()) << ' ' << num(po.axis.x()) << ' '
        << num(po.axis.y()) << ' ' << num(po.axis.z()) << ' ' << num(po.radius)
        << ' ' << num(po.height) << '\n';
  }
}

}  // namespace lodom
