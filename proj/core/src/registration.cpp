#include "lodom/registration.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>

namespace lodom {

double edge_residual(const Pose& T, const Eigen::Vector3d& p,
                     const LineLandmark& line) {
  return ((T * p - line.center).cross(line.direction)).norm();
}

double plane_residual(const Pose& T, const Eigen::Vector3d& p,
                      const PlaneLandmark& plane) {
  return (T * p - plane.center).dot(plane.normal);
}

namespace {

std::vector<double> softmax_weights(std::span<const FeaturePoint> pts,
                                    double sign) {
  std::vector<double> w(pts.size());
  if (pts.empty()) return w;
  double max_val = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) max_val = std::max(max_val, sign * p.sigma);
  double sum = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    w[i] = std::exp(sign * pts[i].sigma - max_val);
    sum += w[i];
  }
  for (auto& v : w) v /= sum;
  return w;
}

}  // namespace

ClassWeights compute_weights(std::span<const FeaturePoint> edges,
                             std::span<const FeaturePoint> planars,
                             WeightOrientation orientation) {
  const double edge_sign =
      orientation == WeightOrientation::kAsPrinted ? -1.0 : 1.0;
  ClassWeights out;
  out.edges = softmax_weights(edges, edge_sign);
  out.planars = softmax_weights(planars, -edge_sign);
  return out;
}

JacobianRow edge_jacobian(const Pose& T, const Eigen::Vector3d& p,
                          const LineLandmark& line, double weight) {
  const Eigen::Vector3d q = T * p;
  const Eigen::Vector3d v = (q - line.center).cross(line.direction);
  const double norm = v.norm();
  if (norm < 1e-12) {
    return JacobianRow::Zero();
  }
  const Eigen::Vector3d unit = v / norm;
  // d||v||/d(Tp) = unit^T * d[(Tp - c) x dir]/d(Tp) = (dir x unit)^T
  const Eigen::Vector3d grad = line.direction.cross(unit);
  return weight * grad.transpose() * point_jacobian(T, p);
}

JacobianRow plane_jacobian(const Pose& T, const Eigen::Vector3d& p,
                           const PlaneLandmark& plane, double weight) {
  return weight * plane.normal.transpose() * point_jacobian(T, p);
}

CorrespondenceSet build_correspondences(const FeatureCloud& features,
                                        const FeatureMap& map, const Pose& T,
                                        const MatchingConfig& cfg) {
  CorrespondenceSet out;
  std::vector<Eigen::Vector3d> neighbors;
  std::vector<double> sq_dists;

  std::vector<FeaturePoint> matched_edges;
  std::vector<FeaturePoint> matched_planars;

  // A feature is matched only when its nearest map neighbor is inside
  // the correspondence gate; the landmark is then fitted from neighbors
  // inside the (wider) fit radius so that structure spanning several
  // rings can form a fit, while points from across the map cannot.
  auto trim_to_fit_radius = [&]() {
    const double max_sq = cfg.fit_radius * cfg.fit_radius;
    std::size_t keep = 0;
    while (keep < neighbors.size() && sq_dists[keep] <= max_sq) ++keep;
    neighbors.resize(keep);
  };

  for (const auto& fp : features.edges) {
    const Eigen::Vector3d q = T * fp.position;
    map.knn(FeatureMap::Side::kEdge, q, cfg.fit_neighbors, neighbors,
            sq_dists);
    if (neighbors.empty() ||
        sq_dists.front() > cfg.max_edge_distance * cfg.max_edge_distance) {
      continue;
    }
    trim_to_fit_radius();
    if (neighbors.size() < 3) continue;
    const auto line = fit_line(neighbors, cfg.line_ratio);
    if (!line) continue;
    bool tight = true;
    for (const auto& n : neighbors) {
      if (((n - line->center).cross(line->direction)).norm() >
          cfg.fit_tolerance) {
        tight = false;
        break;
      }
    }
    if (!tight) continue;
    out.edges.push_back({fp, *line, 1.0});
    matched_edges.push_back(fp);
  }

  for (const auto& fp : features.planars) {
    const Eigen::Vector3d q = T * fp.position;
    map.knn(FeatureMap::Side::kPlane, q, cfg.fit_neighbors, neighbors,
            sq_dists);
    if (neighbors.empty() ||
        sq_dists.front() > cfg.max_plane_distance * cfg.max_plane_distance) {
      continue;
    }
    trim_to_fit_radius();
    if (neighbors.size() < 3) continue;
    const auto plane = fit_plane(neighbors, cfg.plane_ratio);
    if (!plane) continue;
    bool tight = true;
    for (const auto& n : neighbors) {
      if (std::abs(plane->normal.dot(n - plane->center)) > cfg.fit_tolerance) {
        tight = false;
        break;
      }
    }
    if (!tight) continue;
    out.planes.push_back({fp, *plane, 1.0});
    matched_planars.push_back(fp);
  }

  const ClassWeights weights =
      compute_weights(matched_edges, matched_planars, cfg.weight_orientation);
  for (std::size_t i = 0; i < out.edges.size(); ++i) {
    out.edges[i].weight = weights.edges[i];
  }
  for (std::size_t i = 0; i < out.planes.size(); ++i) {
    out.planes[i].weight = weights.planars[i];
  }
  return out;
}

namespace {

// Huber loss on the physical residual (meters); the class weight scales
// the whole term quadratically, matching the plain case at delta = 0.
inline double huber_rho(double f, double delta) {
  if (delta <= 0.0 || std::abs(f) <= delta) return f * f;
  return 2.0 * delta * std::abs(f) - delta * delta;
}

inline double huber_scale(double f, double delta) {
  if (delta <= 0.0 || std::abs(f) <= delta) return 1.0;
  return std::sqrt(delta / std::abs(f));
}

const char* kAxisNames[6] = {"tx", "ty", "tz", "rx", "ry", "rz"};

}  // namespace

double registration_cost(const CorrespondenceSet& corrs, const Pose& T,
                         double huber_delta) {
  double cost = 0.0;
  for (const auto& c : corrs.edges) {
    const double f = edge_residual(T, c.feature.position, c.landmark);
    cost += c.weight * c.weight * huber_rho(f, huber_delta);
  }
  for (const auto& c : corrs.planes) {
    const double f = plane_residual(T, c.feature.position, c.landmark);
    cost += c.weight * c.weight * huber_rho(f, huber_delta);
  }
  return cost;
}

Eigen::Matrix<double, 6, 1> solve_gn_step(const CorrespondenceSet& corrs,
                                          const Pose& T, double huber_delta,
                                          double max_condition) {
  Eigen::Matrix<double, 6, 6> h = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<double, 6, 1> b = Eigen::Matrix<double, 6, 1>::Zero();

  // Fixed-order accumulation keeps results run-to-run identical.
  for (const auto& c : corrs.edges) {
    const double f = edge_residual(T, c.feature.position, c.landmark);
    const double s = huber_scale(f, huber_delta);
    const JacobianRow j =
        s * edge_jacobian(T, c.feature.position, c.landmark, c.weight);
    h += j.transpose() * j;
    b += j.transpose() * (s * c.weight * f);
  }
  for (const auto& c : corrs.planes) {
    const double f = plane_residual(T, c.feature.position, c.landmark);
    const double s = huber_scale(f, huber_delta);
    const JacobianRow j =
        s * plane_jacobian(T, c.feature.position, c.landmark, c.weight);
    h += j.transpose() * j;
    b += j.transpose() * (s * c.weight * f);
  }

  const Eigen::LDLT<Eigen::Matrix<double, 6, 6>> ldlt(h);
  const Eigen::Matrix<double, 6, 1> pivots = ldlt.vectorD();
  const double max_pivot = pivots.maxCoeff();
  const double min_pivot = pivots.minCoeff();
  if (!(min_pivot > 0.0) || max_pivot / min_pivot > max_condition) {
    // Name the least constrained direction from the eigenvector of the
    // smallest eigenvalue.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(h);
    int weak_axis = 0;
    es.eigenvectors().col(0).cwiseAbs().maxCoeff(&weak_axis);
    throw DegeneracyError(
        std::string("align: normal equations degenerate along ") +
            kAxisNames[weak_axis],
        static_cast<int>(corrs.edges.size()),
        static_cast<int>(corrs.planes.size()), kAxisNames[weak_axis]);
  }
  return ldlt.solve(-b);
}

AlignResult align(const FeatureCloud& features, const FeatureMap& map,
                  const Pose& T_init, const GNConfig& gn,
                  const MatchingConfig& matching) {
  Pose T = T_init;
  AlignDiagnostics diag;
  diag.weight_orientation = matching.weight_orientation;

  for (int iter = 0; iter < gn.max_outer_iterations; ++iter) {
    const CorrespondenceSet corrs =
        build_correspondences(features, map, T, matching);
    diag.edge_correspondences = static_cast<int>(corrs.edges.size());
    diag.plane_correspondences = static_cast<int>(corrs.planes.size());
    diag.iterations = iter + 1;

    if (static_cast<int>(corrs.size()) < matching.min_correspondences) {
      throw DegeneracyError(
          "align: only " + std::to_string(corrs.size()) +
              " correspondences after gating (need " +
              std::to_string(matching.min_correspondences) + ")",
          static_cast<int>(corrs.edges.size()),
          static_cast<int>(corrs.planes.size()));
    }

    const double cost = registration_cost(corrs, T, gn.huber_delta);

    // The solve also runs the condition gate: a zero-residual but
    // unconstrained configuration must still raise, not "converge".
    const Eigen::Matrix<double, 6, 1> step =
        solve_gn_step(corrs, T, gn.huber_delta, matching.max_condition);

    // Step-halving backtracking keeps the cost non-increasing.
    Eigen::Matrix<double, 6, 1> applied = step;
    Pose T_new = exp_se3(Twist::FromVector(applied)) * T;
    double new_cost = registration_cost(corrs, T_new, gn.huber_delta);
    int halvings = 0;
    while (new_cost > cost && halvings < 4) {
      applied *= 0.5;
      T_new = exp_se3(Twist::FromVector(applied)) * T;
      new_cost = registration_cost(corrs, T_new, gn.huber_delta);
      ++halvings;
    }
    if (new_cost > cost) {
      diag.step_stalled = true;
      diag.final_cost = cost;
      break;
    }

    T = T_new;
    diag.final_cost = new_cost;
    if (applied.norm() < gn.update_norm_epsilon) {
      diag.converged = true;
      break;
    }
  }

  return {T, diag};
}

}  // namespace lodom
