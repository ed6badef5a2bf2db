#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lodom/features.hpp"
#include "lodom/geometry.hpp"
#include "lodom/localmap.hpp"

namespace lodom {

/// Eq-as-printed down-weights high-smoothness edges and up-weights
/// high-smoothness planars; the as-text orientation flips both signs.
enum class WeightOrientation { kAsPrinted, kAsText };

struct GNConfig {
  int max_outer_iterations = 10;
  double update_norm_epsilon = 1e-5;  // on the 6-vector update
  double huber_delta = 0.0;           // m; 0 disables the robust loss
};

struct MatchingConfig {
  int fit_neighbors = 5;
  double line_ratio = 3.0;
  double plane_ratio = 3.0;
  double max_edge_distance = 1.0;   // m, correspondence gate on the nearest
  double max_plane_distance = 1.0;  // m
  /// Landmarks are fitted from neighbors within this radius; wider than
  /// the correspondence gate so structure spanning several rings (floor
  /// circles, long corners) can form a fit.
  double fit_radius = 2.0;  // m
  /// A fit is accepted only when every contributing neighbor lies
  /// within this distance of the landmark; rejects fits contaminated by
  /// a second surface, which pass the eigenvalue ratios when the
  /// contamination is mild but bias the pose systematically.
  double fit_tolerance = 0.1;  // m
  int min_correspondences = 10;
  double max_condition = 1e6;  // pivot-ratio gate on the normal matrix
  WeightOrientation weight_orientation = WeightOrientation::kAsPrinted;
};

struct EdgeCorrespondence {
  FeaturePoint feature;
  LineLandmark landmark;
  double weight = 1.0;
};

struct PlaneCorrespondence {
  FeaturePoint feature;
  PlaneLandmark landmark;
  double weight = 1.0;
};

struct CorrespondenceSet {
  std::vector<EdgeCorrespondence> edges;
  std::vector<PlaneCorrespondence> planes;

  std::size_t size() const { return edges.size() + planes.size(); }
};

struct AlignDiagnostics {
  int iterations = 0;
  double final_cost = 0.0;
  int edge_correspondences = 0;
  int plane_correspondences = 0;
  bool converged = false;
  bool step_stalled = false;  // backtracking could not reduce the cost
  WeightOrientation weight_orientation = WeightOrientation::kAsPrinted;
};

struct AlignResult {
  Pose pose;
  AlignDiagnostics diagnostics;
};

/// Raised when the scene does not constrain the pose: too few gated
/// correspondences, or a normal matrix whose pivot ratio exceeds the
/// condition gate (weak_direction names the unconstrained axis).
class DegeneracyError : public std::runtime_error {
 public:
  DegeneracyError(const std::string& what, int edge_count, int plane_count,
                  std::string weak_direction = {})
      : std::runtime_error(what),
        edge_count(edge_count),
        plane_count(plane_count),
        weak_direction(std::move(weak_direction)) {}

  int edge_count = 0;
  int plane_count = 0;
  std::string weak_direction;
};

/// Point-to-line distance ||(T p - c) x dir|| (dir is unit).
double edge_residual(const Pose& T, const Eigen::Vector3d& p,
                     const LineLandmark& line);

/// Signed point-to-plane distance (T p - c) . n (n is unit).
double plane_residual(const Pose& T, const Eigen::Vector3d& p,
                      const PlaneLandmark& plane);

/// Per-class softmax over smoothness: exp(-sigma) for edges and
/// exp(+sigma) for planars under the as-printed orientation, shifted by
/// the class max before exponentiation. Each class sums to 1.
struct ClassWeights {
  std::vector<double> edges;
  std::vector<double> planars;
};
ClassWeights compute_weights(std::span<const FeaturePoint> edges,
                             std::span<const FeaturePoint> planars,
                             WeightOrientation orientation);

using JacobianRow = Eigen::Matrix<double, 1, 6>;

/// d(W * edge_residual)/d(dxi) under the left perturbation model; a zero
/// row when the residual vanishes (the direction is undefined there and
/// zero lies in the subgradient).
JacobianRow edge_jacobian(const Pose& T, const Eigen::Vector3d& p,
                          const LineLandmark& line, double weight);

JacobianRow plane_jacobian(const Pose& T, const Eigen::Vector3d& p,
                           const PlaneLandmark& plane, double weight);

/// Matches every feature to its fitted landmark at the given pose
/// (knn + covariance fit, distance-gated) and attaches softmax weights
/// over the matched sets.
CorrespondenceSet build_correspondences(const FeatureCloud& features,
                                        const FeatureMap& map, const Pose& T,
                                        const MatchingConfig& cfg);

/// Sum of squared weighted residuals (Huber-rho when enabled).
double registration_cost(const CorrespondenceSet& corrs, const Pose& T,
                         double huber_delta);

/// One Gauss-Newton step from the 6x6 normal equations. Throws
/// DegeneracyError when the pivot-ratio gate trips.
Eigen::Matrix<double, 6, 1> solve_gn_step(const CorrespondenceSet& corrs,
                                          const Pose& T, double huber_delta,
                                          double max_condition);

/// Scan-to-map optimization: rebuild correspondences, solve the normal
/// equations, left-update T <- exp(dxi) * T with step-halving
/// backtracking, until the update norm drops below epsilon or the
/// iteration cap. Throws DegeneracyError on unconstrained geometry.
AlignResult align(const FeatureCloud& features, const FeatureMap& map,
                  const Pose& T_init, const GNConfig& gn,
                  const MatchingConfig& matching = {});

}  // namespace lodom
