#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lodom/compensation.hpp"
#include "lodom/features.hpp"
#include "lodom/geometry.hpp"
#include "lodom/localmap.hpp"
#include "lodom/pointcloud.hpp"
#include "lodom/registration.hpp"

namespace lodom {

/// Timestamped pose sequence, scan indices strictly increasing. The
/// first pose of a run is always the identity (gauge fix).
struct Trajectory {
  std::vector<std::pair<int, Pose>> poses;

  std::size_t size() const { return poses.size(); }
};

struct PipelineConfig {
  FeatureConfig features;
  GNConfig gn;
  MatchingConfig matching;
  MapConfig map;
  KeyframePolicy keyframe;
  CompensationMode mode = CompensationMode::kTwoStage;
};

struct ScanDiagnostics {
  int scan_index = 0;
  Pose pose;
  int edge_features = 0;
  int planar_features = 0;
  AlignDiagnostics align;
  bool keyframe_inserted = false;
  bool dead_reckoned = false;  // alignment degenerate, prediction kept
  double ms_extract = 0.0;
  double ms_compensate = 0.0;
  double ms_align = 0.0;
  double ms_map = 0.0;

  double ms_total() const {
    return ms_extract + ms_compensate + ms_align + ms_map;
  }
};

/// End-to-end odometry: features -> stage-1 deskew with the predicted
/// twist -> scan-to-map alignment -> stage-2 deskew with the optimized
/// pose -> keyframe map update. One scan at a time; the constant
/// velocity recurrence is sequential.
class OdometryPipeline {
 public:
  explicit OdometryPipeline(PipelineConfig cfg);

  /// Processes one scan and returns its optimized pose. The first scan
  /// is pinned to the identity and inserted unconditionally. Degenerate
  /// alignment falls back to the constant-velocity prediction (flagged
  /// in diagnostics); the sequence is never aborted.
  Pose process_scan(const Scan& scan);

  const ScanDiagnostics& last_diagnostics() const { return last_diag_; }
  const Trajectory& trajectory() const { return trajectory_; }
  const FeatureMap& map() const { return map_; }
  const PipelineConfig& config() const { return cfg_; }

 private:
  PipelineConfig cfg_;
  MotionState motion_;
  FeatureMap map_;
  Pose last_keyframe_pose_;
  Trajectory trajectory_;
  ScanDiagnostics last_diag_;
  bool first_scan_ = true;
};

struct RunResult {
  Trajectory trajectory;
  std::vector<ScanDiagnostics> diagnostics;
};

/// Folds process_scan over a scan source (nullopt ends the sequence).
/// Deterministic given inputs and configuration.
RunResult run_sequence(const std::function<std::optional<Scan>()>& next_scan,
                       const PipelineConfig& cfg);

/// KITTI pose text: one line per pose, the row-major upper 3x4 of the
/// transform, 12 fields.
std::string write_trajectory(const Trajectory& traj);

/// Deterministic key=value diagnostics line, one per scan. Timings are
/// deliberately excluded so identical runs produce identical logs.
std::string diagnostics_log_line(const ScanDiagnostics& d);

}  // namespace lodom
