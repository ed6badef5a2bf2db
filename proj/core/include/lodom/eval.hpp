#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lodom/pipeline.hpp"

namespace lodom {

/// Segment-normalized relative-pose errors: translational error as a
/// percentage per meter and rotational error in degrees per meter,
/// averaged over all (start frame, segment length) pairs.
struct ErrorReport {
  double ate_percent = 0.0;
  double are_deg_per_m = 0.0;
  std::size_t pair_count = 0;

  struct LengthEntry {
    double length_m = 0.0;
    double ate_percent = 0.0;
    double are_deg_per_m = 0.0;
    std::size_t pairs = 0;
  };
  std::vector<LengthEntry> per_length;
  std::vector<double> skipped_lengths;  // longer than the gt path
};

/// For every start frame i and segment length L, the end frame j is the
/// first whose ground-truth path distance from i reaches L; the error of
/// the pair is the relative-pose discrepancy gt_j gt_i^-1 est_i est_j^-1
/// normalized by L. Throws std::invalid_argument on mismatched
/// trajectories.
ErrorReport evaluate(const Trajectory& est, const Trajectory& gt,
                     std::span<const double> segment_lengths);

/// Inverse of write_trajectory. Throws std::runtime_error naming the
/// line on a malformed field count. Scan indices are assigned 0..n-1.
Trajectory read_kitti_poses(std::istream& in);
Trajectory read_kitti_poses_file(const std::string& path);

/// Human-readable report plus a machine-readable key=value block.
std::string format_report(const ErrorReport& report);

}  // namespace lodom
