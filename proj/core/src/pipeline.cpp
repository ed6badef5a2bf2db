#include "lodom/pipeline.hpp"

#include <chrono>
#include <cstdio>

namespace lodom {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

OdometryPipeline::OdometryPipeline(PipelineConfig cfg)
    : cfg_(std::move(cfg)), map_(cfg_.map) {
  cfg_.features.validate();
}

Pose OdometryPipeline::process_scan(const Scan& scan) {
  ScanDiagnostics diag;
  diag.scan_index = scan.scan_index;

  auto t0 = Clock::now();
  const FeatureCloud raw = extract_features(scan, cfg_.features);
  diag.edge_features = static_cast<int>(raw.edges.size());
  diag.planar_features = static_cast<int>(raw.planars.size());
  diag.ms_extract = ms_since(t0);

  if (first_scan_) {
    // Initialization contract: identity pose, unconditional insertion.
    const Pose pose = Pose::Identity();
    t0 = Clock::now();
    map_.insert(raw, pose);
    diag.ms_map = ms_since(t0);
    diag.keyframe_inserted = true;
    last_keyframe_pose_ = pose;
    motion_.update(pose);
    trajectory_.poses.emplace_back(scan.scan_index, pose);
    diag.pose = pose;
    last_diag_ = diag;
    first_scan_ = false;
    return pose;
  }

  const Twist predicted = motion_.predicted_twist;

  t0 = Clock::now();
  FeatureCloud working = raw;
  if (cfg_.mode == CompensationMode::kTwoStage) {
    working.edges = undistort(raw.edges, predicted);
    working.planars = undistort(raw.planars, predicted);
  }
  diag.ms_compensate = ms_since(t0);

  const Pose T_init = motion_.pose_prev * exp_se3(predicted);

  t0 = Clock::now();
  Pose pose;
  try {
    AlignResult result = align(working, map_, T_init, cfg_.gn, cfg_.matching);
    pose = result.pose;
    diag.align = result.diagnostics;
  } catch (const DegeneracyError& e) {
    pose = T_init;  // dead reckoning beats aborting the sequence
    diag.dead_reckoned = true;
    diag.align.edge_correspondences = e.edge_count;
    diag.align.plane_correspondences = e.plane_count;
  }
  diag.ms_align = ms_since(t0);

  FeatureCloud for_map = raw;
  if (cfg_.mode == CompensationMode::kTwoStage) {
    t0 = Clock::now();
    for_map.edges = recompute_undistort(raw.edges, motion_.pose_prev, pose);
    for_map.planars = recompute_undistort(raw.planars, motion_.pose_prev, pose);
    diag.ms_compensate += ms_since(t0);
  }

  t0 = Clock::now();
  diag.keyframe_inserted =
      map_.maybe_insert(for_map, pose, last_keyframe_pose_, cfg_.keyframe);
  if (diag.keyframe_inserted) last_keyframe_pose_ = pose;
  diag.ms_map = ms_since(t0);

  motion_.update(pose);
  trajectory_.poses.emplace_back(scan.scan_index, pose);
  diag.pose = pose;
  last_diag_ = diag;
  return pose;
}

RunResult run_sequence(const std::function<std::optional<Scan>()>& next_scan,
                       const PipelineConfig& cfg) {
  OdometryPipeline pipeline(cfg);
  RunResult result;
  while (auto scan = next_scan()) {
    pipeline.process_scan(*scan);
    result.diagnostics.push_back(pipeline.last_diagnostics());
  }
  result.trajectory = pipeline.trajectory();
  return result;
}

std::string write_trajectory(const Trajectory& traj) {
  std::string out;
  char buf[64];
  for (const auto& [index, pose] : traj.poses) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 4; ++c) {
        const double v =
            c < 3 ? pose.rotation(r, c) : pose.translation(r);
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        out += buf;
        out += (r == 2 && c == 3) ? '\n' : ' ';
      }
    }
  }
  return out;
}

std::string diagnostics_log_line(const ScanDiagnostics& d) {
  std::string out = "scan=" + std::to_string(d.scan_index);
  char buf[64];
  out += " pose=";
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      const double v = c < 3 ? d.pose.rotation(r, c) : d.pose.translation(r);
      std::snprintf(buf, sizeof(buf), "%.12g", v);
      out += buf;
      if (!(r == 2 && c == 3)) out += ',';
    }
  }
  out += " edges=" + std::to_string(d.edge_features);
  out += " planars=" + std::to_string(d.planar_features);
  out += " iterations=" + std::to_string(d.align.iterations);
  std::snprintf(buf, sizeof(buf), "%.9g", d.align.final_cost);
  out += std::string(" cost=") + buf;
  out += " edge_corr=" + std::to_string(d.align.edge_correspondences);
  out += " plane_corr=" + std::to_string(d.align.plane_correspondences);
  out += std::string(" converged=") + (d.align.converged ? "1" : "0");
  out += std::string(" stalled=") + (d.align.step_stalled ? "1" : "0");
  out += std::string(" dead_reckoned=") + (d.dead_reckoned ? "1" : "0");
  out += std::string(" keyframe=") + (d.keyframe_inserted ? "1" : "0");
  return out;
}

}  // namespace lodom
