#include "lodom/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lodom {

ErrorReport evaluate(const Trajectory& est, const Trajectory& gt,
                     std::span<const double> segment_lengths) {
  if (est.size() != gt.size()) {
    throw std::invalid_argument("evaluate: trajectory lengths differ");
  }
  const std::size_t n = gt.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (est.poses[i].first != gt.poses[i].first) {
      throw std::invalid_argument("evaluate: scan indices do not match");
    }
  }

  // Cumulative ground-truth arc length.
  std::vector<double> dist(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    dist[i] = dist[i - 1] + (gt.poses[i].second.translation -
                             gt.poses[i - 1].second.translation)
                                .norm();
  }
  const double total_path = n > 0 ? dist.back() : 0.0;

  ErrorReport report;
  double sum_trans = 0.0;
  double sum_rot = 0.0;

  for (double length : segment_lengths) {
    if (length > total_path) {
      report.skipped_lengths.push_back(length);
      continue;
    }
    ErrorReport::LengthEntry entry;
    entry.length_m = length;
    double len_trans = 0.0;
    double len_rot = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
      // First frame whose path distance from i reaches the length.
      const auto it =
          std::lower_bound(dist.begin() + i, dist.end(), dist[i] + length);
      if (it == dist.end()) break;  // no later start frame can reach it
      const std::size_t j = static_cast<std::size_t>(it - dist.begin());

      // Relative motions compared in the body frame of the start pose;
      // this form cancels any constant gauge on either trajectory.
      const Pose gt_motion =
          gt.poses[i].second.inverse() * gt.poses[j].second;
      const Pose est_motion =
          est.poses[i].second.inverse() * est.poses[j].second;
      const Pose delta = gt_motion.inverse() * est_motion;
      const double trans_err = delta.translation.norm() / length;
      const double rot_err =
          delta.rotation_angle() * 180.0 / M_PI / length;  // deg per m
      len_trans += trans_err;
      len_rot += rot_err;
      ++entry.pairs;
    }

    if (entry.pairs > 0) {
      entry.ate_percent = 100.0 * len_trans / entry.pairs;
      entry.are_deg_per_m = len_rot / entry.pairs;
      sum_trans += len_trans;
      sum_rot += len_rot;
      report.pair_count += entry.pairs;
    }
    report.per_length.push_back(entry);
  }

  if (report.pair_count > 0) {
    report.ate_percent = 100.0 * sum_trans / report.pair_count;
    report.are_deg_per_m = sum_rot / report.pair_count;
  }
  return report;
}

Trajectory read_kitti_poses(std::istream& in) {
  Trajectory traj;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    std::vector<double> vals;
    double v;
    while (ss >> v) vals.push_back(v);
    if (vals.size() != 12) {
      throw std::runtime_error("pose line " + std::to_string(line_no) +
                               ": expected 12 fields, got " +
                               std::to_string(vals.size()));
    }
    Pose pose;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) pose.rotation(r, c) = vals[4 * r + c];
      pose.translation(r) = vals[4 * r + 3];
    }
    traj.poses.emplace_back(static_cast<int>(traj.poses.size()), pose);
  }
  return traj;
}

Trajectory read_kitti_poses_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pose file: " + path);
  return read_kitti_poses(in);
}

std::string format_report(const ErrorReport& report) {
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof(buf),
                "ate %.4f %%   are %.6f deg/m   pairs %zu\n",
                report.ate_percent, report.are_deg_per_m, report.pair_count);
  out += buf;
  out += "length_m   ate_percent   are_deg_per_m   pairs\n";
  for (const auto& e : report.per_length) {
    std::snprintf(buf, sizeof(buf), "%8.1f   %11.4f   %13.6f   %5zu\n",
                  e.length_m, e.ate_percent, e.are_deg_per_m, e.pairs);
    out += buf;
  }
  for (double skipped : report.skipped_lengths) {
    std::snprintf(buf, sizeof(buf),
                  "note: segment length %.1f m exceeds the ground-truth path, "
                  "skipped\n",
                  skipped);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf),
                "ate_percent=%.9g are_deg_per_m=%.9g pairs=%zu\n",
                report.ate_percent, report.are_deg_per_m, report.pair_count);
  out += buf;
  return out;
}

}  // namespace lodom
