#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "lodom/config.hpp"
#include "lodom/eval.hpp"
#include "lodom/pipeline.hpp"
#include "lodom/simulator.hpp"

namespace fs = std::filesystem;
using namespace lodom;

namespace {

std::vector<std::byte> read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<char> data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  std::vector<std::byte> bytes(data.size());
  std::memcpy(bytes.data(), data.data(), data.size());
  return bytes;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::vector<fs::path> list_scan_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("scan directory not found: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".bin") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<double> parse_lengths(const std::string& csv) {
  std::vector<double> lengths;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    lengths.push_back(std::stod(item));
    if (lengths.back() <= 0.0) {
      throw std::runtime_error("segment lengths must be positive");
    }
  }
  if (lengths.empty()) throw std::runtime_error("no segment lengths given");
  return lengths;
}

Twist parse_twist(const std::string& csv) {
  std::vector<double> vals;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  if (vals.size() != 6) {
    throw std::runtime_error(
        "twist needs 6 comma-separated values: vx,vy,vz,wx,wy,wz per scan");
  }
  Twist xi;
  xi.rho = {vals[0], vals[1], vals[2]};
  xi.phi = {vals[3], vals[4], vals[5]};
  return xi;
}

RunConfig load_config(const std::string& path, const std::string& mode) {
  RunConfig cfg = path.empty() ? RunConfig() : RunConfig::from_file(path);
  if (!mode.empty()) cfg.set("compensation.mode", mode);
  return cfg;
}

struct SequenceOutput {
  RunResult result;
  double mean_ms = 0.0;
};

SequenceOutput run_files(const std::vector<fs::path>& files,
                         const RunConfig& cfg) {
  const SensorConfig sensor = cfg.sensor();
  std::size_t next = 0;
  SequenceOutput out;
  out.result = run_sequence(
      [&]() -> std::optional<Scan> {
        if (next >= files.size()) return std::nullopt;
        Scan scan;
        try {
          scan = read_kitti_bin(read_file_bytes(files[next]), sensor);
        } catch (const std::exception& e) {
          throw std::runtime_error("scan " + std::to_string(next) + " (" +
                                   files[next].string() + "): " + e.what());
        }
        scan.scan_index = static_cast<int>(next);
        ++next;
        return scan;
      },
      cfg.pipeline());
  double total = 0.0;
  for (const auto& d : out.result.diagnostics) total += d.ms_total();
  out.mean_ms = out.result.diagnostics.empty()
                    ? 0.0
                    : total / out.result.diagnostics.size();
  return out;
}

std::string timings_text(const RunResult& result) {
  std::string text =
      "# scan ms_extract ms_compensate ms_align ms_map ms_total\n";
  char buf[160];
  for (const auto& d : result.diagnostics) {
    std::snprintf(buf, sizeof(buf), "%d %.3f %.3f %.3f %.3f %.3f\n",
                  d.scan_index, d.ms_extract, d.ms_compensate, d.ms_align,
                  d.ms_map, d.ms_total());
    text += buf;
  }
  return text;
}

int cmd_run(const std::string& scans_dir, const std::string& config_path,
            const std::string& mode, const std::string& output_dir) {
  const RunConfig cfg = load_config(config_path, mode);
  const auto files = list_scan_files(scans_dir);
  if (files.empty()) {
    std::cerr << "no scans found in " << scans_dir << "\n";
    return 1;
  }
  fs::create_directories(output_dir);

  const SequenceOutput out = run_files(files, cfg);

  write_text_file(fs::path(output_dir) / "trajectory.txt",
                  write_trajectory(out.result.trajectory));
  std::string log;
  for (const auto& d : out.result.diagnostics) {
    log += diagnostics_log_line(d);
    log += '\n';
  }
  write_text_file(fs::path(output_dir) / "run_log.txt", log);
  write_text_file(fs::path(output_dir) / "timings.txt",
                  timings_text(out.result));

  char buf[128];
  std::snprintf(buf, sizeof(buf), "scans=%zu mean_ms_per_scan=%.3f\n",
                files.size(), out.mean_ms);
  write_text_file(fs::path(output_dir) / "summary.txt", buf);
  std::cout << buf;
  return 0;
}

int cmd_simulate(const std::string& scene_path, const std::string& config_path,
                 int count, const std::string& twist_csv,
                 const std::string& schedule_path,
                 const std::string& output_dir) {
  const RunConfig cfg = load_config(config_path, "");
  const Scene scene = load_scene(scene_path);
  const SensorConfig sensor = cfg.sensor();
  SimulatorOptions opts = cfg.simulator();

  // Motion: either one constant twist or a piecewise-constant schedule of
  // "count vx vy vz wx wy wz" lines.
  std::vector<Twist> per_scan;
  if (!schedule_path.empty()) {
    std::ifstream in(schedule_path);
    if (!in) throw std::runtime_error("cannot open " + schedule_path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      double n, vx, vy, vz, wx, wy, wz;
      if (!(ss >> n)) continue;
      if (!(ss >> vx >> vy >> vz >> wx >> wy >> wz)) {
        throw std::runtime_error("schedule line " + std::to_string(line_no) +
                                 ": expected count and 6 twist values");
      }
      Twist xi;
      xi.rho = {vx, vy, vz};
      xi.phi = {wx, wy, wz};
      for (int i = 0; i < static_cast<int>(n); ++i) per_scan.push_back(xi);
    }
    count = static_cast<int>(per_scan.size());
  } else {
    const Twist xi = twist_csv.empty() ? Twist::Zero() : parse_twist(twist_csv);
    per_scan.assign(count, xi);
  }

  fs::create_directories(output_dir);
  Trajectory gt;
  Pose pose = Pose::Identity();
  for (int k = 0; k < count; ++k) {
    SimulatorOptions scan_opts = opts;
    scan_opts.seed = opts.seed + static_cast<std::uint32_t>(k);
    auto sim = simulate_scan(scene, pose, per_scan[k], sensor, scan_opts);
    sim.scan.scan_index = k;

    char name[32];
    std::snprintf(name, sizeof(name), "%06d.bin", k);
    const auto bytes = write_kitti_bin(sim.scan);
    std::ofstream out(fs::path(output_dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write scan file");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));

    gt.poses.emplace_back(k, pose);
    pose = pose * exp_se3(per_scan[k]);
  }
  write_text_file(fs::path(output_dir) / "gt_poses.txt", write_trajectory(gt));
  std::cout << "wrote " << count << " scans to " << output_dir << "\n";
  return 0;
}

int cmd_eval(const std::string& est_path, const std::string& gt_path,
             const std::string& lengths_csv) {
  const Trajectory est = read_kitti_poses_file(est_path);
  const Trajectory gt = read_kitti_poses_file(gt_path);
  const auto lengths = parse_lengths(lengths_csv);
  const ErrorReport report = evaluate(est, gt, lengths);
  std::cout << format_report(report);
  return 0;
}

int cmd_ablate(const std::string& scans_dir, const std::string& gt_path,
               const std::string& config_path, const std::string& lengths_csv,
               const std::string& output_dir) {
  const auto files = list_scan_files(scans_dir);
  if (files.empty()) {
    std::cerr << "no scans found in " << scans_dir << "\n";
    return 1;
  }
  const Trajectory gt = read_kitti_poses_file(gt_path);
  const auto lengths = parse_lengths(lengths_csv);
  if (!output_dir.empty()) fs::create_directories(output_dir);

  std::cout << "mode       mean_ms_per_frame   rmse_m     ate_percent  "
               "are_deg_per_m\n";
  for (const std::string mode : {"none", "two-stage"}) {
    const RunConfig cfg = load_config(config_path, mode);
    const SequenceOutput out = run_files(files, cfg);

    double rmse = 0.0;
    const std::size_t n =
        std::min(gt.size(), out.result.trajectory.size());
    for (std::size_t i = 0; i < n; ++i) {
      rmse += (out.result.trajectory.poses[i].second.translation -
               gt.poses[i].second.translation)
                  .squaredNorm();
    }
    rmse = n > 0 ? std::sqrt(rmse / n) : 0.0;

    const ErrorReport report =
        evaluate(out.result.trajectory, gt, lengths);

    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-10s %17.3f   %8.4f   %11.4f  %13.6f\n",
                  mode.c_str(), out.mean_ms, rmse, report.ate_percent,
                  report.are_deg_per_m);
    std::cout << buf;

    if (!output_dir.empty()) {
      write_text_file(fs::path(output_dir) / ("trajectory_" + mode + ".txt"),
                      write_trajectory(out.result.trajectory));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LiDAR odometry and mapping: run sequences, simulate "
               "ground-truth datasets, and score trajectories"};
  app.require_subcommand(1);
  app.footer(RunConfig::help_text());

  std::string scans_dir, config_path, output_dir, mode;
  auto* run = app.add_subcommand("run", "run odometry over a scan directory");
  run->add_option("--scans", scans_dir, "directory of KITTI .bin scans")
      ->required();
  run->add_option("--config", config_path, "key=value config file");
  run->add_option("--output", output_dir, "output directory")->required();
  run->add_option("--mode", mode, "compensation mode: none|two-stage");

  std::string scene_path, twist_csv, schedule_path;
  int count = 0;
  auto* simulate =
      app.add_subcommand("simulate", "generate a simulated dataset");
  simulate->add_option("--scene", scene_path, "scene file")->required();
  simulate->add_option("--config", config_path, "key=value config file");
  simulate->add_option("--output", output_dir, "output directory")->required();
  simulate->add_option("--count", count, "number of scans");
  simulate->add_option("--twist", twist_csv,
                       "constant per-scan twist vx,vy,vz,wx,wy,wz");
  simulate->add_option("--schedule", schedule_path,
                       "piecewise schedule file: count + 6 twist values");

  std::string est_path, gt_path;
  std::string lengths_csv = "100,200,300,400,500,600,700,800";
  auto* eval_cmd =
      app.add_subcommand("eval", "score a trajectory against ground truth");
  eval_cmd->add_option("--est", est_path, "estimated trajectory")->required();
  eval_cmd->add_option("--gt", gt_path, "ground-truth trajectory")->required();
  eval_cmd->add_option("--lengths", lengths_csv, "segment lengths, csv meters");

  auto* ablate = app.add_subcommand(
      "ablate", "compare compensation modes on one dataset");
  ablate->add_option("--scans", scans_dir, "directory of KITTI .bin scans")
      ->required();
  ablate->add_option("--gt", gt_path, "ground-truth trajectory")->required();
  ablate->add_option("--config", config_path, "key=value config file");
  ablate->add_option("--lengths", lengths_csv, "segment lengths, csv meters");
  ablate->add_option("--output", output_dir, "trajectory output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(scans_dir, config_path, mode, output_dir);
    }
    if (simulate->parsed()) {
      return cmd_simulate(scene_path, config_path, count, twist_csv,
                          schedule_path, output_dir);
    }
    if (eval_cmd->parsed()) {
      return cmd_eval(est_path, gt_path, lengths_csv);
    }
    if (ablate->parsed()) {
      return cmd_ablate(scans_dir, gt_path, config_path, lengths_csv,
                        output_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
