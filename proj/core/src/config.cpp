#include "lodom/config.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lodom {

namespace {

enum class KeyType { kInt, kDouble, kBool, kEnum };

struct KeySpec {
  const char* key;
  KeyType type;
  const char* default_value;
  const char* unit;
  const char* description;
  const char* enum_values;  // pipe-separated, kEnum only
};

constexpr std::array<KeySpec, 34> kRegistry{{
    {"sensor.rings", KeyType::kInt, "16", "count", "laser rings in the vertical array", nullptr},
    {"sensor.columns", KeyType::kInt, "1800", "count", "azimuth samples per revolution", nullptr},
    {"sensor.vertical_min_deg", KeyType::kDouble, "-15", "deg", "lowest ring elevation", nullptr},
    {"sensor.vertical_max_deg", KeyType::kDouble, "15", "deg", "highest ring elevation", nullptr},
    {"sensor.min_range", KeyType::kDouble, "0.5", "m", "returns closer than this are dropped", nullptr},
    {"sensor.max_range", KeyType::kDouble, "100", "m", "returns farther than this are dropped", nullptr},
    {"sensor.clockwise", KeyType::kBool, "false", "flag", "rotation direction of the beam array", nullptr},
    {"features.neighbor_half_width", KeyType::kInt, "5", "count", "neighbors per side in the smoothness window", nullptr},
    {"features.edge_sigma_min", KeyType::kDouble, "0.1", "m", "minimum smoothness of an edge feature", nullptr},
    {"features.planar_sigma_max", KeyType::kDouble, "0.03", "m", "maximum smoothness of a planar feature", nullptr},
    {"features.sectors_per_ring", KeyType::kInt, "6", "count", "equal azimuth sectors per ring", nullptr},
    {"features.max_edges_per_sector", KeyType::kInt, "2", "count", "edge cap per sector", nullptr},
    {"features.max_planars_per_sector", KeyType::kInt, "4", "count", "planar cap per sector", nullptr},
    {"features.smoothness_form", KeyType::kEnum, "norm-of-sum", "enum", "smoothness statistic reading", "norm-of-sum|mean-of-norms"},
    {"features.occlusion_gap_factor", KeyType::kDouble, "1.5", "ratio", "range-gap factor excluding occlusion edges", nullptr},
    {"compensation.mode", KeyType::kEnum, "two-stage", "enum", "distortion compensation mode", "none|two-stage"},
    {"gn.max_iterations", KeyType::kInt, "10", "count", "outer Gauss-Newton iteration cap", nullptr},
    {"gn.update_epsilon", KeyType::kDouble, "1e-5", "unitless", "convergence threshold on the 6-vector update", nullptr},
    {"gn.huber_delta", KeyType::kDouble, "0", "m", "Huber loss width, 0 disables", nullptr},
    {"registration.weight_orientation", KeyType::kEnum, "as-printed", "enum", "sign orientation of the smoothness weights", "as-printed|as-text"},
    {"registration.fit_neighbors", KeyType::kInt, "5", "count", "map neighbors per landmark fit", nullptr},
    {"registration.line_ratio", KeyType::kDouble, "3", "ratio", "eigenvalue ratio accepting a line fit", nullptr},
    {"registration.plane_ratio", KeyType::kDouble, "3", "ratio", "eigenvalue ratio accepting a plane fit", nullptr},
    {"registration.max_edge_distance", KeyType::kDouble, "1", "m", "edge correspondence gate", nullptr},
    {"registration.max_plane_distance", KeyType::kDouble, "1", "m", "plane correspondence gate", nullptr},
    {"registration.fit_radius", KeyType::kDouble, "2", "m", "neighbor radius used for landmark fitting", nullptr},
    {"registration.fit_tolerance", KeyType::kDouble, "0.1", "m", "max neighbor distance from an accepted landmark fit", nullptr},
    {"registration.min_correspondences", KeyType::kInt, "10", "count", "minimum gated correspondences", nullptr},
    {"registration.max_condition", KeyType::kDouble, "1e6", "ratio", "pivot-ratio gate on the normal matrix", nullptr},
    {"map.edge_leaf", KeyType::kDouble, "0.4", "m", "edge map voxel edge length", nullptr},
    {"map.plane_leaf", KeyType::kDouble, "0.8", "m", "plane map voxel edge length", nullptr},
    {"keyframe.translation_threshold", KeyType::kDouble, "0.5", "m", "translation change starting a keyframe", nullptr},
    {"keyframe.rotation_threshold", KeyType::kDouble, "0.175", "rad", "rotation change starting a keyframe", nullptr},
    {"keyframe.every_frame", KeyType::kBool, "false", "flag", "insert every frame regardless of motion", nullptr},
}};

constexpr std::array<KeySpec, 2> kSimRegistry{{
    {"sim.noise_sigma", KeyType::kDouble, "0", "m", "Gaussian range noise of the simulator", nullptr},
    {"sim.seed", KeyType::kInt, "42", "seed", "simulator noise seed", nullptr},
}};

const KeySpec* find_spec(const std::string& key) {
  for (const auto& s : kRegistry) {
    if (key == s.key) return &s;
  }
  for (const auto& s : kSimRegistry) {
    if (key == s.key) return &s;
  }
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": '" + v +
                              "'");
}

double parse_double(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  double out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + key + ": '" + v +
                                "'");
  }
  if (pos != v.size()) {
    throw std::invalid_argument("config: bad number for " + key + ": '" + v +
                                "'");
  }
  return out;
}

int parse_int(const std::string& v, const std::string& key) {
  const double d = parse_double(v, key);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d) {
    throw std::invalid_argument("config: expected integer for " + key + ": '" +
                                v + "'");
  }
  return i;
}

}  // namespace

RunConfig::RunConfig() {
  for (const auto& s : kRegistry) values_[s.key] = s.default_value;
  for (const auto& s : kSimRegistry) values_[s.key] = s.default_value;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  RunConfig cfg;
  cfg.apply(in, path);
  return cfg;
}

void RunConfig::apply(std::istream& in, const std::string& source_name) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(source_name + " line " +
                                  std::to_string(line_no) +
                                  ": expected key = value");
    }
    try {
      set(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(source_name + " line " +
                                  std::to_string(line_no) + ": " + e.what());
    }
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const KeySpec* spec = find_spec(key);
  if (!spec) {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  switch (spec->type) {
    case KeyType::kInt:
      parse_int(value, key);
      break;
    case KeyType::kDouble:
      parse_double(value, key);
      break;
    case KeyType::kBool:
      parse_bool(value, key);
      break;
    case KeyType::kEnum: {
      const std::string options = spec->enum_values;
      bool ok = false;
      std::size_t start = 0;
      while (start <= options.size()) {
        const auto bar = options.find('|', start);
        const std::string opt =
            options.substr(start, bar == std::string::npos ? std::string::npos
                                                           : bar - start);
        if (value == opt) ok = true;
        if (bar == std::string::npos) break;
        start = bar + 1;
      }
      if (!ok) {
        throw std::invalid_argument("config: " + key + " must be one of " +
                                    options);
      }
      break;
    }
  }
  values_[key] = value;
}

std::string RunConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  return it->second;
}

double RunConfig::get_double(const std::string& key) const {
  return parse_double(get(key), key);
}

int RunConfig::get_int(const std::string& key) const {
  return parse_int(get(key), key);
}

bool RunConfig::get_bool(const std::string& key) const {
  return parse_bool(get(key), key);
}

SensorConfig RunConfig::sensor() const {
  return SensorConfig::Uniform(
      get_int("sensor.rings"), get_double("sensor.vertical_min_deg"),
      get_double("sensor.vertical_max_deg"), get_int("sensor.columns"),
      get_double("sensor.min_range"), get_double("sensor.max_range"),
      get_bool("sensor.clockwise"));
}

PipelineConfig RunConfig::pipeline() const {
  PipelineConfig cfg;
  cfg.features.neighbor_half_width = get_int("features.neighbor_half_width");
  cfg.features.edge_sigma_min = get_double("features.edge_sigma_min");
  cfg.features.planar_sigma_max = get_double("features.planar_sigma_max");
  cfg.features.sectors_per_ring = get_int("features.sectors_per_ring");
  cfg.features.max_edges_per_sector = get_int("features.max_edges_per_sector");
  cfg.features.max_planars_per_sector =
      get_int("features.max_planars_per_sector");
  cfg.features.smoothness_form = get("features.smoothness_form") == "norm-of-sum"
                                     ? SmoothnessForm::kNormOfSum
                                     : SmoothnessForm::kMeanOfNorms;
  cfg.features.occlusion_gap_factor =
      get_double("features.occlusion_gap_factor");

  cfg.mode = get("compensation.mode") == "none" ? CompensationMode::kNone
                                                : CompensationMode::kTwoStage;

  cfg.gn.max_outer_iterations = get_int("gn.max_iterations");
  cfg.gn.update_norm_epsilon = get_double("gn.update_epsilon");
  cfg.gn.huber_delta = get_double("gn.huber_delta");

  cfg.matching.weight_orientation =
      get("registration.weight_orientation") == "as-printed"
          ? WeightOrientation::kAsPrinted
          : WeightOrientation::kAsText;
  cfg.matching.fit_neighbors = get_int("registration.fit_neighbors");
  cfg.matching.line_ratio = get_double("registration.line_ratio");
  cfg.matching.plane_ratio = get_double("registration.plane_ratio");
  cfg.matching.max_edge_distance = get_double("registration.max_edge_distance");
  cfg.matching.max_plane_distance =
      get_double("registration.max_plane_distance");
  cfg.matching.fit_radius = get_double("registration.fit_radius");
  cfg.matching.fit_tolerance = get_double("registration.fit_tolerance");
  cfg.matching.min_correspondences =
      get_int("registration.min_correspondences");
  cfg.matching.max_condition = get_double("registration.max_condition");

  cfg.map.edge_leaf = get_double("map.edge_leaf");
  cfg.map.plane_leaf = get_double("map.plane_leaf");

  cfg.keyframe.translation_threshold =
      get_double("keyframe.translation_threshold");
  cfg.keyframe.rotation_threshold = get_double("keyframe.rotation_threshold");
  cfg.keyframe.every_frame = get_bool("keyframe.every_frame");
  return cfg;
}

SimulatorOptions RunConfig::simulator() const {
  SimulatorOptions opts;
  opts.noise_sigma = get_double("sim.noise_sigma");
  opts.seed = static_cast<std::uint32_t>(get_int("sim.seed"));
  return opts;
}

std::string RunConfig::help_text() {
  std::ostringstream out;
  out << "Configuration keys (key = value, '#' comments):\n";
  auto emit = [&out](const KeySpec& s) {
    out << "  " << s.key << " = " << s.default_value << "  [" << s.unit << "] "
        << s.description;
    if (s.enum_values) out << " (" << s.enum_values << ")";
    out << "\n";
  };
  for (const auto& s : kRegistry) emit(s);
  for (const auto& s : kSimRegistry) emit(s);
  return out.str();
}

}  // namespace lodom
