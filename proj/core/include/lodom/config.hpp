#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "lodom/pipeline.hpp"
#include "lodom/pointcloud.hpp"
#include "lodom/simulator.hpp"

namespace lodom {

/// Flat key=value run configuration with dotted prefixes, e.g.
/// `features.edge_sigma_min = 0.05`. Every key has a documented default;
/// unknown keys are rejected. '#' starts a comment.
class RunConfig {
 public:
  RunConfig();  // defaults

  static RunConfig from_file(const std::string& path);
  void apply(std::istream& in, const std::string& source_name = "config");

  /// Throws std::invalid_argument for unknown keys or unparseable values.
  void set(const std::string& key, const std::string& value);

  std::string get(const std::string& key) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  SensorConfig sensor() const;
  PipelineConfig pipeline() const;
  SimulatorOptions simulator() const;

  /// All keys with defaults, units, and descriptions.
  static std::string help_text();

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace lodom
