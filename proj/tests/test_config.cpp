#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "lodom/config.hpp"

using namespace lodom;

TEST_CASE("defaults materialize into the module configs") {
  const RunConfig cfg;
  const PipelineConfig p = cfg.pipeline();
  CHECK(p.features.neighbor_half_width == 5);
  CHECK(p.features.edge_sigma_min == doctest::Approx(0.1));
  CHECK(p.features.planar_sigma_max == doctest::Approx(0.03));
  CHECK(p.mode == CompensationMode::kTwoStage);
  CHECK(p.gn.max_outer_iterations == 10);
  CHECK(p.gn.update_norm_epsilon == doctest::Approx(1e-5));
  CHECK(p.matching.weight_orientation == WeightOrientation::kAsPrinted);
  CHECK(p.map.edge_leaf == doctest::Approx(0.4));
  CHECK(p.map.plane_leaf == doctest::Approx(0.8));
  CHECK(p.keyframe.translation_threshold == doctest::Approx(0.5));

  const SensorConfig s = cfg.sensor();
  CHECK(s.ring_count == 16);
  CHECK(s.columns_per_rev == 1800);
}

TEST_CASE("config files parse key = value lines with comments") {
  std::istringstream in(
      "# tuned for the small room\n"
      "features.edge_sigma_min = 0.02   # desk scale\n"
      "compensation.mode = none\n"
      "sensor.rings = 64\n"
      "\n"
      "keyframe.every_frame = true\n");
  RunConfig cfg;
  cfg.apply(in);
  CHECK(cfg.get_double("features.edge_sigma_min") == doctest::Approx(0.02));
  CHECK(cfg.pipeline().mode == CompensationMode::kNone);
  CHECK(cfg.sensor().ring_count == 64);
  CHECK(cfg.pipeline().keyframe.every_frame);
}

TEST_CASE("unknown keys are rejected with the source line") {
  std::istringstream in("features.no_such_knob = 1\n");
  RunConfig cfg;
  CHECK_THROWS_AS(cfg.apply(in), std::invalid_argument);
  try {
    std::istringstream again("\nfeatures.no_such_knob = 1\n");
    RunConfig cfg2;
    cfg2.apply(again, "test.cfg");
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    CHECK(what.find("test.cfg line 2") != std::string::npos);
    CHECK(what.find("no_such_knob") != std::string::npos);
  }
}

TEST_CASE("values are validated by type") {
  RunConfig cfg;
  CHECK_THROWS_AS(cfg.set("sensor.rings", "sixteen"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set("sensor.rings", "16.5"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set("sensor.clockwise", "maybe"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set("compensation.mode", "three-stage"),
                  std::invalid_argument);
  CHECK_NOTHROW(cfg.set("compensation.mode", "none"));
  CHECK_NOTHROW(cfg.set("gn.update_epsilon", "1e-7"));
}

TEST_CASE("help text lists every key with its default and unit") {
  const std::string help = RunConfig::help_text();
  for (const char* key :
       {"sensor.rings", "features.edge_sigma_min", "compensation.mode",
        "gn.max_iterations", "registration.weight_orientation",
        "map.edge_leaf", "keyframe.translation_threshold",
        "sim.noise_sigma"}) {
    CHECK(help.find(key) != std::string::npos);
  }
  CHECK(help.find("[m]") != std::string::npos);
  CHECK(help.find("[rad]") != std::string::npos);
  CHECK(help.find("two-stage") != std::string::npos);
}
