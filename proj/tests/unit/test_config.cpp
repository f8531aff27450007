#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "lpai_app/config.hpp"

using namespace lpai;
using namespace lpai::app;

namespace {
const char* kMinimal = "temperature: 1.0\ntheta: 0.78\nphi: 0.0005\n";

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class F>
ConfigError expect_config_error(F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected ConfigError");
  return ConfigError("", 0, "");
}
}  // namespace

TEST_CASE("minimal document takes defaults") {
  const auto cfg = parse_config(kMinimal);
  CHECK(cfg.temperature == 1.0);
  CHECK(cfg.theta == 0.78);
  CHECK(cfg.phi == 0.0005);
  ExperimentConfig want;
  want.temperature = 1.0;
  want.theta = 0.78;
  want.phi = 0.0005;
  CHECK(cfg == want);
  CHECK(cfg.frequency_grid.points == 6001);
  CHECK(cfg.pipeline().fgrid.zero_index() == 3000);
}

TEST_CASE("out-of-range theta names the key and line") {
  const auto e = expect_config_error([] { parse_config("temperature: 1.0\nphi: 0.1\ntheta: 2.0\n"); });
  CHECK(e.key() == "theta");
  CHECK(e.line() == 3);
  CHECK(std::string(e.what()).find("theta") != std::string::npos);
}

TEST_CASE("duplicate keys are rejected") {
  const auto e = expect_config_error([] { parse_config("temperature: 1.0\ntheta: 0.7\nphi: 0.1\ntheta: 0.6\n"); });
  CHECK(e.key() == "theta");
  CHECK(e.line() == 4);
}

TEST_CASE("unknown keys are rejected, also inside sections") {
  auto e = expect_config_error([] { parse_config(std::string(kMinimal) + "temprature: 2\n"); });
  CHECK(e.key() == "temprature");
  e = expect_config_error([] { parse_config(std::string(kMinimal) + "sweep:\n  pionts: 10\n"); });
  CHECK(e.key() == "sweep.pionts");
  CHECK(e.line() == 5);
  e = expect_config_error([] { parse_config(std::string(kMinimal) + "sweep: 3\n"); });
  CHECK(e.key() == "sweep");
}

TEST_CASE("type mismatches are rejected") {
  auto e = expect_config_error([] { parse_config("temperature: hot\ntheta: 0.7\nphi: 0.1\n"); });
  CHECK(e.key() == "temperature");
  CHECK(e.line() == 1);
  e = expect_config_error([] { parse_config(std::string(kMinimal) + "sweep:\n  points: 2.5\n"); });
  CHECK(e.key() == "sweep.points");
  e = expect_config_error([] { parse_config(std::string(kMinimal) + "broaden: maybe\n"); });
  CHECK(e.key() == "broaden");
  e = expect_config_error([] { parse_config(std::string(kMinimal) + "seed: -3\n"); });
  CHECK(e.key() == "seed");
}

TEST_CASE("missing required keys are reported") {
  const auto e = expect_config_error([] { parse_config("temperature: 1.0\ntheta: 0.7\n"); });
  CHECK(e.key() == "phi");
  CHECK_THROWS_AS(parse_config("- 1\n- 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("temperature: [1\n"), ConfigError);
}

TEST_CASE("range checks") {
  const std::string base = kMinimal;
  CHECK(expect_config_error([&] { parse_config(base + "frequency_grid:\n  points: 6000\n"); }).key() ==
        "frequency_grid.points");
  CHECK(expect_config_error([&] { parse_config("temperature: 0\ntheta: 0.7\nphi: 0.1\n"); }).key() == "temperature");
  CHECK(expect_config_error([&] { parse_config("temperature: 1\ntheta: 0.7\nphi: 3.2\n"); }).key() == "phi");
  CHECK(expect_config_error([&] { parse_config(base + "noise:\n  snr: 0\n"); }).key() == "noise.snr");

  ExperimentConfig cfg = parse_config(kMinimal);
  cfg.theta = 0.0;
  const auto e = expect_config_error([&] { validate(cfg); });
  CHECK(e.key() == "theta");
  CHECK(e.line() == 0);
}

TEST_CASE("JSON echo re-parses to the same configuration") {
  auto cfg = parse_config(std::string(kMinimal) + "seed: 99\nsweep:\n  points: 17\nbroaden: false\n");
  const auto echo = cfg.to_json();
  CHECK(echo.at("seed") == 99);
  CHECK(echo.at("sweep").at("points") == 17);
  CHECK(parse_config(echo.dump()) == cfg);
  CHECK(parse_config(echo.dump(2)) == cfg);
}

TEST_CASE("shipped configurations parse") {
  for (const char* name : {"default.yaml", "figures.yaml"}) {
    const auto text = slurp(std::string(LPAI_CONFIG_DIR) + "/" + name);
    REQUIRE_FALSE(text.empty());
    const auto cfg = parse_config(text);
    CHECK(cfg.theta > 0.0);
    CHECK(parse_config(cfg.to_json().dump()) == cfg);
  }
  const auto fig = parse_config(slurp(std::string(LPAI_CONFIG_DIR) + "/figures.yaml"));
  CHECK(fig.k_eff == 1.1e9);
}
