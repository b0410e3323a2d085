#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "cyclab/generators.hpp"
#include "cyclab/io.hpp"
#include "cyclab/pipeline.hpp"

using namespace cyclab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("cyclab_test_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CYCLAB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST_CASE("presets rerun byte-identically") {
  for (const auto& name : {"circle", "multiplicity-demo", "stirling"}) {
    // The summary embeds out_dir, so both runs share it.
    auto cfg = preset_config(name);
    cfg.out_dir = scratch(name).string();
    const auto ra = run_pipeline(cfg);
    const auto csv = slurp(ra.csv_path), js = slurp(ra.json_path);
    const auto rb = run_pipeline(cfg);
    CHECK(ra.exit_code == 0);
    CHECK(rb.exit_code == 0);
    CHECK(csv == slurp(rb.csv_path));
    CHECK(js == slurp(rb.json_path));
  }
}

TEST_CASE("empty pipeline writes a header-only CSV") {
  ExperimentConfig cfg;
  cfg.name = "empty";
  cfg.out_dir = scratch("empty").string();
  const auto r = run_pipeline(cfg);
  CHECK(r.exit_code == 0);
  CHECK(slurp(r.csv_path) == "stage,series,x,quantity,value\n");
  CHECK(r.summary.contains("config"));
}

TEST_CASE("config round trip and rejection") {
  const auto cfg = preset_config("spiral");
  const auto back = ExperimentConfig::from_json(cfg.to_json());
  CHECK(back.to_json() == cfg.to_json());

  auto j = cfg.to_json();
  j["stages"][0]["op"] = "no-such-op";
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ConfigError);
  auto k = cfg.to_json();
  k["generator"]["n"] = -4;
  CHECK_THROWS_AS(ExperimentConfig::from_json(k), ConfigError);
}

TEST_CASE("a failing stage leaves a partial report") {
  auto cfg = preset_config("circle");
  cfg.out_dir = scratch("partial").string();
  StageConfig bad;
  bad.op = "profile";
  bad.target = "indicator:100000";
  cfg.stages.push_back(bad);
  const auto r = run_pipeline(cfg);
  CHECK(r.exit_code != 0);
  CHECK(fs::exists(r.csv_path));
  CHECK(fs::exists(r.json_path));
  CHECK(slurp(r.csv_path).find("profile") != std::string::npos);
}

TEST_CASE("cli exit codes") {
  const auto d = scratch("exit");
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("preset nope") == 3);
  CHECK(run_cli("measure validate --measure " + (d / "missing.json").string()) == 3);
  CHECK(run_cli("preset circle --out-dir " + d.string()) == 0);
  CHECK(fs::exists(d / "circle.csv"));

  // Weight one on the circle is not cyclic: verdict failure.
  write_json(d / "m.json", measure_to_json(circle_nodes(64)));
  CHECK(run_cli("cyclic test --measure " + (d / "m.json").string() + " --degree-max 10 --report " +
                (d / "c.csv").string()) == 2);
}
