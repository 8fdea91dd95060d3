#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "hcgrowth/harness.hpp"

using namespace hcgrowth;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = read_file(e.path());
  return out;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("hcgrowth_test_" + name);
  fs::remove_all(p);
  return p;
}

RunConfig toy_config(std::int64_t n_max = 400, int k_max = 1) {
  RunConfig cfg;
  cfg.C = 1.0;
  cfg.c = 1.0;
  cfg.k_max = k_max;
  cfg.n_max = n_max;
  return cfg;
}

}  // namespace

TEST_CASE("config keys") {
  RunConfig cfg;
  cfg.set("gamma", "0.8");
  cfg.set("p", "inf");
  cfg.set("k-max", "3");
  cfg.set("n_max", "500");
  cfg.set("mode", "relaxed");
  cfg.set("refinement", "false");
  cfg.set("orbit_sample", "12");
  cfg.set("suites", "growth,orbit");
  CHECK(cfg.gamma == 0.8);
  CHECK(std::isinf(cfg.p));
  CHECK(cfg.k_max == 3);
  CHECK(cfg.n_max == 500);
  CHECK_FALSE(cfg.refinement);
  CHECK(cfg.orbit_sample == 12u);
  CHECK(cfg.suite_growth);
  CHECK(cfg.suite_orbit);
  CHECK_FALSE(cfg.suite_construct);
  cfg.set("orbit_sample", "all");
  CHECK_FALSE(cfg.orbit_sample.has_value());
  CHECK_THROWS_AS(cfg.set("colour", "red"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set("gamma", "abc"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set("k_max", "2.5"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set("refinement", "maybe"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.select_suites("plots"), std::invalid_argument);
}

TEST_CASE("config file") {
  const auto dir = scratch("config");
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "run.cfg");
    out << "# toy run\n gamma = 0.7 \n\nC=1  # comment\nc = 1\nk_max=2\n";
  }
  const auto cfg = load_config(dir / "run.cfg");
  CHECK(cfg.gamma == 0.7);
  CHECK(cfg.C == 1.0);
  CHECK(cfg.k_max == 2);
  {
    std::ofstream out(dir / "bad.cfg");
    out << "gamma 0.7\n";
  }
  CHECK_THROWS_AS(load_config(dir / "bad.cfg"), std::invalid_argument);
  CHECK_THROWS_AS(load_config(dir / "missing.cfg"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("config consistency") {
  RunConfig cfg = toy_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.e_exponent = 2.0;
  CHECK_NOTHROW(cfg.validate());
  cfg.p = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // regime wants q = 3
  cfg.e_exponent = 3.0;
  CHECK_NOTHROW(cfg.validate());
  cfg = toy_config();
  cfg.gamma = 0.3;
  try {
    cfg.validate();
    FAIL("accepted gamma = 0.3");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("(1/2, 1)") != std::string::npos);
  }
  cfg = toy_config();
  cfg.select_k = 3;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("config echo") {
  const auto j = toy_config().to_json();
  CHECK(j["gamma"] == 0.75);
  CHECK(j["p"] == "inf");
  CHECK(j["e_exponent"] == 2.0);
  CHECK(j["regime"] == "p>=2");
  CHECK(j["mode"] == "relaxed");
  CHECK(j["quadrature"]["min_nodes"] == 64);
  CHECK(json_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(json_number(std::nan("")) == "nan");
}

TEST_CASE("toy bundle") {
  const auto cfg = toy_config(400, 1);
  const auto bundle = run_suite(cfg);
  CHECK(bundle.all_pass());
  for (const char* s : {"construct", "blocks", "growth", "orbit", "density"}) {
    CAPTURE(s);
    REQUIRE(bundle.suite_pass.count(s) == 1);
    CHECK(bundle.suite_pass.at(s));
  }
  for (const auto& [stem, report] : bundle.reports) {
    CAPTURE(stem);
    CHECK(report["schema"] == kSchemaVersion);
    CHECK(report["config"] == cfg.to_json());
  }
  const auto& construct = bundle.reports.at("construct_report");
  CHECK(construct["blocks_built"] == 78);  // n = 90, 94, ..., 398
  CHECK(construct["audit"]["disjointness_failures"] == 0);
  REQUIRE(bundle.series_meta.has_value());
  CHECK((*bundle.series_meta)["blocks"].size() == 78);
  CHECK((*bundle.series_meta)["blocks"][0]["hitting"][0] == 8100);

  const auto dir = scratch("bundle");
  write_bundle(bundle, dir);
  for (const char* f : {"series.csv", "series_meta.json", "construct_report.json", "block_checks.json",
                        "growth_report.json", "orbit_report.json", "tk_density.json", "summary.json",
                        "growth_gamma.csv", "tk_density.csv", "kernel_norms.csv"}) {
    CAPTURE(f);
    CHECK(fs::exists(dir / f));
  }
  const auto growth = read_file(dir / "growth_gamma.csv");
  CHECK(growth.rfind("r,log_Mp,Gamma\n", 0) == 0);
  CHECK(std::count(growth.begin(), growth.end(), '\n') == 51);
  const auto first = snapshot(dir);
  write_bundle(run_suite(cfg), dir);
  CHECK(snapshot(dir) == first);
  fs::remove_all(dir);
}

TEST_CASE("suite selection") {
  auto cfg = toy_config(400, 1);
  cfg.select_suites("construct,density");
  const auto bundle = run_suite(cfg);
  CHECK(bundle.reports.count("construct_report") == 1);
  CHECK(bundle.reports.count("tk_density") == 1);
  CHECK(bundle.reports.count("growth_report") == 0);
  CHECK(bundle.suite_pass.count("orbit") == 0);
}

TEST_CASE("paper mode reports thresholds only") {
  RunConfig cfg;
  cfg.mode = ConstructionMode::paper;
  cfg.c = 0.9;
  cfg.C = 1e5;
  const auto bundle = run_suite(cfg);
  CHECK(bundle.paper_mode);
  CHECK(bundle.all_pass());
  const auto& r = bundle.reports.at("construct_report");
  CHECK(r["status"] == "paper-mode: thresholds only");
  CHECK(r["activation"]["1"]["first_active_n"].is_null());
  CHECK_FALSE(bundle.series_csv.has_value());
}

TEST_CASE("empty series gives header-only plot data") {
  auto cfg = toy_config(50, 1);
  const auto bundle = run_suite(cfg);
  CHECK(bundle.all_pass());
  const auto dir = scratch("empty");
  emit_plot_data(bundle, dir);
  CHECK(read_file(dir / "growth_gamma.csv") == "r,log_Mp,Gamma\n");
  CHECK(read_file(dir / "tk_density.csv") == "k,n,ratio,running_max\n");
  CHECK(read_file(dir / "kernel_norms.csv") == "N,family,plus_count,p,norm,bound\n");
  fs::remove_all(dir);
  emit_plot_data(ReportBundle{}, dir);
  CHECK(read_file(dir / "growth_gamma.csv") == "r,log_Mp,Gamma\n");
  fs::remove_all(dir);
}

TEST_CASE("unwritable output directory") {
  const auto dir = scratch("blocked");
  fs::create_directories(dir.parent_path());
  { std::ofstream(dir) << "file in the way"; }
  CHECK_THROWS_AS(emit_plot_data(ReportBundle{}, dir / "sub"), IoError);
  fs::remove(dir);
}
