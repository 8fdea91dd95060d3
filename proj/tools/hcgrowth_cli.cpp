// hcgrowth: construct the relaxed-constant functions and run the verification
// suites over them.
//
// Exit status: 0 all asserted checks pass, 1 a check failed, 2 usage error,
// 3 I/O error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcgrowth/harness.hpp"

namespace {

namespace fs = std::filesystem;
using hcgrowth::Json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Globals {
  std::string config_file;
  std::string out_dir;
};

using Overrides = std::vector<std::pair<std::string, std::string>>;

void add_override(CLI::App* sub, Overrides& overrides, const std::string& flag,
                  const std::string& key, const std::string& help) {
  sub->add_option_function<std::string>(
      flag, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); }, help);
}

void add_run_options(CLI::App* sub, Overrides& o) {
  add_override(sub, o, "--gamma", "gamma", "density scale exponent, in (1/2, 1)");
  add_override(sub, o, "--p", "p", "L^p exponent (> 1, 'inf' allowed)");
  add_override(sub, o, "--c", "c", "separation constant c");
  add_override(sub, o, "--C", "C", "alpha_k constant C");
  add_override(sub, o, "--e-exponent", "e_exponent", "2 or q; checked against the regime");
  add_override(sub, o, "--k-max", "k_max", "largest dyadic class built");
  add_override(sub, o, "--n-max", "n_max", "largest block index n");
  add_override(sub, o, "--mode", "mode", "relaxed|paper");
  add_override(sub, o, "--min-nodes", "min_nodes", "minimum quadrature nodes");
  add_override(sub, o, "--refinement", "refinement", "refine sampled maxima (true|false)");
  add_override(sub, o, "--tail-eps", "tail_eps", "relative tail truncation");
  add_override(sub, o, "--growth-points", "growth_points", "size of the default growth grid");
  add_override(sub, o, "--orbit-nodes", "orbit_nodes", "nodes on |z| = l_k for orbit checks");
  add_override(sub, o, "--density-slack", "density_slack", "slack factor on the T_k bound");
}

hcgrowth::RunConfig resolve_config(const Globals& g, const Overrides& overrides) {
  hcgrowth::RunConfig cfg;
  if (!g.config_file.empty()) cfg = hcgrowth::load_config(g.config_file);
  for (const auto& [k, v] : overrides) cfg.set(k, v);
  if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
  return cfg;
}

int run_bundle(hcgrowth::RunConfig cfg, const std::string& suites) {
  if (!suites.empty()) cfg.select_suites(suites);
  const auto bundle = hcgrowth::run_suite(cfg);
  hcgrowth::write_bundle(bundle, cfg.output_dir);
  if (bundle.paper_mode) std::cout << "paper-mode: thresholds only\n";
  for (const auto& [name, pass] : bundle.suite_pass) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << '\n';
  }
  std::cout << "outputs written to " << cfg.output_dir << '\n';
  return bundle.all_pass() ? kExitPass : kExitCheckFailed;
}

void emit(const Json& j, const Globals& g, const std::string& file) {
  const std::string text = j.dump(2) + "\n";
  if (g.out_dir.empty()) {
    std::cout << text;
    return;
  }
  std::error_code ec;
  fs::create_directories(g.out_dir, ec);
  if (ec) throw hcgrowth::IoError("cannot create output directory " + g.out_dir);
  hcgrowth::write_text_file(fs::path(g.out_dir) / file, text);
}

hcgrowth::IntegerSet load_set(const std::string& spec) {
  if (!fs::exists(spec)) return hcgrowth::IntegerSet::parse_builtin(spec);
  std::ifstream in(spec);
  if (!in) throw hcgrowth::IoError("cannot read set file " + spec);
  std::vector<std::int64_t> values;
  std::string token;
  while (in >> token) {
    if (token.front() == '#') {
      std::getline(in, token);
      continue;
    }
    for (auto& ch : token) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream parts(token);
    long long v = 0;
    while (parts >> v) values.push_back(v);
  }
  return hcgrowth::IntegerSet::from_sorted(std::move(values), fs::path(spec).filename().string());
}

hcgrowth::CatalogueConstants parse_constants(const std::string& text, double e) {
  if (text == "relaxed") return hcgrowth::CatalogueConstants::relaxed(e);
  if (text == "paper") return hcgrowth::CatalogueConstants::paper(e);
  if (text.rfind("custom:", 0) == 0) {
    std::vector<double> v;
    std::stringstream ss(text.substr(7));
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    if (v.size() == 2) return {v[0], v[1], e};
    if (v.size() == 3) return {v[0], v[1], v[2]};
  }
  throw std::invalid_argument("constants must be paper|relaxed|custom:C,c[,e], got '" + text + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Growth-optimal hypercyclic functions on the beta^gamma density scale"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_file, "key = value configuration file");
  app.add_option("--out", g.out_dir, "output directory");

  Overrides overrides;

  auto* construct = app.add_subcommand("construct", "build f and audit its structure");
  add_run_options(construct, overrides);

  auto* growth = app.add_subcommand("growth", "growth indicator Gamma(r) and the optimality witness");
  add_run_options(growth, overrides);
  add_override(growth, overrides, "--grid", "growth_grid", "radii: a,b,c or log:lo:hi:count");

  auto* orbit = app.add_subcommand("orbit", "orbit approximation on the hitting sets");
  add_run_options(orbit, overrides);
  add_override(orbit, overrides, "--k", "k", "restrict to class k");
  add_override(orbit, overrides, "--sample", "orbit_sample", "check N evenly strided orders");
  orbit->add_flag_callback("--all", [&] { overrides.emplace_back("orbit_sample", "all"); },
                           "check every order in every hitting set");

  auto* tk = app.add_subcommand("tk-density", "weighted density of the hitting sets T_k");
  add_run_options(tk, overrides);
  add_override(tk, overrides, "--k", "k", "restrict to class k");

  auto* all = app.add_subcommand("all", "every suite, full report bundle");
  add_run_options(all, overrides);

  auto* density = app.add_subcommand("density", "prefix estimates of the upper beta^gamma density");
  double d_gamma = 0.5;
  std::string d_set = "even";
  std::string d_grid = "log:10:1000000:13";
  std::string d_mode = "automatic";
  density->add_option("--gamma", d_gamma, "scale exponent in [0, 1]")->required();
  density->add_option("--set", d_set, "all|even|squares|empty|ap:d[:first] or a file of integers");
  density->add_option("--grid", d_grid, "a,b,c or log:lo:hi:count");
  density->add_option("--mode", d_mode, "exact|asymptotic|automatic (log_total column)");

  auto* rs = app.add_subcommand("rs-gen", "kernel polynomial coefficients");
  std::string r_family = "sign";
  std::int64_t r_n = 0;
  bool r_check = false;
  rs->add_option("--family", r_family, "sign|bounded");
  rs->add_option("--n", r_n, "number of coefficients")->required()->check(CLI::PositiveNumber);
  rs->add_flag("--check-norms", r_check, "validate the family norm guarantees (JSON)");

  auto* cat = app.add_subcommand("catalogue", "entries of the target catalogue");
  std::int64_t c_k = 1;
  std::int64_t c_count = 1;
  std::string c_regime = "p>=2";
  std::string c_constants = "relaxed";
  std::optional<double> c_gamma;
  std::optional<double> c_p;
  cat->add_option("--k", c_k, "first index")->check(CLI::PositiveNumber);
  cat->add_option("--count", c_count, "number of entries")->check(CLI::PositiveNumber);
  cat->add_option("--regime", c_regime, "p>=2 | 1<p<2");
  cat->add_option("--p", c_p, "derive the regime and exponent from p");
  cat->add_option("--constants", c_constants, "paper|relaxed|custom:C,c[,e]");
  cat->add_option("--gamma", c_gamma, "also report activation thresholds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (density->parsed()) {
      const hcgrowth::WeightSpec spec(d_gamma);
      const auto set = load_set(d_set);
      const auto grid = hcgrowth::parse_integer_grid(d_grid);
      const auto mode = hcgrowth::parse_sum_mode(d_mode);
      const auto scan = hcgrowth::upper_density_scan(set, spec, grid);
      emit(hcgrowth::density_scan_json(spec, set, scan, grid, mode), g, "density.json");
      return kExitPass;
    }
    if (rs->parsed()) {
      const auto family = hcgrowth::parse_kernel_family(r_family);
      const auto kernel = hcgrowth::make_kernel(family, r_n);
      if (r_check) {
        const std::vector<double> ps =
            family == hcgrowth::KernelFamily::sign
                ? std::vector<double>{2.0, std::numeric_limits<double>::infinity()}
                : std::vector<double>{1.0, 1.5, 2.0};
        const auto v = hcgrowth::validate_kernel(kernel, ps);
        emit(hcgrowth::kernel_validation_json(v), g, "kernel_check.json");
        return v.coefficients_ok && v.bounds_ok ? kExitPass : kExitCheckFailed;
      }
      std::string csv = "index,coefficient\n";
      for (std::size_t i = 0; i < kernel.exact.size(); ++i) {
        csv += std::to_string(i) + "," + hcgrowth::to_string(kernel.exact[i]) + "\n";
      }
      if (g.out_dir.empty()) {
        std::cout << csv;
      } else {
        fs::create_directories(g.out_dir);
        hcgrowth::write_text_file(fs::path(g.out_dir) / "kernel.csv", csv);
      }
      return kExitPass;
    }
    if (cat->parsed()) {
      hcgrowth::Regime regime;
      double e = 2.0;
      if (c_p) {
        regime = hcgrowth::regime_for(*c_p);
        if (regime == hcgrowth::Regime::p_between_1_and_2) e = *c_p / (*c_p - 1.0);
      } else if (c_regime == "p>=2") {
        regime = hcgrowth::Regime::p_at_least_2;
      } else {
        throw std::invalid_argument("the 1<p<2 regime needs --p to fix the exponent q");
      }
      hcgrowth::TargetCatalogue catalogue(parse_constants(c_constants, e), regime);
      Json entries = Json::array();
      for (std::int64_t k = c_k; k < c_k + c_count; ++k) {
        entries.push_back(hcgrowth::catalogue_json(catalogue.entry(k), c_gamma));
      }
      emit(c_count == 1 ? entries.front() : entries, g, "catalogue.json");
      return kExitPass;
    }

    const auto cfg = resolve_config(g, overrides);
    if (construct->parsed()) return run_bundle(cfg, "construct");
    if (growth->parsed()) return run_bundle(cfg, "construct,growth");
    if (orbit->parsed()) return run_bundle(cfg, "construct,orbit");
    if (tk->parsed()) return run_bundle(cfg, "construct,density");
    if (all->parsed()) return run_bundle(cfg, "all");
  } catch (const hcgrowth::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::overflow_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}
