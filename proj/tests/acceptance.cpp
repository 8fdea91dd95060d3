// Acceptance runner: one [PASS]/[FAIL] line per criterion.
//
//   hcgrowth_acceptance          run AC1..AC9
//   hcgrowth_acceptance AC4      run one criterion
//
// Exit status is 0 only if every selected criterion passes.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "hcgrowth/block_construction.hpp"
#include "hcgrowth/growth_analysis.hpp"
#include "hcgrowth/kernel_polynomials.hpp"
#include "hcgrowth/sparse_series.hpp"
#include "hcgrowth/target_catalogue.hpp"
#include "hcgrowth/weighted_density.hpp"

namespace fs = std::filesystem;
using namespace hcgrowth;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ConstructionConfig toy_config() {
  ConstructionConfig cfg;
  cfg.gamma = 0.75;
  cfg.p = kInf;
  cfg.C = 1.0;
  cfg.c = 1.0;
  cfg.k_max = 2;
  cfg.n_max = 2000;
  return cfg;
}

struct Toy {
  ConstructionConfig cfg = toy_config();
  TargetCatalogue catalogue{cfg.constants(), cfg.regime()};
  Assembly assembly = assemble(cfg, catalogue);
};

Toy& toy() {
  static Toy instance;
  return instance;
}

std::vector<std::int64_t> kernel_sizes() {
  std::vector<std::int64_t> sizes;
  for (std::int64_t n = 1; n <= 64; ++n) sizes.push_back(n);
  for (int j = 0; j <= 14; ++j) sizes.push_back(std::int64_t{1} << j);
  // Golden-ratio low-discrepancy points in [1, 10^4].
  const double phi = std::numbers::phi;
  for (int i = 1; i <= 50; ++i) {
    const double frac = i * phi - std::floor(i * phi);
    sizes.push_back(1 + static_cast<std::int64_t>(frac * 9999.0));
  }
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  return sizes;
}

Outcome ac1() {
  const auto t0 = Clock::now();
  const double sign_ps[] = {2.0, kInf};
  const double bounded_ps[] = {1.0, 1.5, 2.0};
  int failures = 0;
  double worst_sup_ratio = 0.0;  // sup / (5 sqrt N)
  double worst_bounded_ratio = 0.0;
  double worst_parseval = 0.0;
  std::string first;
  const auto sizes = kernel_sizes();
  for (const auto n : sizes) {
    for (const auto family : {KernelFamily::sign, KernelFamily::bounded}) {
      const auto kernel = make_kernel(family, n);
      const auto v = validate_kernel(kernel, family == KernelFamily::sign
                                                 ? std::span<const double>(sign_ps)
                                                 : std::span<const double>(bounded_ps));
      bool ok = v.coefficients_ok && v.bounds_ok;
      ok = ok && kernel.size() == n;
      for (const double c : kernel.coefficients) {
        if (family == KernelFamily::sign) ok = ok && (c == 1.0 || c == -1.0);
        else ok = ok && std::abs(c) <= 1.0;
      }
      const std::int64_t required = family == KernelFamily::sign ? (n + 1) / 2 : n / 4;
      ok = ok && kernel.plus_count >= required;
      for (const auto& [p, norm] : v.norms) {
        const double bound = kernel_norm_bound(family, n, p);
        ok = ok && norm <= bound;
        const double r = norm / bound;
        if (family == KernelFamily::sign && std::isinf(p)) worst_sup_ratio = std::max(worst_sup_ratio, r);
        if (family == KernelFamily::bounded) worst_bounded_ratio = std::max(worst_bounded_ratio, r);
      }
      const double l2 = coefficient_l2_norm(kernel.coefficients);
      const double rel = std::abs(v.norms.at(2.0) - l2) / l2;
      worst_parseval = std::max(worst_parseval, rel);
      ok = ok && rel <= 1e-6;
      if (!ok) {
        ++failures;
        if (first.empty()) first = fmt::format(" first failure: {} N={}", to_string(family), n);
      }
    }
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs <= 60.0,
          fmt::format("{} sizes x 2 families, failures={}, max sup/(5sqrtN)={:.4f}, "
                      "max bounded norm/bound={:.4f}, max p=2 rel err={:.2e} (tol 1e-6), "
                      "{:.1f}s (limit 60s){}",
                      sizes.size(), failures, worst_sup_ratio, worst_bounded_ratio,
                      worst_parseval, secs, first)};
}

Outcome ac2() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (const double gamma : {0.55, 0.75, 0.9}) {
    const WeightSpec spec(gamma);
    std::vector<double> ratios;
    for (const std::int64_t n : {10'000, 100'000, 1'000'000}) {
      ratios.push_back(std::exp(log_partial_sum(n, spec, SumMode::exact).value -
                                log_partial_sum(n, spec, SumMode::asymptotic).value));
    }
    const bool in_range = ratios.back() >= 0.99 && ratios.back() <= 1.01;
    const bool monotone = std::abs(ratios[1] - 1) < std::abs(ratios[0] - 1) &&
                          std::abs(ratios[2] - 1) < std::abs(ratios[1] - 1);
    ok = ok && in_range && monotone;
    detail += fmt::format("g={}: {:.6f},{:.6f},{:.6f}{}{}; ", gamma, ratios[0], ratios[1],
                          ratios[2], in_range ? "" : " out of [0.99,1.01]",
                          monotone ? "" : " not monotone");
  }
  const double secs = seconds_since(t0);
  return {ok && secs <= 30.0, detail + fmt::format("{:.1f}s (limit 30s)", secs)};
}

Outcome ac3() {
  const double ps[] = {1.25, 1.5, 1.75, 2.0, 3.0, kInf};
  double worst = 0.0;
  auto note = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };
  for (const double p : ps) {
    const double q = std::isinf(p) ? 1.0 : p / (p - 1.0);
    const double a = p >= 2.0 ? 0.25 : 1.0 / (2.0 * p);
    note(alpha_exponent(p, 0.0), a);
    note(alpha_exponent(p, 1.0), 0.5);
    for (int i = 0; i <= 100; ++i) {
      const double g = i / 100.0;
      // Constant on [0, 1/2], affine from a(p) to 1/2 on [1/2, 1].
      const double want = g <= 0.5 ? a : 0.5 - (1.0 - g) / std::max(2.0, q);
      note(alpha_exponent(p, g), want);
    }
  }
  note(alpha_exponent(1.0, 0.0), 0.5);
  note(alpha_exponent(1.0, 0.7), 0.5);
  return {worst <= 1e-12, fmt::format("6 p values x 101 gammas, max abs error={:.2e} (tol 1e-12)", worst)};
}

Outcome ac4() {
  const auto t0 = Clock::now();
  Toy& t = toy();
  const auto& cfg = t.cfg;
  const auto audit = audit_construction(t.assembly, cfg, t.catalogue);

  // Independent recount from the raw terms and provenance.
  std::int64_t failures = 0;
  std::map<std::int64_t, const BlockProvenance*> by_n;
  for (const auto& b : t.assembly.blocks) by_n[b.n] = &b;
  const auto terms = t.assembly.series.terms();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0 && terms[i].exponent <= terms[i - 1].exponent) ++failures;
    auto n = static_cast<std::int64_t>(std::sqrt(static_cast<double>(terms[i].exponent)));
    while (n * n > terms[i].exponent) --n;
    while ((n + 1) * (n + 1) <= terms[i].exponent) ++n;
    const auto it = by_n.find(n);
    if (it == by_n.end()) {
      ++failures;
      continue;
    }
    const double l_k = to_double(t.catalogue.entry(it->second->k).l_k);
    if (std::abs(terms[i].coefficient) > l_k) ++failures;
  }
  for (const auto& b : t.assembly.blocks) {
    const auto cap = b.n * b.n + static_cast<std::int64_t>(
                                     std::floor(std::pow(static_cast<double>(b.n), 2 * (1 - cfg.gamma))));
    if (b.hitting_set.empty() || b.hitting_set.back() > cap) ++failures;
    if (static_cast<std::int64_t>(b.hitting_set.size()) < (b.len + 1) / 2) ++failures;
  }
  const double secs = seconds_since(t0);
  return {audit.failures() == 0 && failures == 0 && !t.assembly.blocks.empty() && secs <= 120.0,
          fmt::format("blocks={}, terms={}, audit failures={}, recount failures={}, {:.1f}s (limit 120s)",
                      t.assembly.blocks.size(), terms.size(), audit.failures(), failures, secs)};
}

Outcome ac5() {
  const auto t0 = Clock::now();
  Toy& t = toy();
  std::size_t samples_total = 0;
  std::size_t failures = 0;
  std::string detail;
  for (int k = 1; k <= t.cfg.k_max; ++k) {
    const auto samples = orbit_samples(t.assembly.blocks, k);
    const auto records = orbit_check(t.assembly.series, t.catalogue.entry(k), samples);
    double worst = 0.0;
    for (const auto& r : records) {
      worst = std::max(worst, r.sup_err / r.bound);
      if (!(r.sup_err <= r.bound)) ++failures;
    }
    samples_total += records.size();
    detail += fmt::format("k={}: {} samples, worst err/bound={:.3e}; ", k, records.size(), worst);
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && samples_total > 0 && secs <= 300.0,
          detail + fmt::format("failures={}, {:.1f}s (limit 300s)", failures, secs)};
}

Outcome ac6() {
  Toy& t = toy();
  std::size_t failures = 0;
  double worst_gap = -kInf;
  for (const auto& d : t.assembly.blocks) {
    const auto& entry = t.catalogue.entry(d.k);
    const auto block = build_block(d.n, t.cfg, &entry);
    const auto rec = block_peak_check(block, t.cfg, entry);
    if (!rec.pass || rec.vacuous) ++failures;
    worst_gap = std::max({worst_gap, rec.log_mp_base - rec.log_bound_base,
                          rec.log_mp_next - rec.log_bound_next});
  }
  return {failures == 0 && !t.assembly.blocks.empty(),
          fmt::format("{} blocks, failures={}, worst log(M/bound)={:.3f} (must be <= 0)",
                      t.assembly.blocks.size(), failures, worst_gap)};
}

Outcome ac7() {
  Toy& t = toy();
  const auto& f = t.assembly.series;
  const auto grid = default_growth_grid(f, 50);
  std::vector<std::int64_t> subseq;
  for (const auto& b : t.assembly.blocks) subseq.push_back(b.n);
  const auto report = growth_profile(f, t.cfg.p, t.cfg.gamma, grid, subseq);
  bool finite = report.rows.size() == 50;
  for (const auto& row : report.rows) finite = finite && std::isfinite(row.log_gamma);
  double min_log_subseq = kInf;
  for (const auto& row : report.subseq_rows) min_log_subseq = std::min(min_log_subseq, row.log_gamma);
  const auto witness = optimality_witness(f, t.cfg.p, t.cfg.gamma, subseq);
  const bool positive = witness.min_gamma > 0.0 && std::isfinite(min_log_subseq);

  double worst_rel = 0.0;
  for (const double r : grid) {
    const double quad = mp_mean(f, r, 2.0).log_mp;
    const double closed = log_m2_parseval(f, r);
    worst_rel = std::max(worst_rel, std::abs(std::expm1(quad - closed)));
  }
  return {finite && positive && worst_rel <= 1e-8,
          fmt::format("grid [{:.1f}, {:.1f}] x{} all finite={}, witness min Gamma={:.6g} at n={}, "
                      "min log Gamma(n^2) over all blocks={:.3f}, p=2 max rel err={:.2e} (tol 1e-8)",
                      grid.front(), grid.back(), grid.size(), finite, witness.min_gamma,
                      witness.argmin_n, min_log_subseq, worst_rel)};
}

Outcome ac8() {
  Toy& t = toy();
  const auto& entry = t.catalogue.entry(1);
  const auto t1 = hitting_sets(t.assembly.blocks, 1);
  const auto report = hitting_density_check(t1, entry, WeightSpec(t.cfg.gamma), t.assembly.blocks);
  const double running = report.running_max.empty() ? 0.0 : report.running_max.back();
  const double err_upper = std::abs(report.ratio_upper / report.limit_upper - 1);
  const double err_lower = std::abs(report.ratio_lower / report.limit_lower - 1);
  const bool ok = report.blocks >= 5 && running > report.threshold && err_upper <= 0.05 &&
                  err_lower <= 0.05;
  return {ok, fmt::format("class-1 blocks={}, running max={:.6f} > threshold {:.6f}; "
                          "upper ratio {:.5f} vs {:.5f} ({:.2f}%), lower ratio {:.5f} vs {:.5f} "
                          "({:.2f}%) at n={} (tol 5%)",
                          report.blocks, running, report.threshold, report.ratio_upper,
                          report.limit_upper, 100 * err_upper, report.ratio_lower, report.limit_lower,
                          100 * err_lower, report.largest_n)};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return files;
}

Outcome ac9() {
  const fs::path dir = fs::temp_directory_path() / "hcgrowth_acceptance_ac9";
  fs::remove_all(dir);
  const std::string cmd =
      fmt::format("\"{}\" --out \"{}\" all --gamma 0.75 --p inf --C 1 --c 1 --k-max 2 "
                  "--n-max 2000 > /dev/null 2>&1",
                  HCGROWTH_CLI_PATH, dir.string());
  const int first_status = std::system(cmd.c_str());
  const auto first = snapshot(dir);
  fs::remove_all(dir);
  const int second_status = std::system(cmd.c_str());
  const auto second = snapshot(dir);
  fs::remove_all(dir);
  std::size_t differing = 0;
  for (const auto& [name, bytes] : first) {
    const auto it = second.find(name);
    if (it == second.end() || it->second != bytes) ++differing;
  }
  const bool ok = first_status == 0 && second_status == 0 && !first.empty() &&
                  first.size() == second.size() && differing == 0;
  return {ok, fmt::format("exit {} / {}, {} files, {} differ", first_status, second_status,
                          first.size(), differing)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}};
  std::vector<std::string> selected(argv + 1, argv + argc);
  bool all_pass = true;
  std::size_t ran = 0;
  for (const auto& [name, run] : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), name) == selected.end()) {
      continue;
    }
    ++ran;
    Outcome out{false, ""};
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && out.pass;
    std::cout << (out.pass ? "[PASS] " : "[FAIL] ") << name << "  " << out.detail << std::endl;
  }
  if (ran == 0) {
    std::cerr << "unknown criterion\n";
    return 2;
  }
  return all_pass ? 0 : 1;
}
