#include "hcgrowth/growth_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hcgrowth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double conjugate(double p) { return std::isinf(p) ? 1.0 : (p == 1.0 ? kInf : p / (p - 1.0)); }

GrowthRow growth_row(const SparseSeries& f, double r, double p, double alpha,
                     const QuadratureSpec& quad) {
  const auto m = mp_mean(f, r, p, quad);
  const double log_gamma = alpha * std::log(r) - r + m.log_mp;
  return {r, m.log_mp, log_gamma, std::exp(log_gamma)};
}

struct PeakBounds {
  double at_base;
  double at_next;
};

PeakBounds peak_bounds(const BlockDescriptor& d, const ConstructionConfig& cfg,
                       const CatalogueEntry& entry) {
  const double lk = to_double(entry.l_k);
  const double alpha = static_cast<double>(entry.alpha_k);
  const auto n = static_cast<double>(d.n);
  auto bound = [&](double m) {
    const double r = m * m;
    if (cfg.regime() == Regime::p_at_least_2) {
      return std::log(50.0 * lk) - 0.5 * std::log(alpha) + r - cfg.gamma * std::log(m);
    }
    const double inv_q = 1.0 / cfg.q();
    return std::log(30.0 * lk) + inv_q * (2.0 * (1.0 - cfg.gamma) * std::log(m) - std::log(alpha)) +
           r - std::log(m);
  };
  return {bound(n), bound(n + 1.0)};
}

}  // namespace

double alpha_exponent(double p, double gamma) {
  if (!(p >= 1.0)) throw std::invalid_argument("alpha_exponent: p must be >= 1");
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("alpha_exponent: gamma must lie in [0, 1]");
  }
  if (p == 1.0) return 0.5;
  const double q = conjugate(p);
  return 0.5 - std::min(1.0, 2.0 * (1.0 - gamma)) / (2.0 * std::max(2.0, q));
}

PeakCheckRecord block_peak_check(const Block& block, const ConstructionConfig& cfg,
                                 const CatalogueEntry& entry, const QuadratureSpec& quad) {
  PeakCheckRecord rec;
  rec.n = block.descriptor.n;
  rec.k = block.descriptor.k;
  rec.p_checked = cfg.regime() == Regime::p_at_least_2 ? kInf : cfg.p;
  if (block.empty || block.series.empty()) {
    rec.vacuous = true;
    rec.pass = true;
    return rec;
  }
  const auto bounds = peak_bounds(block.descriptor, cfg, entry);
  rec.log_bound_base = bounds.at_base;
  rec.log_bound_next = bounds.at_next;

  const auto n = static_cast<double>(block.descriptor.n);
  auto run = [&](const QuadratureSpec& q) {
    rec.log_mp_base = mp_mean(block.series, n * n, rec.p_checked, q).log_mp;
    rec.log_mp_next = mp_mean(block.series, (n + 1.0) * (n + 1.0), rec.p_checked, q).log_mp;
    return rec.log_mp_base <= rec.log_bound_base && rec.log_mp_next <= rec.log_bound_next;
  };
  rec.pass = run(quad);
  if (!rec.pass) {
    QuadratureSpec finer = quad;
    finer.min_nodes = std::max<std::size_t>(quad.min_nodes, 64) * 4;
    finer.refine = true;
    rec.retried = true;
    rec.pass = run(finer);
  }
  return rec;
}

std::vector<double> default_growth_grid(const SparseSeries& f, std::size_t count) {
  if (f.empty() || count == 0) return {};
  double low = static_cast<double>(f.terms().front().exponent);
  if (!f.provenance().empty()) low = static_cast<double>(f.provenance().front().base);
  low = std::max(0.5 * low, 1.0);
  const double high = std::max(1.1 * static_cast<double>(f.terms().back().exponent), low);
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    grid[i] = low * std::pow(high / low, t);
  }
  return grid;
}

GrowthReport growth_profile(const SparseSeries& f, double p, double gamma,
                            std::span<const double> r_grid,
                            std::span<const std::int64_t> subseq_n, const QuadratureSpec& quad) {
  GrowthReport rep;
  rep.p = p;
  rep.gamma = gamma;
  rep.alpha = alpha_exponent(p, gamma);
  if (f.empty()) return rep;
  rep.empty = false;

  double best_log = -kInf;
  for (double r : r_grid) {
    const auto row = growth_row(f, r, p, rep.alpha, quad);
    if (row.log_gamma > best_log) {
      best_log = row.log_gamma;
      rep.argmax_r = r;
    }
    rep.rows.push_back(row);
  }
  rep.sup_gamma = std::exp(best_log);

  double min_sub = kInf;
  for (std::int64_t n : subseq_n) {
    const double r = static_cast<double>(n) * static_cast<double>(n);
    const auto row = growth_row(f, r, p, rep.alpha, quad);
    min_sub = std::min(min_sub, row.gamma_value);
    rep.subseq_rows.push_back(row);
  }
  rep.min_subseq_gamma = subseq_n.empty() ? 0.0 : min_sub;
  return rep;
}

WitnessResult optimality_witness(const SparseSeries& f, double p, double gamma,
                                 std::span<const std::int64_t> subseq_n,
                                 const QuadratureSpec& quad, double tail_fraction) {
  if (f.empty()) throw std::invalid_argument("optimality_witness: zero series");
  if (subseq_n.size() < 3) {
    throw std::invalid_argument("optimality_witness: needs at least 3 built blocks (got " +
                                std::to_string(subseq_n.size()) + ")");
  }
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw std::invalid_argument("tail_fraction must lie in (0, 1]");
  }
  const double alpha = alpha_exponent(p, gamma);
  const auto tail = static_cast<std::size_t>(
      std::ceil(tail_fraction * static_cast<double>(subseq_n.size())));
  WitnessResult w{kInf, kInf, 0, tail};
  for (std::size_t i = subseq_n.size() - tail; i < subseq_n.size(); ++i) {
    const double r = static_cast<double>(subseq_n[i]) * static_cast<double>(subseq_n[i]);
    const auto row = growth_row(f, r, p, alpha, quad);
    if (row.log_gamma < w.log_min_gamma) {
      w.log_min_gamma = row.log_gamma;
      w.min_gamma = row.gamma_value;
      w.argmin_n = subseq_n[i];
    }
  }
  return w;
}

std::vector<OrbitSample> orbit_samples(std::span<const BlockProvenance> blocks, int k,
                                       std::optional<std::size_t> limit) {
  std::vector<OrbitSample> all;
  for (const auto& b : blocks) {
    if (b.k != k) continue;
    for (std::int64_t s : b.hitting_set) all.push_back({s, b.n, b.k});
  }
  if (!limit || *limit >= all.size()) return all;
  std::vector<OrbitSample> picked;
  if (*limit == 0) return picked;
  // Evenly strided, always including the first and last sample.
  for (std::size_t i = 0; i < *limit; ++i) {
    const std::size_t idx =
        *limit == 1 ? all.size() - 1 : i * (all.size() - 1) / (*limit - 1);
    picked.push_back(all[idx]);
  }
  return picked;
}

std::vector<OrbitCheckRecord> orbit_check(const SparseSeries& f, const CatalogueEntry& entry,
                                          std::span<const OrbitSample> samples,
                                          std::size_t node_count, double tail_eps) {
  const double radius = to_double(entry.l_k);
  const double bound = 1.0 / radius;
  QuadratureSpec quad{node_count, true, tail_eps};
  std::vector<OrbitCheckRecord> out;
  out.reserve(samples.size());

  for (const auto& sample : samples) {
    const SparseSeries shifted = derivative_shift(f, sample.s);
    // residual = f^{(s)} - q_k, coefficient by coefficient
    std::vector<Term> residual;
    const auto terms = shifted.terms();
    std::size_t i = 0;
    for (int j = 0; j <= entry.d_k; ++j) {
      const double qj = to_double(entry.q_coeffs[static_cast<std::size_t>(j)]);
      double a = 0.0;
      if (i < terms.size() && terms[i].exponent == j) a = terms[i++].coefficient;
      const double diff = a - qj;
      if (diff != 0.0) residual.push_back({j, diff});
    }
    for (; i < terms.size(); ++i) residual.push_back(terms[i]);

    OrbitCheckRecord rec{sample.s, sample.n, sample.k, 0.0, 0.0, bound, true};
    if (!residual.empty()) {
      const auto res = SparseSeries::from_terms(std::move(residual));
      const auto m = mp_mean(res, radius, kInf, quad);
      const double sup = std::exp(m.log_mp);
      rec.tail_bound = std::exp(m.log_discarded + radius);
      rec.sup_err = sup + rec.tail_bound;
      rec.pass = rec.sup_err <= bound;
    }
    out.push_back(rec);
  }
  return out;
}

bool orbit_identity_exact(const SparseSeries& f, const CatalogueEntry& entry, std::int64_t s) {
  if (!f.has_exact()) throw std::invalid_argument("orbit_identity_exact needs exact coefficients");
  const SparseSeries shifted = derivative_shift(f, s);
  const auto terms = shifted.terms();
  const auto exact = shifted.exact();
  std::size_t i = 0;
  for (int j = 0; j <= entry.d_k; ++j) {
    const Rational& qj = entry.q_coeffs[static_cast<std::size_t>(j)];
    Rational a(0);
    if (i < terms.size() && terms[i].exponent == j) a = exact[i++];
    if (a != qj) return false;
  }
  // Nothing else below alpha_k.
  return i == terms.size() || terms[i].exponent >= entry.alpha_k;
}

HittingDensityReport hitting_density_check(std::span<const std::int64_t> t_k,
                                           const CatalogueEntry& entry, const WeightSpec& spec,
                                           std::span<const BlockProvenance> blocks,
                                           double slack, std::size_t min_blocks,
                                           double limit_tolerance) {
  HittingDensityReport rep;
  rep.k = static_cast<int>(entry.k);
  rep.gamma = spec.gamma();
  rep.alpha_k = entry.alpha_k;
  rep.slack = slack;
  rep.limit_tolerance = limit_tolerance;
  const double g = spec.gamma();
  const auto alpha = static_cast<double>(entry.alpha_k);
  rep.paper_bound = std::exp(-g) * std::expm1(1.0 / (2.0 * alpha));
  rep.sharp_bound = std::exp(-g) * std::expm1(g / (2.0 * alpha));
  rep.threshold = slack * rep.paper_bound;

  std::vector<std::int64_t> ends;
  const BlockProvenance* largest = nullptr;
  for (const auto& b : blocks) {
    if (b.k != rep.k || b.hitting_set.empty()) continue;
    ends.push_back(b.hitting_set.back());
    largest = &b;
  }
  rep.blocks = ends.size();
  if (t_k.empty() || ends.empty()) {
    rep.status = "no blocks";
    return rep;
  }

  std::vector<std::int64_t> members(t_k.begin(), t_k.end());
  const auto scan = upper_density_scan(IntegerSet::from_sorted(std::move(members), "T_k"), spec, ends);
  rep.at_block_ends = scan.estimates;
  rep.running_max = scan.running_max;
  rep.asserted = rep.blocks >= min_blocks;
  rep.density_pass = scan.max() > rep.threshold;

  // Ratio limits at the largest built block.
  const std::int64_t n = largest->n;
  const std::int64_t base = n * n;
  const auto span_len = static_cast<std::int64_t>(
      std::floor(std::pow(static_cast<double>(n), 2.0 * (1.0 - g))));
  const std::int64_t upper = base + (largest->len - 1) / 2;
  const std::int64_t top = base + span_len;
  const std::int64_t grid[] = {base - 1, upper, top};
  const auto sums = upper_density_scan(IntegerSet::empty(), spec, grid);
  const double log_top = sums.estimates[2].log_weighted_total;
  rep.largest_n = n;
  rep.ratio_upper = std::exp(sums.estimates[1].log_weighted_total - log_top);
  rep.limit_upper = std::exp(g * (1.0 / (2.0 * alpha) - 1.0));
  rep.ratio_lower = std::exp(sums.estimates[0].log_weighted_total - log_top);
  rep.limit_lower = std::exp(-g);
  rep.limits_pass =
      std::abs(rep.ratio_upper / rep.limit_upper - 1.0) <= limit_tolerance &&
      std::abs(rep.ratio_lower / rep.limit_lower - 1.0) <= limit_tolerance;

  rep.status = !rep.asserted ? "too few blocks; not asserted"
               : rep.pass()  ? "pass"
                             : "fail";
  return rep;
}

}  // namespace hcgrowth
