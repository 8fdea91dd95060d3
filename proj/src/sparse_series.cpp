#include "hcgrowth/sparse_series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hcgrowth/circle_dft.hpp"

namespace hcgrowth {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct ActiveTerm {
  std::int64_t exponent;
  double sign;
  double log_magnitude;  // log(|a_m| r^m / m!) - r
};

struct Window {
  std::vector<ActiveTerm> active;
  double peak = kNegInf;
  double log_discarded = kNegInf;  // absolute, not relative to the peak
};

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

Window select_window(const SparseSeries& s, double r, double tail_eps) {
  if (!(tail_eps > 0.0)) throw std::invalid_argument("tail_eps must be positive");
  Window w;
  const auto terms = s.terms();
  if (terms.empty()) return w;

  std::vector<double> logs(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double a = terms[i].coefficient;
    logs[i] = a == 0.0 ? kNegInf : std::log(std::abs(a)) + log_scaled_magnitude(terms[i].exponent, r);
    w.peak = std::max(w.peak, logs[i]);
  }
  if (w.peak == kNegInf) return w;

  const double cutoff = w.peak + std::log(tail_eps) - std::log(static_cast<double>(terms.size()));
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (logs[i] >= cutoff) {
      w.active.push_back({terms[i].exponent, terms[i].coefficient > 0.0 ? 1.0 : -1.0, logs[i]});
    } else {
      w.log_discarded = log_add(w.log_discarded, logs[i]);
    }
  }
  return w;
}

std::complex<double> unit_phase(std::int64_t m, double t) {
  constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  const long double phase = std::fmod(static_cast<long double>(m) * t, two_pi);
  return std::polar(1.0, static_cast<double>(phase));
}

}  // namespace

SparseSeries SparseSeries::from_terms(std::vector<Term> terms, std::vector<Rational> exact,
                                      std::vector<BlockProvenance> provenance) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].exponent < 0) throw std::invalid_argument("negative exponent in series");
    if (i > 0 && terms[i].exponent <= terms[i - 1].exponent) {
      throw std::invalid_argument("series exponents must be strictly increasing (exponent " +
                                  std::to_string(terms[i].exponent) + ")");
    }
  }
  if (!exact.empty() && exact.size() != terms.size()) {
    throw std::invalid_argument("exact coefficients must match the term count");
  }
  SparseSeries s;
  s.terms_ = std::move(terms);
  s.exact_ = std::move(exact);
  s.provenance_ = std::move(provenance);
  return s;
}

double SparseSeries::coefficient(std::int64_t m) const {
  const auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term& t, std::int64_t e) { return t.exponent < e; });
  return it != terms_.end() && it->exponent == m ? it->coefficient : 0.0;
}

SparseSeries merge_disjoint(const SparseSeries& a, const SparseSeries& b) {
  const bool exact = (a.has_exact() || a.empty()) && (b.has_exact() || b.empty()) &&
                     !(a.empty() && b.empty());
  std::vector<Term> terms;
  std::vector<Rational> rationals;
  terms.reserve(a.size() + b.size());
  const auto ta = a.terms();
  const auto tb = b.terms();
  std::size_t i = 0, j = 0;
  while (i < ta.size() || j < tb.size()) {
    const bool take_a = j == tb.size() || (i < ta.size() && ta[i].exponent < tb[j].exponent);
    if (i < ta.size() && j < tb.size() && ta[i].exponent == tb[j].exponent) {
      throw std::logic_error("merge_disjoint: supports overlap at exponent " +
                             std::to_string(ta[i].exponent));
    }
    if (take_a) {
      terms.push_back(ta[i]);
      if (exact) rationals.push_back(a.exact()[i]);
      ++i;
    } else {
      terms.push_back(tb[j]);
      if (exact) rationals.push_back(b.exact()[j]);
      ++j;
    }
  }
  std::vector<BlockProvenance> provenance(a.provenance().begin(), a.provenance().end());
  provenance.insert(provenance.end(), b.provenance().begin(), b.provenance().end());
  return SparseSeries::from_terms(std::move(terms), std::move(rationals), std::move(provenance));
}

SparseSeries derivative_shift(const SparseSeries& s, std::int64_t order) {
  if (order < 0) throw std::invalid_argument("derivative order must be nonnegative");
  const auto terms = s.terms();
  const auto first = std::lower_bound(terms.begin(), terms.end(), order,
                                      [](const Term& t, std::int64_t e) { return t.exponent < e; });
  const auto offset = static_cast<std::size_t>(first - terms.begin());
  std::vector<Term> shifted;
  shifted.reserve(terms.size() - offset);
  for (auto it = first; it != terms.end(); ++it) shifted.push_back({it->exponent - order, it->coefficient});
  std::vector<Rational> exact;
  if (s.has_exact()) exact.assign(s.exact().begin() + static_cast<std::ptrdiff_t>(offset), s.exact().end());
  return SparseSeries::from_terms(std::move(shifted), std::move(exact));
}

double log_scaled_magnitude(std::int64_t m, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("log_scaled_magnitude needs r > 0");
  if (m < 0) throw std::invalid_argument("negative exponent");
  const double md = static_cast<double>(m);
  if (m < 16) return md * std::log(r) - std::lgamma(md + 1.0) - r;
  // m ln r - ln m! - r = -m (x - log1p(x)) - ln(2 pi m)/2 - stirling tail,
  // with x = r/m - 1.
  const double x = r / md - 1.0;
  const double inv = 1.0 / md;
  const double inv2 = inv * inv;
  const double tail = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0));
  return -md * (x - std::log1p(x)) - 0.5 * std::log(2.0 * std::numbers::pi * md) - tail;
}

ScaledValue eval_scaled(const SparseSeries& s, double r, double t, double tail_eps) {
  if (r < 0.0 || std::isnan(r)) throw std::invalid_argument("eval_scaled: r must be >= 0");
  ScaledValue out;
  if (r == 0.0) {
    out.mantissa = s.coefficient(0);
    out.active_terms = out.mantissa != 0.0 ? 1 : 0;
    return out;
  }
  const Window w = select_window(s, r, tail_eps);
  if (w.active.empty()) {
    out.log_scale = 0.0;
    return out;
  }
  out.log_scale = w.peak;
  out.active_terms = w.active.size();
  for (const auto& a : w.active) {
    out.mantissa += a.sign * std::exp(a.log_magnitude - w.peak) * unit_phase(a.exponent, t);
  }
  out.discarded_mantissa = w.log_discarded == kNegInf ? 0.0 : std::exp(w.log_discarded - w.peak);
  return out;
}

MeanEstimate mp_mean(const SparseSeries& s, double r, double p, const QuadratureSpec& quad) {
  if (!(r > 0.0)) throw std::invalid_argument("mp_mean: r must be > 0");
  if (!(p >= 1.0)) throw std::invalid_argument("mp_mean: p must be >= 1");
  MeanEstimate out;
  const Window w = select_window(s, r, quad.tail_eps);
  out.log_discarded = w.log_discarded;
  if (w.active.empty()) return out;

  out.empty_window = false;
  out.active_terms = w.active.size();
  out.window_low = w.active.front().exponent;
  out.bandwidth = w.active.back().exponent - out.window_low;
  out.nodes = std::max<std::size_t>(4 * static_cast<std::size_t>(out.bandwidth) + 4, quad.min_nodes);

  std::vector<Mode> modes;
  modes.reserve(w.active.size());
  for (const auto& a : w.active) {
    modes.push_back({a.exponent - out.window_low, a.sign * std::exp(a.log_magnitude - w.peak)});
  }
  const auto samples = sample_on_circle(modes, out.nodes);

  double log_norm;
  if (std::isinf(p)) {
    log_norm = std::log(refine_circle_max(modes, samples, quad.refine).value);
  } else {
    double acc = 0.0;
    for (const auto& z : samples) acc += std::pow(std::abs(z), p);
    log_norm = std::log(acc / static_cast<double>(out.nodes)) / p;
  }
  out.log_mp = w.peak + log_norm + r;
  out.scaled = std::exp(w.peak + log_norm);
  return out;
}

double log_m2_parseval(const SparseSeries& s, double r, double tail_eps) {
  const Window w = select_window(s, r, tail_eps);
  if (w.active.empty()) return kNegInf;
  double acc = 0.0;
  for (const auto& a : w.active) acc += std::exp(2.0 * (a.log_magnitude - w.peak));
  return w.peak + 0.5 * std::log(acc) + r;
}

std::string series_to_csv(const SparseSeries& s) {
  std::string out = "exponent,coefficient\n";
  char buf[64];
  for (const auto& t : s.terms()) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g\n", static_cast<long long>(t.exponent), t.coefficient);
    out += buf;
  }
  return out;
}

SparseSeries series_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Term> terms;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("exponent", 0) == 0) continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("malformed series line: " + line);
    try {
      terms.push_back({std::stoll(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    } catch (const std::logic_error&) {
      throw std::invalid_argument("malformed series line: " + line);
    }
  }
  return SparseSeries::from_terms(std::move(terms));
}

}  // namespace hcgrowth
