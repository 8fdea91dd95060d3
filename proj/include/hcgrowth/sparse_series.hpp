// Sparse entire functions f(z) = sum_m a_m z^m / m!.
//
// In this frame the differentiation operator is a pure index shift, and the
// magnitude of a term on |z| = r is |a_m| r^m / m!. Magnitudes are handled
// through log Gamma; no factorial is ever formed.
#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hcgrowth/rational.hpp"

namespace hcgrowth {

struct Term {
  std::int64_t exponent;
  double coefficient;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Provenance of one constructed block P_n.
struct BlockProvenance {
  std::int64_t n = 0;
  int k = 0;
  std::int64_t base = 0;    // n^2
  std::int64_t stride = 0;  // alpha_k
  std::int64_t len = 0;     // kernel length
  std::vector<std::int64_t> hitting_set;
};

class SparseSeries {
 public:
  SparseSeries() = default;

  /// Terms must have strictly increasing nonnegative exponents. `exact`, when
  /// non-empty, carries the same coefficients as rationals.
  static SparseSeries from_terms(std::vector<Term> terms, std::vector<Rational> exact = {},
                                 std::vector<BlockProvenance> provenance = {});

  std::span<const Term> terms() const noexcept { return terms_; }
  std::span<const Rational> exact() const noexcept { return exact_; }
  std::span<const BlockProvenance> provenance() const noexcept { return provenance_; }
  bool has_exact() const noexcept { return !terms_.empty() && exact_.size() == terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Coefficient a_m, 0 if m is not in the support.
  double coefficient(std::int64_t m) const;

 private:
  std::vector<Term> terms_;
  std::vector<Rational> exact_;
  std::vector<BlockProvenance> provenance_;
};

/// Union of two series with disjoint supports. Throws std::logic_error naming
/// the first shared exponent otherwise.
SparseSeries merge_disjoint(const SparseSeries& a, const SparseSeries& b);

/// (d/dz)^order f: (m, a_m) -> (m - order, a_m), terms with m < order dropped.
/// Provenance is not carried over.
SparseSeries derivative_shift(const SparseSeries& s, std::int64_t order);

/// log(r^m / m!) - r, computed stably for large m and r (r > 0).
double log_scaled_magnitude(std::int64_t m, double r);

/// A value represented as mantissa * exp(log_scale) to survive underflow.
struct ScaledValue {
  std::complex<double> mantissa;
  double log_scale = 0.0;
  double discarded_mantissa = 0.0;  // bound on dropped terms, same scale
  std::size_t active_terms = 0;

  std::complex<double> value() const { return mantissa * std::exp(log_scale); }
  double discarded_bound() const { return discarded_mantissa * std::exp(log_scale); }
};

inline constexpr double kDefaultTailEps = 1e-12;

/// e^{-r} f(r e^{it}). Terms whose scaled magnitude falls below
/// tail_eps * peak / (number of terms) are dropped; their total is reported.
ScaledValue eval_scaled(const SparseSeries& s, double r, double t,
                        double tail_eps = kDefaultTailEps);

struct QuadratureSpec {
  std::size_t min_nodes = 64;
  bool refine = true;
  double tail_eps = kDefaultTailEps;
};

struct MeanEstimate {
  double log_mp = -std::numeric_limits<double>::infinity();  // log M_p(f, r)
  double scaled = 0.0;  // e^{-r} M_p(f, r); may underflow to 0
  std::size_t nodes = 0;
  std::size_t active_terms = 0;
  std::int64_t window_low = 0;
  std::int64_t bandwidth = 0;
  double log_discarded = -std::numeric_limits<double>::infinity();  // log of dropped mass
  bool empty_window = true;
};

/// M_p(f, r) for p in [1, inf] under the normalized circle measure.
///
/// The active window W is demodulated by its lowest exponent m0, so
/// g(t) = e^{-i m0 t} e^{-r} f(r e^{it}) is a trigonometric polynomial of
/// bandwidth B = max W - m0, sampled on max(4B + 4, min_nodes) nodes. This is
/// exact at p = 2 and spectrally accurate otherwise; p = inf takes the
/// refined sampled maximum.
MeanEstimate mp_mean(const SparseSeries& s, double r, double p,
                     const QuadratureSpec& quad = {});

/// Parseval value of log M_2(f, r) over the same active window as mp_mean.
double log_m2_parseval(const SparseSeries& s, double r, double tail_eps = kDefaultTailEps);

/// CSV "exponent,coefficient" (17 significant digits).
std::string series_to_csv(const SparseSeries& s);
SparseSeries series_from_csv(const std::string& text);

}  // namespace hcgrowth
