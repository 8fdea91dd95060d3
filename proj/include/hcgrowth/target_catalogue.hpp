// The dense catalogue (q_k) of rational polynomials, the bookkeeping constants
// d_k, l_k, alpha_k, and the dyadic classes A_k = {2^k (2j - 1)} of the even
// integers.
//
// Enumeration order (frozen): a polynomial q = sum_j q_j z^j / j! with
// q_d != 0 and each q_j = num_j / den_j in lowest terms has height
//   H(q) = d + sum_j (|num_j| + den_j),
// so a zero coefficient costs 1 and the constant 1 has height 2. Polynomials
// are listed by increasing height; within a height by increasing degree;
// then lexicographically over (q_0, q_1, ...), where single coefficients
// compare by (|num|, den, positive before negative). The zero polynomial is
// not listed. The first entries are 1, -1, 1/2, -1/2, 2, -2, ...
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hcgrowth/rational.hpp"

namespace hcgrowth {

enum class Regime { p_at_least_2, p_between_1_and_2 };

const char* to_string(Regime regime) noexcept;
Regime regime_for(double p);

/// Constants entering alpha_k = 1 + floor(max(2 d_k + 8 l_k, (C l_k / c)^e)).
struct CatalogueConstants {
  double C = 10.0;
  double c = 1.0;
  double e = 2.0;

  static CatalogueConstants relaxed(double e = 2.0) { return {10.0, 1.0, e}; }
  static CatalogueConstants paper(double e = 2.0) { return {1e5, 0.9, e}; }
};

struct CatalogueEntry {
  std::int64_t k;
  std::vector<Rational> q_coeffs;  // q_{k,m}, m = 0..d_k
  int d_k;
  Rational l1_norm;
  Rational l_k;
  std::int64_t alpha_k;
  Regime regime;
};

/// Rational polynomial number k >= 1 in the frozen order (coefficients only).
std::vector<Rational> rational_polynomial(std::int64_t k);

/// Caches polynomials and the l-recurrence so repeated lookups are O(1).
class TargetCatalogue {
 public:
  TargetCatalogue(CatalogueConstants constants, Regime regime);

  const CatalogueEntry& entry(std::int64_t k);
  const CatalogueConstants& constants() const noexcept { return constants_; }
  Regime regime() const noexcept { return regime_; }

 private:
  CatalogueConstants constants_;
  Regime regime_;
  std::vector<CatalogueEntry> entries_;
};

CatalogueEntry enumerate_target(std::int64_t k, const CatalogueConstants& constants,
                                Regime regime);

std::int64_t compute_alpha(int d_k, const Rational& l_k, const CatalogueConstants& constants);

/// The k with n in A_k, i.e. the 2-adic valuation of n. n must be even and >= 2.
int dyadic_class(std::int64_t n);

struct ActivationThresholds {
  double paper_threshold;     // 10 alpha_k
  double nonempty_threshold;  // alpha_k^{1/(2(1-gamma))}
  /// Least n in A_k above both thresholds; empty if it does not fit in int64.
  std::optional<std::int64_t> first_active_n;
  double first_active_approx;
};

/// floor(n^{2(1-gamma)} / alpha): number of kernel coefficients of block n.
std::int64_t kernel_length(std::int64_t n, double gamma, std::int64_t alpha);

ActivationThresholds first_active_n(const CatalogueEntry& entry, double gamma);

}  // namespace hcgrowth
