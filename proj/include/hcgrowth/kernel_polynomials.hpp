// Kernel trigonometric polynomials with flat L^p norms.
//
// Two families are produced, both indexed 0..N-1:
//   * sign kernels: prefixes of the Rudin-Shapiro sequence, coefficients +-1,
//     at least ceil(N/2) of them equal to +1, sup norm <= 5 sqrt(N);
//   * bounded kernels: trapezoidal (de la Vallee Poussin type) tapers with
//     |coefficient| <= 1, at least floor(N/4) coefficients equal to +1, and
//     ||.||_p <= 3 N^{1/q} for p in [1, 2].
// Every emitted kernel is validated against its guarantees before it is
// returned. All norms use the normalized measure dt / 2pi.
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hcgrowth/rational.hpp"

namespace hcgrowth {

enum class KernelFamily { sign, bounded };

const char* to_string(KernelFamily family) noexcept;
KernelFamily parse_kernel_family(const std::string& text);

struct KernelPolynomial {
  KernelFamily family;
  std::vector<double> coefficients;
  std::vector<Rational> exact;  // same values as `coefficients`
  std::int64_t plus_count = 0;  // coefficients exactly equal to +1

  std::int64_t size() const noexcept { return static_cast<std::int64_t>(coefficients.size()); }
};

/// First `count` Rudin-Shapiro signs: (-1)^{number of "11" blocks in binary k}.
std::vector<int> rs_sequence(std::size_t count);

KernelPolynomial sign_kernel(std::int64_t n);
KernelPolynomial bounded_kernel(std::int64_t n);
KernelPolynomial make_kernel(KernelFamily family, std::int64_t n);

/// Default node count used for kernel validation: 16 N, at least 64.
std::size_t default_kernel_nodes(std::int64_t n);

/// (mean over node_count equispaced nodes of |h|^p)^{1/p}; p = +inf gives the
/// refined sampled maximum. node_count must be at least 4 * coefficients.size().
/// At p = 2 the result is cross-checked against the coefficient l2 norm.
double circle_lp_norm(std::span<const double> coefficients, double p, std::size_t node_count);

struct SupNormEstimate {
  double lower;  // attained value, a certified lower bound
  double upper;  // sampled max inflated by the Bernstein derivative bound
  double sampled;
};

SupNormEstimate circle_sup_norm(std::span<const double> coefficients, std::size_t node_count);

/// sqrt(sum c_k^2).
double coefficient_l2_norm(std::span<const double> coefficients);

struct KernelValidation {
  std::int64_t n;
  KernelFamily family;
  std::int64_t plus_count;
  std::int64_t plus_required;
  std::map<double, double> norms;   // p -> ||h||_p (p = inf for the sup)
  std::map<double, double> bounds;  // p -> the guaranteed bound at that p
  double sup_upper = 0.0;           // Bernstein-inflated sup estimate
  bool coefficients_ok = false;
  bool bounds_ok = false;
};

/// Norm bound guaranteed for the family at exponent p (inf allowed for sign).
double kernel_norm_bound(KernelFamily family, std::int64_t n, double p);

/// Evaluates the family guarantees at the given exponents. Sign kernels accept
/// p in [2, inf]; bounded kernels accept p in [1, 2].
KernelValidation validate_kernel(const KernelPolynomial& kernel, std::span<const double> ps,
                                 double rel_tol = 1e-6);

}  // namespace hcgrowth
