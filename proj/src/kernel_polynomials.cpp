#include "hcgrowth/kernel_polynomials.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hcgrowth/circle_dft.hpp"

namespace hcgrowth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

std::int64_t count_plus(const std::vector<double>& c) {
  return std::count(c.begin(), c.end(), 1.0);
}

// Trapezoid of total length n with a plateau of ones of length `plateau`:
// the convolution of a box of width a with a box of width w, divided by w.
// Requires n - plateau even and 1 <= plateau <= n.
KernelPolynomial trapezoid(std::int64_t n, std::int64_t plateau) {
  const std::int64_t w = (n - plateau) / 2 + 1;
  KernelPolynomial k{KernelFamily::bounded, {}, {}, 0};
  k.coefficients.reserve(static_cast<std::size_t>(n));
  k.exact.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t height = std::min({i + 1, n - i, w});
    k.exact.emplace_back(height, w);
    k.coefficients.push_back(to_double(k.exact.back()));
  }
  k.plus_count = count_plus(k.coefficients);
  return k;
}

std::int64_t smallest_plateau(std::int64_t n, std::int64_t at_least) {
  std::int64_t p = std::max<std::int64_t>(at_least, 1);
  if ((n - p) % 2 != 0) ++p;
  return std::min(p, n);
}

void require_kernel_valid(const KernelPolynomial& k, std::span<const double> ps) {
  const auto v = validate_kernel(k, ps);
  if (!v.coefficients_ok || !v.bounds_ok) {
    throw std::logic_error(std::string(to_string(k.family)) + " kernel of length " +
                           std::to_string(k.size()) + " failed validation");
  }
}

}  // namespace

const char* to_string(KernelFamily family) noexcept {
  return family == KernelFamily::sign ? "sign" : "bounded";
}

KernelFamily parse_kernel_family(const std::string& text) {
  if (text == "sign") return KernelFamily::sign;
  if (text == "bounded") return KernelFamily::bounded;
  throw std::invalid_argument("unknown kernel family '" + text + "'");
}

std::vector<int> rs_sequence(std::size_t count) {
  std::vector<int> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    // k & (k >> 1) has one bit per adjacent pair of ones
    const auto pairs = std::popcount(static_cast<std::uint64_t>(k & (k >> 1)));
    out[k] = (pairs % 2 == 0) ? 1 : -1;
  }
  return out;
}

std::size_t default_kernel_nodes(std::int64_t n) {
  return static_cast<std::size_t>(std::max<std::int64_t>(16 * n, 64));
}

KernelPolynomial sign_kernel(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("sign_kernel: N must be >= 1");
  KernelPolynomial k{KernelFamily::sign, {}, {}, 0};
  for (int s : rs_sequence(static_cast<std::size_t>(n))) {
    k.coefficients.push_back(static_cast<double>(s));
    k.exact.emplace_back(s);
  }
  k.plus_count = count_plus(k.coefficients);
  const double ps[] = {kInf};
  require_kernel_valid(k, ps);
  return k;
}

KernelPolynomial bounded_kernel(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("bounded_kernel: N must be >= 1");
  const double ps[] = {1.0, 1.5, 2.0};
  // Narrowest plateau first; the fallback widens the taper by lowering the
  // plateau target from ceil(N/4) to floor(N/4).
  const std::int64_t targets[] = {ceil_div(n, 4), n / 4};
  for (std::int64_t target : targets) {
    KernelPolynomial k = trapezoid(n, smallest_plateau(n, target));
    const auto v = validate_kernel(k, ps);
    if (v.coefficients_ok && v.bounds_ok) return k;
  }
  throw std::logic_error("bounded kernel of length " + std::to_string(n) +
                         " failed validation after all taper widths");
}

KernelPolynomial make_kernel(KernelFamily family, std::int64_t n) {
  return family == KernelFamily::sign ? sign_kernel(n) : bounded_kernel(n);
}

double coefficient_l2_norm(std::span<const double> coefficients) {
  double s = 0.0;
  for (double c : coefficients) s += c * c;
  return std::sqrt(s);
}

SupNormEstimate circle_sup_norm(std::span<const double> coefficients, std::size_t node_count) {
  if (node_count < 4 * coefficients.size()) {
    throw std::invalid_argument("node_count must be at least 4x the polynomial length");
  }
  std::vector<Mode> modes;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (coefficients[i] != 0.0) modes.push_back({static_cast<std::int64_t>(i), coefficients[i]});
  }
  const auto samples = sample_on_circle(modes, node_count);
  const auto m = refine_circle_max(modes, samples, true);
  // |h(t) - h(t_j)| <= (pi / M) * deg * ||h||_inf between neighbouring nodes.
  const double degree = coefficients.empty() ? 0.0 : static_cast<double>(coefficients.size() - 1);
  const double slack = 1.0 - std::numbers::pi * degree / static_cast<double>(node_count);
  const double upper = slack > 0.0 ? std::max(m.value, m.sampled / slack) : kInf;
  return {m.value, upper, m.sampled};
}

double circle_lp_norm(std::span<const double> coefficients, double p, std::size_t node_count) {
  if (!(p >= 1.0)) throw std::invalid_argument("circle_lp_norm: p must be >= 1");
  if (node_count < 4 * coefficients.size() || node_count == 0) {
    throw std::invalid_argument("node_count must be at least 4x the polynomial length");
  }
  if (std::isinf(p)) return circle_sup_norm(coefficients, node_count).lower;

  const auto samples = sample_on_circle(coefficients, node_count);
  double acc = 0.0;
  for (const auto& z : samples) acc += std::pow(std::abs(z), p);
  const double norm = std::pow(acc / static_cast<double>(node_count), 1.0 / p);

  if (p == 2.0) {
    const double parseval = coefficient_l2_norm(coefficients);
    if (std::abs(norm - parseval) > 1e-8 * std::max(parseval, 1e-300)) {
      throw std::logic_error("circle_lp_norm: quadrature disagrees with Parseval");
    }
  }
  return norm;
}

double kernel_norm_bound(KernelFamily family, std::int64_t n, double p) {
  const double nd = static_cast<double>(n);
  if (family == KernelFamily::sign) {
    if (!(p >= 2.0)) throw std::invalid_argument("sign kernel bound holds for p in [2, inf]");
    return 5.0 * std::sqrt(nd);
  }
  if (!(p >= 1.0 && p <= 2.0)) {
    throw std::invalid_argument("bounded kernel bound holds for p in [1, 2]");
  }
  const double inv_q = 1.0 - 1.0 / p;  // 1/q
  return 3.0 * std::pow(nd, inv_q);
}

KernelValidation validate_kernel(const KernelPolynomial& kernel, std::span<const double> ps,
                                 double rel_tol) {
  const std::int64_t n = kernel.size();
  KernelValidation v{n, kernel.family, kernel.plus_count, 0, {}, {}, 0.0, true, true};

  if (kernel.family == KernelFamily::sign) {
    v.plus_required = ceil_div(n, 2);
    for (double c : kernel.coefficients) v.coefficients_ok &= (c == 1.0 || c == -1.0);
  } else {
    v.plus_required = n / 4;
    for (double c : kernel.coefficients) v.coefficients_ok &= std::abs(c) <= 1.0;
  }
  v.coefficients_ok &= count_plus(kernel.coefficients) == kernel.plus_count;
  v.coefficients_ok &= kernel.plus_count >= v.plus_required;
  v.coefficients_ok &= static_cast<std::int64_t>(kernel.exact.size()) == n;

  const std::size_t nodes = default_kernel_nodes(n);
  for (double p : ps) {
    const double bound = kernel_norm_bound(kernel.family, n, p);
    double value;
    if (std::isinf(p)) {
      const auto sup = circle_sup_norm(kernel.coefficients, nodes);
      value = sup.lower;
      v.sup_upper = sup.upper;
    } else {
      value = circle_lp_norm(kernel.coefficients, p, nodes);
    }
    v.norms[p] = value;
    v.bounds[p] = bound;
    v.bounds_ok &= value <= bound * (1.0 + rel_tol);
  }
  return v;
}

}  // namespace hcgrowth
