#include "hcgrowth/target_catalogue.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hcgrowth {

namespace {

using Poly = std::vector<Rational>;

struct Candidate {
  Rational value;
  std::int64_t cost;
};

// Single coefficients with cost <= max_cost in key order (|num|, den, sign).
std::vector<Candidate> candidates(std::int64_t max_cost) {
  std::vector<Candidate> out;
  if (max_cost >= 1) out.push_back({Rational(0), 1});
  for (std::int64_t a = 1; a < max_cost; ++a) {
    for (std::int64_t den = 1; a + den <= max_cost; ++den) {
      if (std::gcd(a, den) != 1) continue;
      out.push_back({Rational(a, den), a + den});
      out.push_back({Rational(-a, den), a + den});
    }
  }
  return out;
}

void fill(int pos, int degree, std::int64_t remaining, const std::vector<Candidate>& pool,
          Poly& current, std::vector<Poly>& out) {
  if (pos == degree) {
    for (const auto& c : pool) {
      if (c.cost == remaining && c.value.numerator() != 0) {
        current.push_back(c.value);
        out.push_back(current);
        current.pop_back();
      }
    }
    return;
  }
  // Cheapest completion: zeros in between and a leading coefficient of cost 2.
  const std::int64_t rest_min = (degree - pos - 1) + 2;
  for (const auto& c : pool) {
    if (c.cost + rest_min > remaining) continue;
    current.push_back(c.value);
    fill(pos + 1, degree, remaining - c.cost, pool, current, out);
    current.pop_back();
  }
}

std::vector<Poly> polynomials_of_height(std::int64_t height) {
  std::vector<Poly> out;
  const auto pool = candidates(height);
  for (int d = 0; 2 * static_cast<std::int64_t>(d) + 2 <= height; ++d) {
    Poly current;
    fill(0, d, height - d, pool, current, out);
  }
  return out;
}

class PolynomialSequence {
 public:
  const Poly& at(std::int64_t k) {  // 1-based
    while (static_cast<std::int64_t>(polys_.size()) < k) {
      auto batch = polynomials_of_height(next_height_++);
      polys_.insert(polys_.end(), batch.begin(), batch.end());
    }
    return polys_[static_cast<std::size_t>(k - 1)];
  }

 private:
  std::vector<Poly> polys_;
  std::int64_t next_height_ = 2;
};

Rational l1_norm_of(const Poly& q) {
  Rational s(0);
  for (const auto& c : q) s += rational_abs(c);
  return s;
}

CatalogueEntry make_entry(std::int64_t k, Poly q, const Rational* previous_l,
                          const CatalogueConstants& constants, Regime regime) {
  CatalogueEntry e;
  e.k = k;
  e.d_k = static_cast<int>(q.size()) - 1;
  e.l1_norm = l1_norm_of(q);
  e.q_coeffs = std::move(q);
  if (previous_l == nullptr) {
    e.l_k = e.l1_norm;
  } else {
    const Rational stepped = *previous_l + 1;
    e.l_k = e.l1_norm > stepped ? e.l1_norm : stepped;
  }
  e.alpha_k = compute_alpha(e.d_k, e.l_k, constants);
  e.regime = regime;
  return e;
}

}  // namespace

const char* to_string(Regime regime) noexcept {
  return regime == Regime::p_at_least_2 ? "p>=2" : "1<p<2";
}

Regime regime_for(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("construction requires p > 1");
  return p >= 2.0 ? Regime::p_at_least_2 : Regime::p_between_1_and_2;
}

std::vector<Rational> rational_polynomial(std::int64_t k) {
  if (k < 1) throw std::invalid_argument("catalogue index must be >= 1");
  PolynomialSequence seq;
  return seq.at(k);
}

std::int64_t compute_alpha(int d_k, const Rational& l_k, const CatalogueConstants& constants) {
  if (!(constants.C > 0.0 && constants.c > 0.0 && constants.e > 0.0)) {
    throw std::invalid_argument("catalogue constants C, c, e must be positive");
  }
  const Rational linear = Rational(2 * d_k) + Rational(8) * l_k;
  const double power = std::pow(constants.C * to_double(l_k) / constants.c, constants.e);
  if (!(power < 0x1p62)) {
    throw std::overflow_error("alpha_k exceeds the representable range");
  }
  const std::int64_t floor_max =
      to_double(linear) >= power ? floor_of(linear) : static_cast<std::int64_t>(std::floor(power));
  return 1 + floor_max;
}

TargetCatalogue::TargetCatalogue(CatalogueConstants constants, Regime regime)
    : constants_(constants), regime_(regime) {}

const CatalogueEntry& TargetCatalogue::entry(std::int64_t k) {
  if (k < 1) throw std::invalid_argument("catalogue index must be >= 1");
  static thread_local PolynomialSequence sequence;
  while (static_cast<std::int64_t>(entries_.size()) < k) {
    const auto next = static_cast<std::int64_t>(entries_.size()) + 1;
    const Rational* prev = entries_.empty() ? nullptr : &entries_.back().l_k;
    entries_.push_back(make_entry(next, sequence.at(next), prev, constants_, regime_));
  }
  return entries_[static_cast<std::size_t>(k - 1)];
}

CatalogueEntry enumerate_target(std::int64_t k, const CatalogueConstants& constants,
                                Regime regime) {
  TargetCatalogue catalogue(constants, regime);
  return catalogue.entry(k);
}

int dyadic_class(std::int64_t n) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("dyadic_class: n must be even and >= 2 (got " +
                                std::to_string(n) + ")");
  }
  return std::countr_zero(static_cast<std::uint64_t>(n));
}

std::int64_t kernel_length(std::int64_t n, double gamma, std::int64_t alpha) {
  const long double x = std::pow(static_cast<long double>(n), 2.0L * (1.0L - gamma)) /
                        static_cast<long double>(alpha);
  // Treat values within rounding of an integer as that integer so that exact
  // cases such as 81^{1/2} / 9 are not lost to the last bit.
  const long double nearest = std::nearbyint(x);
  if (std::abs(x - nearest) <= 1e-12L * std::max(x, 1.0L)) {
    return static_cast<std::int64_t>(nearest);
  }
  return static_cast<std::int64_t>(std::floor(x));
}

ActivationThresholds first_active_n(const CatalogueEntry& entry, double gamma) {
  if (!(gamma > 0.5 && gamma < 1.0)) {
    throw std::invalid_argument("first_active_n requires gamma in (1/2, 1)");
  }
  const auto alpha = static_cast<double>(entry.alpha_k);
  ActivationThresholds t{};
  t.paper_threshold = 10.0 * alpha;
  t.nonempty_threshold = std::pow(alpha, 1.0 / (2.0 * (1.0 - gamma)));

  const double start = std::max(t.paper_threshold, t.nonempty_threshold * (1.0 - 1e-12));
  const double unit = std::ldexp(1.0, static_cast<int>(entry.k));
  double odd = std::ceil(start / unit);
  if (std::fmod(odd, 2.0) == 0.0) odd += 1.0;
  t.first_active_approx = odd * unit;
  if (!(t.first_active_approx < 0x1p61)) return t;

  const std::int64_t step = std::int64_t{2} << entry.k;
  auto n = static_cast<std::int64_t>(t.first_active_approx);
  while (kernel_length(n, gamma, entry.alpha_k) < 1) n += step;
  t.first_active_n = n;
  t.first_active_approx = static_cast<double>(n);
  return t;
}

}  // namespace hcgrowth
