#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "hcgrowth/sparse_series.hpp"
#include "oracles.hpp"

using namespace hcgrowth;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sum_{m <= count} z^m / m!, i.e. a truncated exponential.
SparseSeries truncated_exp(std::int64_t count) {
  std::vector<Term> t;
  for (std::int64_t m = 0; m <= count; ++m) t.push_back({m, 1.0});
  return SparseSeries::from_terms(std::move(t));
}

// Deterministic sparse series with spread-out exponents and mixed signs.
SparseSeries sample_series(unsigned seed, std::int64_t center, std::int64_t spread, int count) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::int64_t> gap(1, spread);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::vector<Term> t;
  std::int64_t m = center;
  for (int i = 0; i < count; ++i) {
    m += gap(rng);
    double c = coef(rng);
    if (c == 0.0) c = 1.0;
    t.push_back({m, c});
  }
  return SparseSeries::from_terms(std::move(t));
}

}  // namespace

TEST_CASE("series construction") {
  CHECK_THROWS_AS(SparseSeries::from_terms({{3, 1.0}, {3, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(SparseSeries::from_terms({{-1, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(SparseSeries::from_terms({{1, 1.0}}, {Rational(1), Rational(2)}),
                  std::invalid_argument);
  const auto s = SparseSeries::from_terms({{2, 0.5}, {7, -1.0}}, {Rational(1, 2), Rational(-1)});
  CHECK(s.has_exact());
  CHECK(s.coefficient(2) == 0.5);
  CHECK(s.coefficient(3) == 0.0);
  CHECK(s.coefficient(7) == -1.0);
  CHECK(SparseSeries().empty());
}

TEST_CASE("merge of disjoint supports") {
  const auto a = SparseSeries::from_terms({{1, 1.0}, {5, 2.0}}, {Rational(1), Rational(2)});
  const auto b = SparseSeries::from_terms({{3, 3.0}}, {Rational(3)});
  const auto m = merge_disjoint(a, b);
  REQUIRE(m.size() == 3);
  CHECK(m.terms()[1] == Term{3, 3.0});
  CHECK(m.has_exact());
  CHECK(m.exact()[2] == Rational(2));
  const auto c = SparseSeries::from_terms({{5, 1.0}});
  try {
    merge_disjoint(a, c);
    FAIL("overlap not detected");
  } catch (const std::logic_error& e) {
    CHECK(std::string(e.what()).find("exponent 5") != std::string::npos);
  }
}

TEST_CASE("derivative is an index shift") {
  const auto f = SparseSeries::from_terms({{0, 1.0}, {4, 2.0}, {9, -3.0}},
                                          {Rational(1), Rational(2), Rational(-3)});
  const auto d = derivative_shift(f, 4);
  REQUIRE(d.size() == 2);
  CHECK(d.terms()[0] == Term{0, 2.0});
  CHECK(d.terms()[1] == Term{5, -3.0});
  CHECK(d.exact()[1] == Rational(-3));
  CHECK(derivative_shift(f, 0).terms().size() == 3);
  CHECK(derivative_shift(f, 10).empty());
  CHECK_THROWS_AS(derivative_shift(f, -1), std::invalid_argument);
}

TEST_CASE("shift composition") {
  const auto f = sample_series(7, 0, 5, 200);
  for (std::int64_t a : {0, 3, 50}) {
    for (std::int64_t b : {0, 1, 17, 400}) {
      const auto lhs = derivative_shift(derivative_shift(f, a), b);
      const auto rhs = derivative_shift(f, a + b);
      CHECK(std::equal(lhs.terms().begin(), lhs.terms().end(), rhs.terms().begin(),
                       rhs.terms().end()));
    }
  }
}

TEST_CASE("log scaled magnitude against multiprecision") {
  for (std::int64_t m : {0, 1, 5, 15, 16, 17, 100, 10'000, 1'000'000, 4'000'000}) {
    for (double ratio : {0.5, 0.99, 1.0, 1.01, 2.0}) {
      const double r = std::max(ratio * static_cast<double>(m), 0.5);
      CAPTURE(m);
      CAPTURE(r);
      const double want = oracle::log_scaled_magnitude(m, r);
      CHECK(log_scaled_magnitude(m, r) == doctest::Approx(want).epsilon(1e-12).scale(std::abs(want) + 1.0));
    }
  }
  // Single peak term: r = m = 10^6 gives -0.5 log(2 pi m) - 1/(12 m) + ...
  const double m = 1e6;
  CHECK(log_scaled_magnitude(1'000'000, m) ==
        doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi * m) - 1.0 / (12.0 * m)).epsilon(1e-14));
  CHECK_THROWS_AS(log_scaled_magnitude(3, 0.0), std::invalid_argument);
}

TEST_CASE("evaluation of the exponential") {
  const auto f = truncated_exp(400);
  for (double r : {0.5, 3.0, 40.0, 100.0}) {
    const auto v = eval_scaled(f, r, 0.0);
    CHECK(std::abs(v.value() - 1.0) < 1e-10);  // e^{-r} e^{r}
    // e^{-r} e^{r e^{it}} = e^{r (cos t - 1)} e^{i r sin t}
    const double t = 0.3;
    const auto w = eval_scaled(f, r, t);
    const auto want = std::exp(std::complex<double>(r * (std::cos(t) - 1.0), r * std::sin(t)));
    CHECK(std::abs(w.value() - want) < 1e-10 * std::max(1.0, std::abs(want)) + 1e-14);
  }
  const auto at_zero = eval_scaled(f, 0.0, 1.0);
  CHECK(at_zero.value() == std::complex<double>(1.0, 0.0));
  CHECK_THROWS_AS(eval_scaled(f, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("discarded mass bounds the truncation error") {
  const auto f = sample_series(11, 900, 3, 400);
  for (double r : {1000.0, 1300.0, 1800.0}) {
    for (double t : {0.0, 0.7, 2.1}) {
      const auto full = eval_scaled(f, r, t, 1e-300);
      for (double eps : {1e-2, 1e-4, 1e-8}) {
        const auto cut = eval_scaled(f, r, t, eps);
        const double err = std::abs(full.value() - cut.value());
        CHECK(err <= cut.discarded_bound() * (1.0 + 1e-9) + 1e-13 * std::abs(full.value()) + 1e-300);
        CHECK(cut.active_terms <= full.active_terms);
      }
    }
  }
}

TEST_CASE("means of the exponential match Bessel closed forms") {
  // M_2(e^z, r)^2 = I_0(2r), M_1(e^z, r) = I_0(r), M_inf = e^r.
  const auto f = truncated_exp(600);
  for (double r : {1.0, 10.0, 60.0}) {
    const double log_i0_2r = std::log(boost::math::cyl_bessel_i(0, 2.0 * r));
    const double log_i0_r = std::log(boost::math::cyl_bessel_i(0, r));
    CHECK(mp_mean(f, r, 2.0).log_mp == doctest::Approx(0.5 * log_i0_2r).epsilon(1e-10));
    CHECK(log_m2_parseval(f, r) == doctest::Approx(0.5 * log_i0_2r).epsilon(1e-10));
    CHECK(mp_mean(f, r, 1.0).log_mp == doctest::Approx(log_i0_r).epsilon(1e-10));
    CHECK(mp_mean(f, r, kInf).log_mp == doctest::Approx(r).epsilon(1e-10));
  }
}

TEST_CASE("means of 1 + z") {
  const auto f = SparseSeries::from_terms({{0, 1.0}, {1, 1.0}});
  for (double r : {0.1, 1.0, 7.0}) {
    CHECK(std::exp(mp_mean(f, r, 2.0).log_mp) == doctest::Approx(std::sqrt(1.0 + r * r)).epsilon(1e-12));
    CHECK(std::exp(mp_mean(f, r, kInf).log_mp) == doctest::Approx(1.0 + r).epsilon(1e-12));
  }
}

TEST_CASE("Parseval agreement on sparse high-degree series") {
  for (unsigned seed = 1; seed <= 12; ++seed) {
    const std::int64_t center = 1000 * seed * seed;
    const auto f = sample_series(seed, center, 1 + seed % 7, 300);
    for (double frac : {0.9, 1.0, 1.1}) {
      const double r = frac * static_cast<double>(f.terms()[150].exponent);
      const auto m = mp_mean(f, r, 2.0);
      CAPTURE(seed);
      CHECK(m.log_mp == doctest::Approx(log_m2_parseval(f, r)).epsilon(1e-8).scale(1.0));
      CHECK(std::abs(m.log_mp - log_m2_parseval(f, r)) <= 1e-8 * std::abs(m.log_mp));
    }
  }
}

TEST_CASE("means increase with p") {
  for (unsigned seed = 20; seed < 26; ++seed) {
    const auto f = sample_series(seed, 5000, 4, 150);
    const double r = static_cast<double>(f.terms()[75].exponent);
    double previous = -kInf;
    for (double p : {1.0, 1.25, 1.5, 2.0, 3.0, 8.0, kInf}) {
      const double v = mp_mean(f, r, p).log_mp;
      CHECK(v >= previous - 1e-12);
      previous = v;
    }
  }
}

TEST_CASE("mean bookkeeping") {
  const auto f = sample_series(3, 2000, 2, 100);
  const double r = static_cast<double>(f.terms()[50].exponent);
  const auto m = mp_mean(f, r, 2.0, {32, true, 1e-12});
  CHECK_FALSE(m.empty_window);
  CHECK(m.nodes >= 4 * static_cast<std::size_t>(m.bandwidth) + 4);
  CHECK(m.window_low >= f.terms().front().exponent);
  CHECK(m.active_terms <= f.size());
  CHECK(m.scaled == doctest::Approx(std::exp(m.log_mp - r)));
  const auto empty = mp_mean(SparseSeries(), 10.0, 2.0);
  CHECK(empty.empty_window);
  CHECK(empty.log_mp == -kInf);
  CHECK_THROWS_AS(mp_mean(f, 0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(mp_mean(f, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("underflowing magnitudes stay in log space") {
  // A single term far from the radius: r^m / m! e^{-r} underflows a double.
  const auto f = SparseSeries::from_terms({{100000, 1.0}});
  const double r = 10.0;
  const auto m = mp_mean(f, r, 2.0);
  CHECK(std::isfinite(m.log_mp));
  CHECK(m.scaled == 0.0);
  CHECK(m.log_mp == doctest::Approx(oracle::log_scaled_magnitude(100000, r) + r).epsilon(1e-12));
}

TEST_CASE("CSV round trip") {
  const auto f = sample_series(5, 10, 9, 40);
  const auto text = series_to_csv(f);
  CHECK(text.rfind("exponent,coefficient\n", 0) == 0);
  const auto g = series_from_csv(text);
  CHECK(std::equal(f.terms().begin(), f.terms().end(), g.terms().begin(), g.terms().end()));
  CHECK(series_to_csv(SparseSeries()) == "exponent,coefficient\n");
  CHECK_THROWS_AS(series_from_csv("exponent,coefficient\n1;2\n"), std::invalid_argument);
}
