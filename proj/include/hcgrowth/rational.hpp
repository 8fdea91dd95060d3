#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace hcgrowth {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline Rational rational_abs(const Rational& r) { return r.numerator() < 0 ? -r : r; }

/// floor(r) as an integer.
inline std::int64_t floor_of(const Rational& r) {
  const auto n = r.numerator();
  const auto d = r.denominator();
  return n >= 0 ? n / d : -((-n + d - 1) / d);
}

}  // namespace hcgrowth
