// Sampling of trigonometric polynomials on equispaced nodes of the unit circle.
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hcgrowth {

/// One frequency of a sparse trigonometric polynomial g(t) = sum c_j e^{i f_j t}.
struct Mode {
  std::int64_t frequency;
  std::complex<double> coefficient;
};

/// Values g(2 pi j / node_count) for j = 0..node_count-1. Frequencies are
/// reduced modulo node_count, which is exact for equispaced sampling.
std::vector<std::complex<double>> sample_on_circle(std::span<const Mode> modes,
                                                   std::size_t node_count);

/// Dense convenience overload: coefficient i multiplies e^{i k t} with k = i.
std::vector<std::complex<double>> sample_on_circle(std::span<const double> coefficients,
                                                   std::size_t node_count);

/// g(t) by direct summation.
std::complex<double> evaluate_modes(std::span<const Mode> modes, double t);

struct CircleMax {
  double value;  // refined maximum of |g|
  double t;
  double sampled;  // maximum over the nodes alone
};

/// Maximum of |g| over the circle: sampled on the given node values, then
/// refined by golden-section search around the best few nodes.
CircleMax refine_circle_max(std::span<const Mode> modes,
                            std::span<const std::complex<double>> samples,
                            bool refine = true);

}  // namespace hcgrowth
