#include "hcgrowth/circle_dft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace hcgrowth {

namespace {

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

struct PlanDestroy {
  void operator()(fftw_plan_s* p) const noexcept { fftw_destroy_plan(p); }
};

std::vector<std::complex<double>> backward_dft(std::span<const Mode> modes,
                                               std::size_t node_count) {
  if (node_count == 0) throw std::invalid_argument("node_count must be positive");
  const auto n = static_cast<std::int64_t>(node_count);

  std::unique_ptr<fftw_complex, FftwFree> buffer(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * node_count)));
  if (!buffer) throw std::bad_alloc();
  auto* data = reinterpret_cast<std::complex<double>*>(buffer.get());
  std::fill(data, data + node_count, std::complex<double>{});
  for (const auto& m : modes) {
    std::int64_t slot = m.frequency % n;
    if (slot < 0) slot += n;
    data[slot] += m.coefficient;
  }

  // FFTW_ESTIMATE keeps planning (and therefore rounding) deterministic.
  std::unique_ptr<fftw_plan_s, PlanDestroy> plan(fftw_plan_dft_1d(
      static_cast<int>(node_count), buffer.get(), buffer.get(), FFTW_BACKWARD, FFTW_ESTIMATE));
  if (!plan) throw std::runtime_error("fftw planning failed");
  fftw_execute(plan.get());
  return {data, data + node_count};
}

}  // namespace

std::vector<std::complex<double>> sample_on_circle(std::span<const Mode> modes,
                                                   std::size_t node_count) {
  return backward_dft(modes, node_count);
}

std::vector<std::complex<double>> sample_on_circle(std::span<const double> coefficients,
                                                   std::size_t node_count) {
  std::vector<Mode> modes;
  modes.reserve(coefficients.size());
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    modes.push_back({static_cast<std::int64_t>(i), coefficients[i]});
  }
  return backward_dft(modes, node_count);
}

std::complex<double> evaluate_modes(std::span<const Mode> modes, double t) {
  std::complex<double> sum{};
  for (const auto& m : modes) {
    sum += m.coefficient * std::polar(1.0, static_cast<double>(m.frequency) * t);
  }
  return sum;
}

CircleMax refine_circle_max(std::span<const Mode> modes,
                            std::span<const std::complex<double>> samples,
                            bool refine) {
  if (samples.empty()) return {0.0, 0.0, 0.0};
  const std::size_t n = samples.size();
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);

  std::size_t best = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (std::abs(samples[j]) > std::abs(samples[best])) best = j;
  }
  const double sampled = std::abs(samples[best]);
  CircleMax out{sampled, static_cast<double>(best) * step, sampled};
  if (!refine || modes.empty()) return out;

  // Candidate nodes: the global best plus the next strongest local maxima.
  std::vector<std::size_t> peaks;
  for (std::size_t j = 0; j < n; ++j) {
    const double v = std::abs(samples[j]);
    if (v >= std::abs(samples[(j + n - 1) % n]) && v >= std::abs(samples[(j + 1) % n])) {
      peaks.push_back(j);
    }
  }
  constexpr std::size_t kCandidates = 4;
  const std::size_t keep = std::min(kCandidates, peaks.size());
  std::partial_sort(peaks.begin(), peaks.begin() + static_cast<std::ptrdiff_t>(keep), peaks.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double va = std::abs(samples[a]);
                      const double vb = std::abs(samples[b]);
                      return va != vb ? va > vb : a < b;
                    });
  peaks.resize(keep);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto magnitude = [&](double t) { return std::abs(evaluate_modes(modes, t)); };
  for (std::size_t j : peaks) {
    double a = (static_cast<double>(j) - 1.0) * step;
    double b = (static_cast<double>(j) + 1.0) * step;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = magnitude(x1);
    double f2 = magnitude(x2);
    for (int it = 0; it < 60 && (b - a) > 1e-15 * (1.0 + std::abs(a)); ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = magnitude(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = magnitude(x1);
      }
    }
    const double t = f1 >= f2 ? x1 : x2;
    const double v = std::max(f1, f2);
    if (v > out.value) {
      out.value = v;
      out.t = t;
    }
  }
  return out;
}

}  // namespace hcgrowth
