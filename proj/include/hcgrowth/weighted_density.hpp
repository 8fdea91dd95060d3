// Weights beta_n = exp(n^gamma), their partial sums, and prefix estimates of
// upper weighted densities of integer sets. All weight arithmetic is carried
// out in log space: n^gamma exceeds 10^6 for the radii we care about.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hcgrowth {

/// Exponent of the density scale beta^gamma = (exp(n^gamma))_n, gamma in [0,1].
class WeightSpec {
 public:
  explicit WeightSpec(double gamma);
  double gamma() const noexcept { return gamma_; }

 private:
  double gamma_;
};

enum class SumMode { exact, asymptotic, automatic };

const char* to_string(SumMode mode) noexcept;
SumMode parse_sum_mode(const std::string& text);

inline constexpr std::int64_t kDefaultSummationCap = 10'000'000;

/// log beta_n = n^gamma. Rejects n = 0.
double log_weight(std::int64_t n, const WeightSpec& spec);

struct LogPartialSum {
  double value;
  SumMode used;  // never `automatic`
};

/// log sum_{k=1}^n exp(k^gamma).
///
/// `exact` accumulates the sum term by term (closed forms for gamma = 0 and
/// gamma = 1, any n); it is refused above `cap`. `asymptotic` returns
/// log(n^{1-gamma}/gamma) + n^gamma and is only defined for 0 < gamma < 1.
/// `automatic` picks exact up to `cap` and the asymptotic form beyond it.
LogPartialSum log_partial_sum(std::int64_t n, const WeightSpec& spec,
                              SumMode mode,
                              std::int64_t cap = kDefaultSummationCap);

/// Running sum of exp(x_i) kept as a rescaled compensated double.
class LogSumAccumulator {
 public:
  void add(double log_term);
  double log() const;  // -inf when nothing was added
  bool empty() const noexcept { return !started_; }

 private:
  void rescale(double new_shift);

  bool started_ = false;
  double shift_ = 0.0;
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Increasing enumeration of a set of positive integers. `open()` returns a
/// fresh generator each time; generators yield nullopt when exhausted.
class IntegerSet {
 public:
  using Generator = std::function<std::optional<std::int64_t>()>;

  IntegerSet(std::string name, std::function<Generator()> factory);

  static IntegerSet all();
  static IntegerSet empty();
  static IntegerSet even();
  /// {first, first + d, first + 2d, ...}; first defaults to d.
  static IntegerSet arithmetic(std::int64_t d, std::int64_t first = 0);
  static IntegerSet squares();
  /// Takes a strictly increasing list of positive integers.
  static IntegerSet from_sorted(std::vector<std::int64_t> values,
                                std::string name = "list");
  /// "all", "even", "squares", "ap:d" (multiples of d), or "ap:d:first".
  static IntegerSet parse_builtin(const std::string& spec);

  Generator open() const { return factory_(); }
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  std::function<Generator()> factory_;
};

struct PrefixDensityEstimate {
  std::int64_t n;
  double log_weighted_count;  // -inf when E has no element <= n
  double log_weighted_total;
  double ratio;
};

PrefixDensityEstimate prefix_density(const IntegerSet& set, std::int64_t n,
                                     const WeightSpec& spec);

/// Estimates on an increasing grid, plus the running maximum at each point.
/// The running maximum estimates the limsup along the chosen grid; it is not
/// a certificate for the upper density.
struct DensityScan {
  std::vector<PrefixDensityEstimate> estimates;
  std::vector<double> running_max;

  double max() const { return running_max.empty() ? 0.0 : running_max.back(); }
};

DensityScan upper_density_scan(const IntegerSet& set, const WeightSpec& spec,
                               std::span<const std::int64_t> grid);

struct ScaleComparison {
  struct Row {
    double gamma;
    double running_max;
  };
  std::vector<Row> rows;
  double tolerance;
  /// Indices i such that rows[i+1].running_max < rows[i].running_max - tolerance.
  std::vector<std::size_t> violations;

  bool ordered() const noexcept { return violations.empty(); }
};

ScaleComparison density_scale_compare(const IntegerSet& set,
                                      std::span<const double> gammas,
                                      std::span<const std::int64_t> grid,
                                      double tolerance = 0.02);

/// Grid helper: "a,b,c" or "log:lo:hi:count" (geometric, rounded, deduplicated).
std::vector<std::int64_t> parse_integer_grid(const std::string& spec);

}  // namespace hcgrowth
