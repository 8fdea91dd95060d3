#include "hcgrowth/weighted_density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace hcgrowth {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Rescale once the newest term outgrows the running shift by this much.
constexpr double kRescaleGap = 600.0;

bool is_endpoint(double gamma) { return gamma == 0.0 || gamma == 1.0; }

double closed_form_log_sum(std::int64_t n, double gamma) {
  const double nd = static_cast<double>(n);
  if (gamma == 0.0) return 1.0 + std::log(nd);
  // e (e^n - 1) / (e - 1)
  return 1.0 + nd + std::log1p(-std::exp(-nd)) - std::log(std::numbers::e - 1.0);
}

double asymptotic_log_sum(std::int64_t n, double gamma) {
  const double nd = static_cast<double>(n);
  return (1.0 - gamma) * std::log(nd) - std::log(gamma) + std::pow(nd, gamma);
}

double exact_log_sum(std::int64_t n, double gamma) {
  LogSumAccumulator acc;
  for (std::int64_t k = 1; k <= n; ++k) {
    acc.add(std::pow(static_cast<double>(k), gamma));
  }
  return acc.log();
}

}  // namespace

WeightSpec::WeightSpec(double gamma) : gamma_(gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("gamma must lie in [0, 1]");
  }
}

const char* to_string(SumMode mode) noexcept {
  switch (mode) {
    case SumMode::exact: return "exact";
    case SumMode::asymptotic: return "asymptotic";
    case SumMode::automatic: return "auto";
  }
  return "?";
}

SumMode parse_sum_mode(const std::string& text) {
  if (text == "exact") return SumMode::exact;
  if (text == "asymptotic") return SumMode::asymptotic;
  if (text == "auto" || text == "automatic") return SumMode::automatic;
  throw std::invalid_argument("unknown summation mode '" + text + "'");
}

double log_weight(std::int64_t n, const WeightSpec& spec) {
  if (n < 1) throw std::invalid_argument("log_weight: n must be >= 1");
  return std::pow(static_cast<double>(n), spec.gamma());
}

LogPartialSum log_partial_sum(std::int64_t n, const WeightSpec& spec,
                              SumMode mode, std::int64_t cap) {
  if (n < 1) throw std::invalid_argument("log_partial_sum: n must be >= 1");
  const double gamma = spec.gamma();

  if (mode == SumMode::automatic) {
    if (is_endpoint(gamma) || n <= cap) mode = SumMode::exact;
    else mode = SumMode::asymptotic;
  }

  if (mode == SumMode::asymptotic) {
    if (is_endpoint(gamma)) {
      throw std::invalid_argument(
          "asymptotic partial sum requires 0 < gamma < 1; use exact mode "
          "(closed form) at the endpoints");
    }
    return {asymptotic_log_sum(n, gamma), SumMode::asymptotic};
  }

  if (is_endpoint(gamma)) return {closed_form_log_sum(n, gamma), SumMode::exact};
  if (n > cap) {
    throw std::invalid_argument("exact partial sum refused: n = " +
                                std::to_string(n) + " exceeds summation cap " +
                                std::to_string(cap));
  }
  return {exact_log_sum(n, gamma), SumMode::exact};
}

// ---------------------------------------------------------------------------

void LogSumAccumulator::rescale(double new_shift) {
  const double factor = std::exp(shift_ - new_shift);
  sum_ *= factor;
  compensation_ *= factor;
  shift_ = new_shift;
}

void LogSumAccumulator::add(double log_term) {
  if (log_term == kNegInf) return;
  if (!started_) {
    started_ = true;
    shift_ = log_term;
  } else if (log_term > shift_ + kRescaleGap) {
    rescale(log_term);
  }
  // Neumaier summation
  const double x = std::exp(log_term - shift_);
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) compensation_ += (sum_ - t) + x;
  else compensation_ += (x - t) + sum_;
  sum_ = t;
}

double LogSumAccumulator::log() const {
  if (!started_) return kNegInf;
  return shift_ + std::log(sum_ + compensation_);
}

// ---------------------------------------------------------------------------

IntegerSet::IntegerSet(std::string name, std::function<Generator()> factory)
    : name_(std::move(name)), factory_(std::move(factory)) {}

IntegerSet IntegerSet::all() { return arithmetic(1, 1); }

IntegerSet IntegerSet::empty() {
  return IntegerSet("empty", [] {
    return Generator([]() -> std::optional<std::int64_t> { return std::nullopt; });
  });
}

IntegerSet IntegerSet::even() { return arithmetic(2, 2); }

IntegerSet IntegerSet::arithmetic(std::int64_t d, std::int64_t first) {
  if (d < 1) throw std::invalid_argument("arithmetic progression needs d >= 1");
  if (first == 0) first = d;
  if (first < 1) throw std::invalid_argument("arithmetic progression must start >= 1");
  std::string name = d == 1 && first == 1 ? "all"
                     : "ap:" + std::to_string(d) +
                           (first == d ? "" : ":" + std::to_string(first));
  return IntegerSet(std::move(name), [d, first] {
    return Generator([next = first, d]() mutable -> std::optional<std::int64_t> {
      const std::int64_t v = next;
      next += d;
      return v;
    });
  });
}

IntegerSet IntegerSet::squares() {
  return IntegerSet("squares", [] {
    return Generator([m = std::int64_t{1}]() mutable -> std::optional<std::int64_t> {
      const std::int64_t v = m * m;
      ++m;
      return v;
    });
  });
}

IntegerSet IntegerSet::from_sorted(std::vector<std::int64_t> values, std::string name) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 1) throw std::invalid_argument("set elements must be >= 1");
    if (i > 0 && values[i] <= values[i - 1]) {
      throw std::invalid_argument("set elements must be strictly increasing (index " +
                                  std::to_string(i) + ")");
    }
  }
  auto shared = std::make_shared<const std::vector<std::int64_t>>(std::move(values));
  return IntegerSet(std::move(name), [shared] {
    return Generator([shared, i = std::size_t{0}]() mutable -> std::optional<std::int64_t> {
      if (i >= shared->size()) return std::nullopt;
      return (*shared)[i++];
    });
  });
}

IntegerSet IntegerSet::parse_builtin(const std::string& spec) {
  if (spec == "all") return all();
  if (spec == "even") return even();
  if (spec == "squares") return squares();
  if (spec == "empty") return empty();
  if (spec.rfind("ap:", 0) == 0) {
    const std::string rest = spec.substr(3);
    const auto colon = rest.find(':');
    try {
      const std::int64_t d = std::stoll(rest.substr(0, colon));
      const std::int64_t first =
          colon == std::string::npos ? 0 : std::stoll(rest.substr(colon + 1));
      return arithmetic(d, first);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("malformed progression spec '" + spec + "'");
    }
  }
  throw std::invalid_argument("unknown builtin set '" + spec + "'");
}

// ---------------------------------------------------------------------------

DensityScan upper_density_scan(const IntegerSet& set, const WeightSpec& spec,
                               std::span<const std::int64_t> grid) {
  if (grid.empty()) throw std::invalid_argument("density scan needs a nonempty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 1 || (i > 0 && grid[i] <= grid[i - 1])) {
      throw std::invalid_argument("density grid must be strictly increasing positive integers");
    }
  }

  const double gamma = spec.gamma();
  auto generator = set.open();
  std::int64_t last_yield = 0;
  auto next = [&]() -> std::optional<std::int64_t> {
    auto v = generator();
    if (v) {
      if (*v <= last_yield) {
        throw std::runtime_error("set '" + set.name() +
                                 "' is not enumerated in strictly increasing positive order");
      }
      last_yield = *v;
    }
    return v;
  };
  std::optional<std::int64_t> member = next();

  LogSumAccumulator total;
  LogSumAccumulator count;
  DensityScan scan;
  scan.estimates.reserve(grid.size());
  scan.running_max.reserve(grid.size());

  std::size_t g = 0;
  double best = 0.0;
  for (std::int64_t k = 1; g < grid.size(); ++k) {
    const double lw = std::pow(static_cast<double>(k), gamma);
    total.add(lw);
    while (member && *member < k) member = next();
    if (member && *member == k) {
      count.add(lw);
      member = next();
    }
    if (k == grid[g]) {
      PrefixDensityEstimate e{k, count.log(), total.log(), 0.0};
      e.ratio = count.empty() ? 0.0
                              : std::clamp(std::exp(e.log_weighted_count - e.log_weighted_total), 0.0, 1.0);
      best = std::max(best, e.ratio);
      scan.estimates.push_back(e);
      scan.running_max.push_back(best);
      ++g;
    }
  }
  return scan;
}

PrefixDensityEstimate prefix_density(const IntegerSet& set, std::int64_t n,
                                     const WeightSpec& spec) {
  if (n < 1) throw std::invalid_argument("prefix_density: n must be >= 1");
  const std::int64_t grid[] = {n};
  return upper_density_scan(set, spec, grid).estimates.front();
}

ScaleComparison density_scale_compare(const IntegerSet& set,
                                      std::span<const double> gammas,
                                      std::span<const std::int64_t> grid,
                                      double tolerance) {
  ScaleComparison out;
  out.tolerance = tolerance;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (i > 0 && gammas[i] <= gammas[i - 1]) {
      throw std::invalid_argument("gammas must be increasing");
    }
    const auto scan = upper_density_scan(set, WeightSpec(gammas[i]), grid);
    out.rows.push_back({gammas[i], scan.max()});
  }
  for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
    if (out.rows[i + 1].running_max < out.rows[i].running_max - tolerance) {
      out.violations.push_back(i);
    }
  }
  return out;
}

std::vector<std::int64_t> parse_integer_grid(const std::string& spec) {
  std::vector<std::int64_t> grid;
  try {
    if (spec.rfind("log:", 0) == 0) {
      std::vector<std::string> parts;
      std::size_t start = 4;
      while (true) {
        const auto colon = spec.find(':', start);
        parts.push_back(spec.substr(start, colon - start));
        if (colon == std::string::npos) break;
        start = colon + 1;
      }
      if (parts.size() != 3) throw std::invalid_argument("");
      const double lo = std::stod(parts[0]);
      const double hi = std::stod(parts[1]);
      const long count = std::stol(parts[2]);
      if (!(lo >= 1.0 && hi >= lo && count >= 1)) throw std::invalid_argument("");
      for (long i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        const auto v = static_cast<std::int64_t>(std::llround(lo * std::pow(hi / lo, t)));
        if (grid.empty() || v > grid.back()) grid.push_back(v);
      }
    } else {
      std::size_t start = 0;
      while (start <= spec.size()) {
        const auto comma = spec.find(',', start);
        grid.push_back(std::stoll(spec.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
  } catch (const std::logic_error&) {
    throw std::invalid_argument("malformed grid spec '" + spec + "'");
  }
  if (grid.empty()) throw std::invalid_argument("empty grid");
  return grid;
}

}  // namespace hcgrowth
