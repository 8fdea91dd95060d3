// Quantitative checks on a constructed function: the growth exponent
// alpha(p, gamma), per-block peak bounds, the normalized growth indicator
// Gamma(r) = r^alpha e^{-r} M_p(f, r), orbit approximation on hitting sets,
// and weighted-density lower bounds for the hitting sets T_k.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hcgrowth/block_construction.hpp"
#include "hcgrowth/sparse_series.hpp"
#include "hcgrowth/target_catalogue.hpp"
#include "hcgrowth/weighted_density.hpp"

namespace hcgrowth {

/// 1/2 - min(1, 2(1 - gamma)) / (2 max(2, q)), q = p / (p - 1).
/// p = 1 yields 1/2; p = inf is allowed.
double alpha_exponent(double p, double gamma);

struct PeakCheckRecord {
  std::int64_t n = 0;
  int k = 0;
  double p_checked = 0.0;  // inf in the p >= 2 regime
  double log_mp_base = 0.0;
  double log_bound_base = 0.0;
  double log_mp_next = 0.0;
  double log_bound_next = 0.0;
  bool vacuous = false;
  bool retried = false;
  bool pass = false;
};

/// Checks the composite bounds at radii n^2 and (n+1)^2, in log space:
///   p >= 2:    M_inf(P_n, r) <= 50 l_k alpha_k^{-1/2} e^{r} m^{-gamma}
///   1 < p < 2: M_p(P_n, r)   <= 30 l_k (m^{2(1-gamma)} / alpha_k)^{1/q} e^{r} m^{-1}
/// with m = n at r = n^2 and m = n + 1 at r = (n+1)^2. A failure is retried
/// once with four times the nodes.
PeakCheckRecord block_peak_check(const Block& block, const ConstructionConfig& cfg,
                                 const CatalogueEntry& entry, const QuadratureSpec& quad = {});

struct GrowthRow {
  double r;
  double log_mp;
  double log_gamma;   // alpha ln r - r + log M_p
  double gamma_value; // exp(log_gamma); may underflow to 0 far from the support
};

struct GrowthReport {
  double p = 0.0;
  double gamma = 0.0;
  double alpha = 0.0;
  std::vector<GrowthRow> rows;
  std::vector<GrowthRow> subseq_rows;  // r = n^2 over built blocks
  double sup_gamma = 0.0;
  double argmax_r = 0.0;
  double min_subseq_gamma = 0.0;
  bool empty = true;
};

/// 50-point geometric grid over [0.5 * lowest block base, 1.1 * highest exponent].
std::vector<double> default_growth_grid(const SparseSeries& f, std::size_t count = 50);

GrowthReport growth_profile(const SparseSeries& f, double p, double gamma,
                            std::span<const double> r_grid,
                            std::span<const std::int64_t> subseq_n,
                            const QuadratureSpec& quad = {});

struct WitnessResult {
  double min_gamma;
  double log_min_gamma;
  std::int64_t argmin_n;
  std::size_t tail_length;
};

/// min of Gamma(n^2) over the last ceil(tail_fraction * count) subsequence
/// points. Throws std::invalid_argument for a zero series or fewer than three
/// points.
WitnessResult optimality_witness(const SparseSeries& f, double p, double gamma,
                                 std::span<const std::int64_t> subseq_n,
                                 const QuadratureSpec& quad = {}, double tail_fraction = 0.5);

struct OrbitSample {
  std::int64_t s;
  std::int64_t n;
  int k;
};

struct OrbitCheckRecord {
  std::int64_t s = 0;
  std::int64_t n = 0;
  int k = 0;
  double sup_err = 0.0;     // sampled sup plus tail bound
  double tail_bound = 0.0;
  double bound = 0.0;       // 1 / l_k
  bool pass = false;
};

/// Orbit samples for class k: every s in every B_n, or an evenly strided
/// subset of `limit` of them (deterministic) when a limit is given.
std::vector<OrbitSample> orbit_samples(std::span<const BlockProvenance> blocks, int k,
                                       std::optional<std::size_t> limit = std::nullopt);

/// sup over |z| = l_k of |q_k(z) - f^{(s)}(z)| for each sample.
std::vector<OrbitCheckRecord> orbit_check(const SparseSeries& f, const CatalogueEntry& entry,
                                          std::span<const OrbitSample> samples,
                                          std::size_t node_count = 256,
                                          double tail_eps = kDefaultTailEps);

/// Exact check that f^{(s)} restricted to exponents < alpha_k is q_k.
bool orbit_identity_exact(const SparseSeries& f, const CatalogueEntry& entry, std::int64_t s);

struct HittingDensityReport {
  int k = 0;
  double gamma = 0.0;
  std::int64_t alpha_k = 0;
  double slack = 0.5;
  std::vector<PrefixDensityEstimate> at_block_ends;
  std::vector<double> running_max;
  double paper_bound = 0.0;  // e^{-gamma} (e^{1/(2 alpha)} - 1)
  double sharp_bound = 0.0;  // e^{-gamma} (e^{gamma/(2 alpha)} - 1)
  double threshold = 0.0;    // slack * paper_bound
  std::size_t blocks = 0;
  bool asserted = false;     // at least min_blocks blocks
  bool density_pass = false;

  std::int64_t largest_n = 0;
  double ratio_upper = 0.0;  // S(n^2 + floor((len-1)/2)) / S(n^2 + floor(n^{2(1-gamma)}))
  double limit_upper = 0.0;  // e^{gamma (1/(2 alpha) - 1)}
  double ratio_lower = 0.0;  // S(n^2 - 1) / S(n^2 + floor(n^{2(1-gamma)}))
  double limit_lower = 0.0;  // e^{-gamma}
  double limit_tolerance = 0.05;
  bool limits_pass = false;

  std::string status;
  bool pass() const { return !asserted || (density_pass && limits_pass); }
};

HittingDensityReport hitting_density_check(std::span<const std::int64_t> t_k,
                                           const CatalogueEntry& entry, const WeightSpec& spec,
                                           std::span<const BlockProvenance> blocks,
                                           double slack = 0.5, std::size_t min_blocks = 5,
                                           double limit_tolerance = 0.05);

}  // namespace hcgrowth
