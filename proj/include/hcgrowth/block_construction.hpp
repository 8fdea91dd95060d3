// Blocks P_n and the assembled function f = sum_n P_n.
//
// For even n in A_k with n >= 10 alpha_k the block is
//   P_n = sum_{i < N} kernel_i * sum_{j <= d_k} q_{k,j} z^{n^2 + i alpha_k + j} / (n^2 + i alpha_k + j)!
// with N = floor(n^{2(1-gamma)} / alpha_k) and the kernel drawn from the sign
// family (p >= 2) or the bounded family (1 < p < 2). Odd n and n below the
// threshold give empty blocks. The hitting set B_n collects the derivative
// orders s = n^2 + l alpha_k whose kernel coefficient is exactly +1.
#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hcgrowth/kernel_polynomials.hpp"
#include "hcgrowth/sparse_series.hpp"
#include "hcgrowth/target_catalogue.hpp"

namespace hcgrowth {

enum class ConstructionMode { relaxed, paper };

const char* to_string(ConstructionMode mode) noexcept;
ConstructionMode parse_construction_mode(const std::string& text);

struct ConstructionConfig {
  double gamma = 0.75;
  double p = std::numeric_limits<double>::infinity();
  double c = 1.0;
  double C = 10.0;
  int k_max = 1;
  std::int64_t n_max = 2000;
  ConstructionMode mode = ConstructionMode::relaxed;

  Regime regime() const { return regime_for(p); }
  double q() const;             // conjugate exponent
  double e_exponent() const;    // 2 or q
  KernelFamily kernel_family() const;
  CatalogueConstants constants() const { return {C, c, e_exponent()}; }
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

using BlockDescriptor = BlockProvenance;

struct Block {
  BlockDescriptor descriptor;
  SparseSeries series;
  bool empty = true;
  std::string tag;  // why the block is empty, if it is
};

/// entry must be the catalogue entry for dyadic_class(n) when n is even;
/// it is ignored for odd n.
Block build_block(std::int64_t n, const ConstructionConfig& cfg, const CatalogueEntry* entry);

struct Assembly {
  SparseSeries series;
  std::vector<BlockDescriptor> blocks;  // nonzero blocks, increasing n
  std::int64_t blocks_empty = 0;        // admissible n whose kernel length was 0
  std::map<int, ActivationThresholds> activation;  // per class k
  std::vector<std::string> warnings;
};

/// Merges build_block over every even n <= n_max with dyadic class <= k_max.
/// In paper mode nothing is constructed: only the thresholds are reported.
Assembly assemble(const ConstructionConfig& cfg, TargetCatalogue& catalogue);

/// Structural invariants of an assembly, checked block by block.
struct ConstructionAudit {
  std::int64_t blocks = 0;
  std::int64_t disjointness_failures = 0;  // max exponent of P_n >= (n+1)^2, or overlap
  std::int64_t coefficient_failures = 0;   // |a_m| > l_k
  std::int64_t hitting_max_failures = 0;   // max(B_n) > n^2 + floor(n^{2(1-gamma)})
  std::int64_t hitting_count_failures = 0; // |B_n| below the family guarantee
  std::vector<std::string> messages;

  std::int64_t failures() const {
    return disjointness_failures + coefficient_failures + hitting_max_failures +
           hitting_count_failures;
  }
};

ConstructionAudit audit_construction(const Assembly& assembly, const ConstructionConfig& cfg,
                                     TargetCatalogue& catalogue);

/// T_k: union of the hitting sets of class-k blocks, sorted.
std::vector<std::int64_t> hitting_sets(std::span<const BlockProvenance> provenance, int k);

}  // namespace hcgrowth
