#include "hcgrowth/block_construction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hcgrowth {

const char* to_string(ConstructionMode mode) noexcept {
  return mode == ConstructionMode::relaxed ? "relaxed" : "paper";
}

ConstructionMode parse_construction_mode(const std::string& text) {
  if (text == "relaxed") return ConstructionMode::relaxed;
  if (text == "paper") return ConstructionMode::paper;
  throw std::invalid_argument("unknown mode '" + text + "' (expected paper|relaxed)");
}

double ConstructionConfig::q() const {
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double ConstructionConfig::e_exponent() const {
  return regime() == Regime::p_at_least_2 ? 2.0 : q();
}

KernelFamily ConstructionConfig::kernel_family() const {
  return regime() == Regime::p_at_least_2 ? KernelFamily::sign : KernelFamily::bounded;
}

void ConstructionConfig::validate() const {
  if (!(gamma > 0.5 && gamma < 1.0)) {
    throw std::invalid_argument("gamma must lie in the open interval (1/2, 1) for construction");
  }
  if (!(p > 1.0)) throw std::invalid_argument("p must be > 1 for construction");
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  if (mode == ConstructionMode::paper && !(c < 1.0)) {
    throw std::invalid_argument("paper mode requires 0 < c < 1");
  }
  if (!(C > 0.0)) throw std::invalid_argument("C must be positive");
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
}

Block build_block(std::int64_t n, const ConstructionConfig& cfg, const CatalogueEntry* entry) {
  Block b;
  b.descriptor.n = n;
  if (n % 2 != 0 || n < 2) {
    b.tag = "odd n";
    return b;
  }
  if (entry == nullptr) throw std::invalid_argument("build_block: missing catalogue entry");
  const int k = dyadic_class(n);
  if (entry->k != k) {
    throw std::invalid_argument("build_block: entry k = " + std::to_string(entry->k) +
                                " does not match dyadic class " + std::to_string(k) + " of n");
  }
  const std::int64_t alpha = entry->alpha_k;
  b.descriptor.k = k;
  b.descriptor.base = n * n;
  b.descriptor.stride = alpha;
  if (static_cast<double>(n) < 10.0 * static_cast<double>(alpha)) {
    b.tag = "below activation threshold";
    return b;
  }
  const std::int64_t len = kernel_length(n, cfg.gamma, alpha);
  b.descriptor.len = len;
  if (len == 0) {
    b.tag = "below nonemptiness threshold";
    return b;
  }

  const KernelPolynomial kernel = make_kernel(cfg.kernel_family(), len);
  std::vector<Term> terms;
  std::vector<Rational> exact;
  for (std::int64_t i = 0; i < len; ++i) {
    const auto& ki = kernel.exact[static_cast<std::size_t>(i)];
    const std::int64_t offset = b.descriptor.base + i * alpha;
    if (kernel.coefficients[static_cast<std::size_t>(i)] == 1.0) {
      b.descriptor.hitting_set.push_back(offset);
    }
    for (int j = 0; j <= entry->d_k; ++j) {
      const Rational a = ki * entry->q_coeffs[static_cast<std::size_t>(j)];
      if (a.numerator() == 0) continue;
      terms.push_back({offset + j, to_double(a)});
      exact.push_back(a);
    }
  }
  b.empty = terms.empty();
  if (b.empty) b.tag = "zero coefficients";
  b.series = SparseSeries::from_terms(std::move(terms), std::move(exact), {b.descriptor});
  return b;
}

Assembly assemble(const ConstructionConfig& cfg, TargetCatalogue& catalogue) {
  cfg.validate();
  Assembly out;
  for (int k = 1; k <= cfg.k_max; ++k) {
    out.activation[k] = first_active_n(catalogue.entry(k), cfg.gamma);
  }
  if (cfg.mode == ConstructionMode::paper) {
    out.warnings.push_back("paper-mode: thresholds only");
    return out;
  }

  std::vector<Term> terms;
  std::vector<Rational> exact;
  std::vector<BlockProvenance> provenance;
  std::int64_t last_exponent = -1;
  for (std::int64_t n = 2; n <= cfg.n_max; n += 2) {
    const int k = dyadic_class(n);
    if (k > cfg.k_max) continue;
    const auto& entry = catalogue.entry(k);
    if (static_cast<double>(n) < 10.0 * static_cast<double>(entry.alpha_k)) continue;
    Block b = build_block(n, cfg, &entry);
    if (b.empty) {
      ++out.blocks_empty;
      continue;
    }
    // Blocks arrive in increasing n, so disjointness reduces to ordering.
    const auto block_terms = b.series.terms();
    if (block_terms.front().exponent <= last_exponent) {
      throw std::logic_error("assemble: block n = " + std::to_string(n) +
                             " overlaps the previous block at exponent " +
                             std::to_string(block_terms.front().exponent));
    }
    last_exponent = block_terms.back().exponent;
    terms.insert(terms.end(), block_terms.begin(), block_terms.end());
    exact.insert(exact.end(), b.series.exact().begin(), b.series.exact().end());
    provenance.push_back(b.descriptor);
    out.blocks.push_back(std::move(b.descriptor));
  }
  if (out.blocks.empty()) {
    out.warnings.push_back("n_max = " + std::to_string(cfg.n_max) +
                           " is below every activation threshold; f is the zero series");
  }
  out.series = SparseSeries::from_terms(std::move(terms), std::move(exact), std::move(provenance));
  return out;
}

std::vector<std::int64_t> hitting_sets(std::span<const BlockProvenance> provenance, int k) {
  std::vector<std::int64_t> out;
  for (const auto& b : provenance) {
    if (b.k == k) out.insert(out.end(), b.hitting_set.begin(), b.hitting_set.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

ConstructionAudit audit_construction(const Assembly& assembly, const ConstructionConfig& cfg,
                                     TargetCatalogue& catalogue) {
  ConstructionAudit audit;
  const auto terms = assembly.series.terms();
  std::size_t cursor = 0;
  std::int64_t previous_max = -1;
  for (const auto& b : assembly.blocks) {
    ++audit.blocks;
    const auto& entry = catalogue.entry(b.k);
    const double lk = to_double(entry.l_k);
    const std::int64_t support_end = b.base + (b.len - 1) * b.stride + entry.d_k;
    const std::int64_t next_square = (b.n + 1) * (b.n + 1);
    auto note = [&](std::int64_t& counter, const std::string& what) {
      ++counter;
      if (audit.messages.size() < 32) {
        audit.messages.push_back("n = " + std::to_string(b.n) + ": " + what);
      }
    };

    std::int64_t block_min = -1;
    std::int64_t block_max = -1;
    while (cursor < terms.size() && terms[cursor].exponent <= support_end) {
      const auto& t = terms[cursor++];
      if (t.exponent < b.base) {
        note(audit.disjointness_failures, "term below the block base");
        continue;
      }
      if (block_min < 0) block_min = t.exponent;
      block_max = t.exponent;
      if (std::abs(t.coefficient) > lk) note(audit.coefficient_failures, "coefficient exceeds l_k");
    }
    if (block_min >= 0 && block_min <= previous_max) note(audit.disjointness_failures, "overlap");
    if (block_max >= next_square) note(audit.disjointness_failures, "support reaches (n+1)^2");
    if (block_max >= 0) previous_max = block_max;

    const auto spread = static_cast<std::int64_t>(
        std::floor(std::pow(static_cast<double>(b.n), 2.0 * (1.0 - cfg.gamma))));
    if (!b.hitting_set.empty() && b.hitting_set.back() > b.base + spread) {
      note(audit.hitting_max_failures, "max(B_n) exceeds n^2 + floor(n^{2(1-gamma)})");
    }
    const std::int64_t required =
        cfg.kernel_family() == KernelFamily::sign ? (b.len + 1) / 2 : b.len / 4;
    if (static_cast<std::int64_t>(b.hitting_set.size()) < required) {
      note(audit.hitting_count_failures, "hitting set smaller than the kernel guarantee");
    }
  }
  if (cursor != terms.size()) {
    audit.messages.push_back("terms not attributed to any block");
    ++audit.disjointness_failures;
  }
  return audit;
}

}  // namespace hcgrowth
