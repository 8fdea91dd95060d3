// Run configuration, the verification suites, and report persistence.
//
// Every JSON report carries "schema" (bumped on breaking field changes) and
// the full run configuration. Outputs depend only on the configuration, so
// two runs with the same configuration produce byte-identical files.
#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcgrowth/block_construction.hpp"
#include "hcgrowth/growth_analysis.hpp"
#include "hcgrowth/kernel_polynomials.hpp"
#include "hcgrowth/sparse_series.hpp"
#include "hcgrowth/target_catalogue.hpp"
#include "hcgrowth/weighted_density.hpp"

namespace hcgrowth {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Thrown for unreadable or unwritable paths; maps to exit status 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double gamma = 0.75;
  double p = std::numeric_limits<double>::infinity();
  double c = 1.0;
  double C = 10.0;
  std::optional<double> e_exponent;  // derived from p when unset
  int k_max = 1;
  std::int64_t n_max = 2000;
  ConstructionMode mode = ConstructionMode::relaxed;
  std::size_t min_nodes = 64;
  bool refinement = true;
  double tail_eps = kDefaultTailEps;
  std::string output_dir = "out";

  bool suite_construct = true;
  bool suite_blocks = true;
  bool suite_growth = true;
  bool suite_orbit = true;
  bool suite_density = true;

  std::size_t growth_points = 50;
  std::string growth_grid;         // empty: geometric default; else "a,b,c" or "log:lo:hi:count"
  std::optional<int> select_k;     // restricts orbit and density suites to one class
  std::optional<std::size_t> orbit_sample;  // unset: every s in every B_n
  std::size_t orbit_nodes = 256;
  double density_slack = 0.5;

  ConstructionConfig construction() const;
  QuadratureSpec quadrature() const;
  double effective_e_exponent() const;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;

  /// Sets one key from its textual value (config-file syntax).
  void set(const std::string& key, const std::string& value);
  /// Comma list of suites: construct, blocks, growth, orbit, density, all.
  void select_suites(const std::string& list);

  Json to_json() const;
};

/// Reads "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// JSON number, or a string for non-finite values ("inf", "-inf", "nan").
Json json_number(double x);

struct CsvTable {
  std::string header;
  std::vector<std::string> rows;

  std::string text() const;
};

struct ReportBundle {
  RunConfig config;
  bool paper_mode = false;
  std::map<std::string, Json> reports;  // file stem -> report
  std::map<std::string, CsvTable> curves;  // plot data, file stem -> table
  std::optional<std::string> series_csv;
  std::optional<Json> series_meta;
  std::map<std::string, bool> suite_pass;

  bool all_pass() const;
};

/// Runs the selected suites in order construct -> blocks -> growth -> orbit
/// -> density. Throws std::invalid_argument for an invalid configuration.
ReportBundle run_suite(const RunConfig& config);

/// Writes series files, JSON reports, summary.json and plot CSVs into dir.
void write_bundle(const ReportBundle& bundle, const std::filesystem::path& dir);

/// Writes only the plot CSVs: growth_gamma.csv (r,log_Mp,Gamma),
/// tk_density.csv (k,n,ratio,running_max) and kernel_norms.csv
/// (N,family,plus_count,p,norm,bound). Missing curves are written as headers.
void emit_plot_data(const ReportBundle& bundle, const std::filesystem::path& dir);

// Report builders shared by the CLI subcommands.
Json catalogue_json(const CatalogueEntry& entry, std::optional<double> gamma);
Json kernel_validation_json(const KernelValidation& v);
Json density_scan_json(const WeightSpec& spec, const IntegerSet& set, const DensityScan& scan,
                       std::span<const std::int64_t> grid, SumMode mode);
Json growth_json(const GrowthReport& report);
Json orbit_json(std::span<const OrbitCheckRecord> records);
Json hitting_density_json(const HittingDensityReport& report);
Json series_meta_json(const SparseSeries& f, const ConstructionConfig& cfg);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace hcgrowth
