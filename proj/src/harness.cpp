#include "hcgrowth/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace hcgrowth {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity" || t == "+inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": expected a number, got '" + text + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    const long long v = std::stoll(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": expected an integer, got '" + text + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw std::invalid_argument(key + ": expected true|false, got '" + text + "'");
}

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string out;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    out += c;
    first = false;
  }
  return out;
}

Json envelope(const RunConfig& cfg, const char* kind) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["report"] = kind;
  j["config"] = cfg.to_json();
  return j;
}

Json thresholds_json(const ActivationThresholds& t) {
  Json j;
  j["paper_threshold"] = json_number(t.paper_threshold);
  j["nonempty_threshold"] = json_number(t.nonempty_threshold);
  if (t.first_active_n) {
    j["first_active_n"] = *t.first_active_n;
  } else {
    j["first_active_n"] = nullptr;
  }
  j["first_active_approx"] = json_number(t.first_active_approx);
  return j;
}

Json rational_json(const Rational& r) { return to_string(r); }

Json peak_json(const PeakCheckRecord& r) {
  Json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["p_checked"] = json_number(r.p_checked);
  j["log_mp_base"] = json_number(r.log_mp_base);
  j["log_bound_base"] = json_number(r.log_bound_base);
  j["log_mp_next"] = json_number(r.log_mp_next);
  j["log_bound_next"] = json_number(r.log_bound_next);
  j["vacuous"] = r.vacuous;
  j["retried"] = r.retried;
  j["pass"] = r.pass;
  return j;
}

const std::string kGrowthHeader = "r,log_Mp,Gamma";
const std::string kDensityHeader = "k,n,ratio,running_max";
const std::string kKernelHeader = "N,family,plus_count,p,norm,bound";

}  // namespace

ConstructionConfig RunConfig::construction() const {
  ConstructionConfig cfg;
  cfg.gamma = gamma;
  cfg.p = p;
  cfg.c = c;
  cfg.C = C;
  cfg.k_max = k_max;
  cfg.n_max = n_max;
  cfg.mode = mode;
  return cfg;
}

QuadratureSpec RunConfig::quadrature() const { return {min_nodes, refinement, tail_eps}; }

double RunConfig::effective_e_exponent() const { return construction().e_exponent(); }

void RunConfig::validate() const {
  construction().validate();
  if (e_exponent) {
    const double expected = effective_e_exponent();
    if (std::abs(*e_exponent - expected) > 1e-12 * std::max(1.0, expected)) {
      throw std::invalid_argument("e_exponent = " + fmt(*e_exponent) + " does not match the " +
                                  to_string(regime_for(p)) + " regime (expected " +
                                  fmt(expected) + ")");
    }
  }
  if (min_nodes < 8) throw std::invalid_argument("min_nodes must be >= 8");
  if (!(tail_eps > 0.0 && tail_eps < 1.0)) throw std::invalid_argument("tail_eps must lie in (0, 1)");
  if (growth_points < 2) throw std::invalid_argument("growth_points must be >= 2");
  if (orbit_nodes < 8) throw std::invalid_argument("orbit_nodes must be >= 8");
  if (select_k && (*select_k < 1 || *select_k > k_max)) {
    throw std::invalid_argument("k must lie in [1, k_max = " + std::to_string(k_max) + "]");
  }
  if (orbit_sample && *orbit_sample == 0) throw std::invalid_argument("orbit_sample must be >= 1");
  if (!(density_slack > 0.0 && density_slack <= 1.0)) {
    throw std::invalid_argument("density_slack must lie in (0, 1]");
  }
}

void RunConfig::set(const std::string& raw_key, const std::string& value) {
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  if (key == "gamma") {
    gamma = parse_double(key, value);
  } else if (key == "p") {
    p = parse_double(key, value);
  } else if (key == "c") {
    c = parse_double(key, value);
  } else if (key == "C") {
    C = parse_double(key, value);
  } else if (key == "e_exponent") {
    const std::string t = trim(value);
    if (t.empty() || t == "auto") {
      e_exponent.reset();
    } else {
      e_exponent = parse_double(key, value);
    }
  } else if (key == "k_max") {
    k_max = static_cast<int>(parse_int(key, value));
  } else if (key == "n_max") {
    n_max = parse_int(key, value);
  } else if (key == "mode") {
    mode = parse_construction_mode(trim(value));
  } else if (key == "min_nodes") {
    min_nodes = static_cast<std::size_t>(std::max<std::int64_t>(0, parse_int(key, value)));
  } else if (key == "refinement") {
    refinement = parse_bool(key, value);
  } else if (key == "tail_eps") {
    tail_eps = parse_double(key, value);
  } else if (key == "output_dir" || key == "out") {
    output_dir = trim(value);
  } else if (key == "suites") {
    select_suites(value);
  } else if (key == "growth_points") {
    growth_points = static_cast<std::size_t>(std::max<std::int64_t>(0, parse_int(key, value)));
  } else if (key == "growth_grid") {
    growth_grid = trim(value);
    if (!growth_grid.empty()) parse_integer_grid(growth_grid);
  } else if (key == "k") {
    const std::string t = trim(value);
    if (t.empty() || t == "all") {
      select_k.reset();
    } else {
      select_k = static_cast<int>(parse_int(key, value));
    }
  } else if (key == "orbit_sample") {
    const std::string t = trim(value);
    if (t.empty() || t == "all") {
      orbit_sample.reset();
    } else {
      orbit_sample = static_cast<std::size_t>(std::max<std::int64_t>(0, parse_int(key, value)));
    }
  } else if (key == "orbit_nodes") {
    orbit_nodes = static_cast<std::size_t>(std::max<std::int64_t>(0, parse_int(key, value)));
  } else if (key == "density_slack") {
    density_slack = parse_double(key, value);
  } else {
    throw std::invalid_argument("unknown configuration key '" + raw_key + "'");
  }
}

void RunConfig::select_suites(const std::string& list) {
  suite_construct = suite_blocks = suite_growth = suite_orbit = suite_density = false;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item == "all") {
      suite_construct = suite_blocks = suite_growth = suite_orbit = suite_density = true;
    } else if (item == "construct") {
      suite_construct = true;
    } else if (item == "blocks") {
      suite_blocks = true;
    } else if (item == "growth") {
      suite_growth = true;
    } else if (item == "orbit") {
      suite_orbit = true;
    } else if (item == "density" || item == "tk-density") {
      suite_density = true;
    } else if (!item.empty()) {
      throw std::invalid_argument("unknown suite '" + item +
                                  "' (expected construct|blocks|growth|orbit|density|all)");
    }
  }
}

Json RunConfig::to_json() const {
  Json j;
  j["gamma"] = json_number(gamma);
  j["p"] = json_number(p);
  j["c"] = json_number(c);
  j["C"] = json_number(C);
  j["e_exponent"] = json_number(effective_e_exponent());
  j["regime"] = to_string(regime_for(p));
  j["k_max"] = k_max;
  j["n_max"] = n_max;
  j["mode"] = to_string(mode);
  j["quadrature"] = {{"min_nodes", min_nodes}, {"refinement", refinement}};
  j["tail_eps"] = json_number(tail_eps);
  j["output_dir"] = output_dir;
  j["suites"] = {{"construct", suite_construct},
                 {"blocks", suite_blocks},
                 {"growth", suite_growth},
                 {"orbit", suite_orbit},
                 {"density", suite_density}};
  j["growth_points"] = growth_points;
  j["growth_grid"] = growth_grid.empty() ? "default" : growth_grid;
  if (select_k) {
    j["k"] = *select_k;
  } else {
    j["k"] = "all";
  }
  if (orbit_sample) {
    j["orbit_sample"] = *orbit_sample;
  } else {
    j["orbit_sample"] = "all";
  }
  j["orbit_nodes"] = orbit_nodes;
  j["density_slack"] = json_number(density_slack);
  return j;
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  for (const auto& [k, v] : read_key_values(path)) base.set(k, v);
  return base;
}

Json json_number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

std::string CsvTable::text() const {
  std::string out = header + "\n";
  for (const auto& r : rows) {
    out += r;
    out += '\n';
  }
  return out;
}

bool ReportBundle::all_pass() const {
  return std::all_of(suite_pass.begin(), suite_pass.end(), [](const auto& kv) { return kv.second; });
}

Json catalogue_json(const CatalogueEntry& entry, std::optional<double> gamma) {
  Json j;
  j["k"] = entry.k;
  Json coeffs = Json::array();
  for (const auto& q : entry.q_coeffs) coeffs.push_back(rational_json(q));
  j["coeffs"] = coeffs;
  j["d_k"] = entry.d_k;
  j["l1"] = rational_json(entry.l1_norm);
  j["l_k"] = rational_json(entry.l_k);
  j["alpha_k"] = entry.alpha_k;
  j["regime"] = to_string(entry.regime);
  if (gamma) {
    j["gamma"] = json_number(*gamma);
    const auto t = first_active_n(entry, *gamma);
    if (t.first_active_n) {
      j["first_active_n"] = *t.first_active_n;
    } else {
      j["first_active_n"] = nullptr;
    }
    j["thresholds"] = thresholds_json(t);
  }
  return j;
}

Json kernel_validation_json(const KernelValidation& v) {
  Json j;
  j["N"] = v.n;
  j["family"] = to_string(v.family);
  j["plus_count"] = v.plus_count;
  j["plus_required"] = v.plus_required;
  Json norms = Json::array();
  for (const auto& [p, norm] : v.norms) {
    norms.push_back({{"p", json_number(p)},
                     {"norm", json_number(norm)},
                     {"bound", json_number(v.bounds.at(p))}});
  }
  j["norms"] = norms;
  if (v.family == KernelFamily::sign) j["sup_upper"] = json_number(v.sup_upper);
  j["coefficients_ok"] = v.coefficients_ok;
  j["bounds_ok"] = v.bounds_ok;
  return j;
}

Json density_scan_json(const WeightSpec& spec, const IntegerSet& set, const DensityScan& scan,
                       std::span<const std::int64_t> grid, SumMode mode) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["gamma"] = json_number(spec.gamma());
  j["set"] = set.name();
  j["mode"] = to_string(mode);
  Json rows = Json::array();
  for (std::size_t i = 0; i < scan.estimates.size(); ++i) {
    const auto& e = scan.estimates[i];
    const auto total = log_partial_sum(grid[i], spec, mode);
    rows.push_back({{"n", e.n},
                    {"ratio", json_number(e.ratio)},
                    {"log_total", json_number(total.value)},
                    {"log_total_mode", to_string(total.used)},
                    {"running_max", json_number(scan.running_max[i])}});
  }
  j["grid"] = rows;
  j["running_max"] = json_number(scan.max());
  return j;
}

Json growth_json(const GrowthReport& report) {
  Json j;
  j["p"] = json_number(report.p);
  j["gamma"] = json_number(report.gamma);
  j["alpha"] = json_number(report.alpha);
  j["empty"] = report.empty;
  auto rows_json = [](const std::vector<GrowthRow>& rows) {
    Json a = Json::array();
    for (const auto& r : rows) {
      a.push_back({{"r", json_number(r.r)},
                   {"log_Mp", json_number(r.log_mp)},
                   {"log_Gamma", json_number(r.log_gamma)},
                   {"Gamma", json_number(r.gamma_value)}});
    }
    return a;
  };
  j["grid"] = rows_json(report.rows);
  j["subsequence"] = rows_json(report.subseq_rows);
  j["sup_Gamma"] = json_number(report.sup_gamma);
  j["argmax_r"] = json_number(report.argmax_r);
  j["min_subsequence_Gamma"] = json_number(report.min_subseq_gamma);
  return j;
}

Json orbit_json(std::span<const OrbitCheckRecord> records) {
  Json a = Json::array();
  for (const auto& r : records) {
    a.push_back({{"s", r.s},
                 {"n", r.n},
                 {"k", r.k},
                 {"sup_err", json_number(r.sup_err)},
                 {"tail_bound", json_number(r.tail_bound)},
                 {"bound", json_number(r.bound)},
                 {"pass", r.pass}});
  }
  return a;
}

Json hitting_density_json(const HittingDensityReport& report) {
  Json j;
  j["k"] = report.k;
  j["gamma"] = json_number(report.gamma);
  j["alpha_k"] = report.alpha_k;
  j["slack"] = json_number(report.slack);
  j["paper_bound"] = json_number(report.paper_bound);
  j["sharp_bound"] = json_number(report.sharp_bound);
  j["threshold"] = json_number(report.threshold);
  j["blocks"] = report.blocks;
  j["asserted"] = report.asserted;
  j["density_pass"] = report.density_pass;
  Json ends = Json::array();
  for (std::size_t i = 0; i < report.at_block_ends.size(); ++i) {
    const auto& e = report.at_block_ends[i];
    ends.push_back({{"n", e.n},
                    {"ratio", json_number(e.ratio)},
                    {"running_max", json_number(report.running_max[i])}});
  }
  j["at_block_ends"] = ends;
  j["running_max"] =
      json_number(report.running_max.empty() ? 0.0 : report.running_max.back());
  j["limits"] = {{"largest_n", report.largest_n},
                 {"ratio_upper", json_number(report.ratio_upper)},
                 {"limit_upper", json_number(report.limit_upper)},
                 {"ratio_lower", json_number(report.ratio_lower)},
                 {"limit_lower", json_number(report.limit_lower)},
                 {"tolerance", json_number(report.limit_tolerance)},
                 {"pass", report.limits_pass}};
  j["status"] = report.status;
  j["pass"] = report.pass();
  return j;
}

Json series_meta_json(const SparseSeries& f, const ConstructionConfig& cfg) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["terms"] = f.size();
  Json blocks = Json::array();
  for (const auto& b : f.provenance()) {
    blocks.push_back({{"n", b.n},
                      {"k", b.k},
                      {"base", b.base},
                      {"stride", b.stride},
                      {"len", b.len},
                      {"hitting", b.hitting_set}});
  }
  j["blocks"] = blocks;
  j["constants"] = {{"C", json_number(cfg.C)},
                    {"c", json_number(cfg.c)},
                    {"e", json_number(cfg.e_exponent())},
                    {"gamma", json_number(cfg.gamma)},
                    {"p", json_number(cfg.p)},
                    {"kernel_family", to_string(cfg.kernel_family())}};
  return j;
}

ReportBundle run_suite(const RunConfig& config) {
  config.validate();
  ReportBundle bundle;
  bundle.config = config;
  const ConstructionConfig cfg = config.construction();
  const QuadratureSpec quad = config.quadrature();
  TargetCatalogue catalogue(cfg.constants(), cfg.regime());

  // The construction is needed by every later suite, so it always runs; the
  // construct flag only controls whether its report is emitted.
  const Assembly assembly = assemble(cfg, catalogue);
  const SparseSeries& f = assembly.series;
  bundle.paper_mode = cfg.mode == ConstructionMode::paper;

  Json construct = envelope(config, "construct");
  Json activation = Json::object();
  for (const auto& [k, t] : assembly.activation) {
    Json a = thresholds_json(t);
    a["alpha_k"] = catalogue.entry(k).alpha_k;
    a["l_k"] = rational_json(catalogue.entry(k).l_k);
    activation[std::to_string(k)] = a;
  }
  construct["activation"] = activation;
  construct["warnings"] = assembly.warnings;

  if (bundle.paper_mode) {
    construct["status"] = "paper-mode: thresholds only";
    bundle.reports["construct_report"] = construct;
    bundle.suite_pass["construct"] = true;
    return bundle;
  }

  const ConstructionAudit audit = audit_construction(assembly, cfg, catalogue);
  construct["blocks_built"] = assembly.blocks.size();
  construct["blocks_empty"] = assembly.blocks_empty;
  construct["terms"] = f.size();
  if (f.empty()) {
    construct["support_range"] = nullptr;
  } else {
    construct["support_range"] = {f.terms().front().exponent, f.terms().back().exponent};
  }
  construct["audit"] = {{"blocks", audit.blocks},
                        {"disjointness_failures", audit.disjointness_failures},
                        {"coefficient_failures", audit.coefficient_failures},
                        {"hitting_max_failures", audit.hitting_max_failures},
                        {"hitting_count_failures", audit.hitting_count_failures},
                        {"messages", audit.messages}};
  construct["pass"] = audit.failures() == 0;
  bundle.series_csv = series_to_csv(f);
  bundle.series_meta = series_meta_json(f, cfg);
  if (config.suite_construct) {
    bundle.reports["construct_report"] = construct;
    bundle.suite_pass["construct"] = audit.failures() == 0;

    CsvTable kernels{kKernelHeader, {}};
    std::set<std::int64_t> lengths;
    for (const auto& b : assembly.blocks) lengths.insert(b.len);
    const std::vector<double> ps = cfg.kernel_family() == KernelFamily::sign
                                       ? std::vector<double>{2.0, std::numeric_limits<double>::infinity()}
                                       : std::vector<double>{1.0, 1.5, 2.0};
    for (const auto len : lengths) {
      const auto v = validate_kernel(make_kernel(cfg.kernel_family(), len), ps);
      for (const auto& [p, norm] : v.norms) {
        kernels.rows.push_back(csv_row({std::to_string(len), to_string(v.family),
                                        std::to_string(v.plus_count), fmt(p), fmt(norm),
                                        fmt(v.bounds.at(p))}));
      }
    }
    bundle.curves["kernel_norms"] = std::move(kernels);
  }

  if (config.suite_blocks) {
    Json rep = envelope(config, "block_checks");
    Json records = Json::array();
    bool pass = true;
    for (const auto& d : assembly.blocks) {
      const auto& entry = catalogue.entry(d.k);
      const Block b = build_block(d.n, cfg, &entry);
      const auto r = block_peak_check(b, cfg, entry, quad);
      pass = pass && r.pass;
      records.push_back(peak_json(r));
    }
    rep["records"] = records;
    rep["pass"] = pass;
    bundle.reports["block_checks"] = rep;
    bundle.suite_pass["blocks"] = pass;
  }

  std::vector<std::int64_t> subseq;
  for (const auto& b : assembly.blocks) subseq.push_back(b.n);

  if (config.suite_growth) {
    Json rep = envelope(config, "growth");
    CsvTable curve{kGrowthHeader, {}};
    bool pass = true;
    if (f.empty()) {
      rep["status"] = "empty series";
    } else {
      std::vector<double> grid;
      if (config.growth_grid.empty()) {
        grid = default_growth_grid(f, config.growth_points);
      } else {
        for (const auto r : parse_integer_grid(config.growth_grid)) {
          grid.push_back(static_cast<double>(r));
        }
      }
      const auto g = growth_profile(f, cfg.p, cfg.gamma, grid, subseq, quad);
      rep["profile"] = growth_json(g);
      for (const auto& r : g.rows) {
        curve.rows.push_back(csv_row({fmt(r.r), fmt(r.log_mp), fmt(r.gamma_value)}));
        pass = pass && std::isfinite(r.log_gamma);
      }
      if (subseq.size() >= 3) {
        const auto w = optimality_witness(f, cfg.p, cfg.gamma, subseq, quad);
        rep["witness"] = {{"min_Gamma", json_number(w.min_gamma)},
                          {"log_min_Gamma", json_number(w.log_min_gamma)},
                          {"argmin_n", w.argmin_n},
                          {"tail_length", w.tail_length}};
        pass = pass && std::isfinite(w.log_min_gamma);
      }
      rep["status"] = pass ? "pass" : "fail";
    }
    rep["pass"] = pass;
    bundle.reports["growth_report"] = rep;
    bundle.curves["growth_gamma"] = std::move(curve);
    bundle.suite_pass["growth"] = pass;
  }

  if (config.suite_orbit) {
    Json rep = envelope(config, "orbit");
    Json classes = Json::object();
    bool pass = true;
    std::size_t checked = 0;
    for (int k = 1; k <= cfg.k_max; ++k) {
      if (config.select_k && *config.select_k != k) continue;
      const auto& entry = catalogue.entry(k);
      const auto samples = orbit_samples(assembly.blocks, k, config.orbit_sample);
      const auto records = orbit_check(f, entry, samples, config.orbit_nodes, config.tail_eps);
      std::size_t failures = 0;
      double worst = 0.0;
      for (const auto& r : records) {
        if (!r.pass) ++failures;
        worst = std::max(worst, r.sup_err);
      }
      checked += records.size();
      pass = pass && failures == 0;
      classes[std::to_string(k)] = {{"l_k", rational_json(entry.l_k)},
                                    {"bound", json_number(1.0 / to_double(entry.l_k))},
                                    {"samples", records.size()},
                                    {"failures", failures},
                                    {"worst_sup_err", json_number(worst)},
                                    {"records", orbit_json(records)}};
    }
    rep["classes"] = classes;
    rep["checked"] = checked;
    rep["pass"] = pass;
    bundle.reports["orbit_report"] = rep;
    bundle.suite_pass["orbit"] = pass;
  }

  if (config.suite_density) {
    Json rep = envelope(config, "tk_density");
    Json classes = Json::object();
    CsvTable curve{kDensityHeader, {}};
    bool pass = true;
    const WeightSpec spec(cfg.gamma);
    for (int k = 1; k <= cfg.k_max; ++k) {
      if (config.select_k && *config.select_k != k) continue;
      const auto t_k = hitting_sets(assembly.blocks, k);
      const auto r = hitting_density_check(t_k, catalogue.entry(k), spec, assembly.blocks,
                                           config.density_slack);
      pass = pass && r.pass();
      classes[std::to_string(k)] = hitting_density_json(r);
      for (std::size_t i = 0; i < r.at_block_ends.size(); ++i) {
        curve.rows.push_back(csv_row({std::to_string(k), std::to_string(r.at_block_ends[i].n),
                                      fmt(r.at_block_ends[i].ratio), fmt(r.running_max[i])}));
      }
    }
    rep["classes"] = classes;
    rep["pass"] = pass;
    bundle.reports["tk_density"] = rep;
    bundle.curves["tk_density"] = std::move(curve);
    bundle.suite_pass["density"] = pass;
  }
  return bundle;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

void emit_plot_data(const ReportBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  const std::pair<const char*, const std::string*> curves[] = {
      {"growth_gamma", &kGrowthHeader},
      {"tk_density", &kDensityHeader},
      {"kernel_norms", &kKernelHeader},
  };
  for (const auto& [stem, header] : curves) {
    const auto it = bundle.curves.find(stem);
    const std::string text = it != bundle.curves.end() ? it->second.text() : *header + "\n";
    write_text_file(dir / (std::string(stem) + ".csv"), text);
  }
}

void write_bundle(const ReportBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  if (bundle.series_csv) write_text_file(dir / "series.csv", *bundle.series_csv);
  if (bundle.series_meta) write_text_file(dir / "series_meta.json", bundle.series_meta->dump(2) + "\n");
  for (const auto& [stem, report] : bundle.reports) {
    write_text_file(dir / (stem + ".json"), report.dump(2) + "\n");
  }
  emit_plot_data(bundle, dir);

  Json summary = envelope(bundle.config, "summary");
  summary["paper_mode"] = bundle.paper_mode;
  Json suites = Json::object();
  for (const auto& [name, pass] : bundle.suite_pass) suites[name] = pass;
  summary["suites"] = suites;
  summary["pass"] = bundle.all_pass();
  Json files = Json::array();
  if (bundle.series_csv) files.push_back("series.csv");
  if (bundle.series_meta) files.push_back("series_meta.json");
  for (const auto& [stem, report] : bundle.reports) files.push_back(stem + ".json");
  files.push_back("growth_gamma.csv");
  files.push_back("tk_density.csv");
  files.push_back("kernel_norms.csv");
  summary["files"] = files;
  write_text_file(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace hcgrowth
