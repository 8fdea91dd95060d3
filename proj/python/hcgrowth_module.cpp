#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hcgrowth/growth_analysis.hpp"
#include "hcgrowth/harness.hpp"
#include "hcgrowth/kernel_polynomials.hpp"
#include "hcgrowth/sparse_series.hpp"
#include "hcgrowth/target_catalogue.hpp"
#include "hcgrowth/weighted_density.hpp"

namespace py = pybind11;
using namespace hcgrowth;

namespace {

SparseSeries series_from(const std::vector<std::int64_t>& exponents,
                         const std::vector<double>& coefficients) {
  if (exponents.size() != coefficients.size()) {
    throw std::invalid_argument("exponents and coefficients differ in length");
  }
  std::vector<Term> terms;
  for (std::size_t i = 0; i < exponents.size(); ++i) terms.push_back({exponents[i], coefficients[i]});
  return SparseSeries::from_terms(std::move(terms));
}

std::string run_json(const std::map<std::string, std::string>& overrides) {
  RunConfig cfg;
  for (const auto& [key, value] : overrides) cfg.set(key, value);
  const auto bundle = run_suite(cfg);
  Json out;
  out["pass"] = bundle.all_pass();
  out["paper_mode"] = bundle.paper_mode;
  out["suite_pass"] = bundle.suite_pass;
  out["reports"] = bundle.reports;
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weighted-density growth construction: core routines";

  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("alpha_exponent", &alpha_exponent, py::arg("p"), py::arg("gamma"));

  m.def(
      "log_partial_sum",
      [](std::int64_t n, double gamma, const std::string& mode) {
        return log_partial_sum(n, WeightSpec(gamma), parse_sum_mode(mode)).value;
      },
      py::arg("n"), py::arg("gamma"), py::arg("mode") = "auto",
      "log sum_{k<=n} exp(k^gamma)");

  m.def(
      "prefix_density",
      [](const std::vector<std::int64_t>& members, std::int64_t n, double gamma) {
        return prefix_density(IntegerSet::from_sorted(members), n, WeightSpec(gamma)).ratio;
      },
      py::arg("members"), py::arg("n"), py::arg("gamma"));

  m.def(
      "builtin_prefix_density",
      [](const std::string& set, std::int64_t n, double gamma) {
        return prefix_density(IntegerSet::parse_builtin(set), n, WeightSpec(gamma)).ratio;
      },
      py::arg("set"), py::arg("n"), py::arg("gamma"));

  m.def("rs_sequence", &rs_sequence, py::arg("count"));
  m.def(
      "kernel",
      [](const std::string& family, std::int64_t n) {
        return make_kernel(parse_kernel_family(family), n).coefficients;
      },
      py::arg("family"), py::arg("n"));
  m.def(
      "circle_lp_norm",
      [](const std::vector<double>& c, double p, std::optional<std::size_t> nodes) {
        return circle_lp_norm(c, p, nodes.value_or(default_kernel_nodes(static_cast<std::int64_t>(c.size()))));
      },
      py::arg("coefficients"), py::arg("p"), py::arg("nodes") = py::none());

  m.def(
      "_catalogue_entry",
      [](std::int64_t k, double C, double c, double e, double p, std::optional<double> gamma) {
        const auto entry = enumerate_target(k, CatalogueConstants{C, c, e}, regime_for(p));
        return catalogue_json(entry, gamma).dump();
      },
      py::arg("k"), py::arg("C") = 10.0, py::arg("c") = 1.0, py::arg("e") = 2.0,
      py::arg("p") = std::numeric_limits<double>::infinity(), py::arg("gamma") = py::none());

  m.def(
      "log_mp",
      [](const std::vector<std::int64_t>& exponents, const std::vector<double>& coefficients,
         double r, double p) { return mp_mean(series_from(exponents, coefficients), r, p).log_mp; },
      py::arg("exponents"), py::arg("coefficients"), py::arg("r"), py::arg("p"),
      "log M_p(f, r) for f = sum a_m z^m / m!");
  m.def(
      "log_m2_parseval",
      [](const std::vector<std::int64_t>& exponents, const std::vector<double>& coefficients,
         double r) { return log_m2_parseval(series_from(exponents, coefficients), r); },
      py::arg("exponents"), py::arg("coefficients"), py::arg("r"));

  m.def("_run", &run_json, py::arg("overrides"));
}
