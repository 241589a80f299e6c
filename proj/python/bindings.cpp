#include <cmath>
#include <optional>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pbpois/bounds.hpp"
#include "pbpois/distributions.hpp"
#include "pbpois/divergences.hpp"
#include "pbpois/errors.hpp"
#include "pbpois/harness.hpp"
#include "pbpois/report_io.hpp"
#include "pbpois/saddle.hpp"

namespace py = pybind11;
using namespace pbpois;

namespace {

py::object to_python(const nlohmann::ordered_json& j) {
  py::object loads = py::module_::import("json").attr("loads");
  return loads(j.dump());
}

PrecisionPolicy policy(const std::string& precision, unsigned digits) {
  PrecisionPolicy p;
  p.mode = parse_precision_mode(precision);
  p.extended_digits = digits;
  p.validate();
  return p;
}

std::vector<double> alphas_or_default(const std::optional<std::vector<double>>& alphas) {
  return alphas ? *alphas : default_alpha_grid();
}

LogPmf compute_pmf(const std::vector<double>& p, const std::string& method, const std::string& precision,
                   unsigned digits) {
  const BernoulliVector v(p);
  const PrecisionPolicy pol = policy(precision, digits);
  switch (parse_pmf_method(method)) {
    case PmfMethod::dp: return poisson_binomial_pmf_dp(v, pol);
    case PmfMethod::dft: {
      LogPmf w = poisson_binomial_pmf_dft(v, 1.0, default_dft_nodes(v.size()), pol);
      w.log_mass.resize(v.size() + 1);
      return w;
    }
    case PmfMethod::contour: return poisson_binomial_pmf_contour(v, pol);
    case PmfMethod::bruteforce: return pmf_bruteforce(v);
    default: throw InputError("method must be dp, dft, contour or bruteforce");
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Poisson-binomial laws, their distances to the matched Poisson law, and bound checks";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<EscalationError>(m, "EscalationError", PyExc_ArithmeticError);
  py::register_exception<ResolutionError>(m, "ResolutionError", PyExc_ArithmeticError);

  m.def("moments", [](const std::vector<double>& p) {
    const Moments mo = BernoulliVector(p).moments();
    py::dict d;
    d["lambda"] = mo.lambda;
    d["lambda2"] = mo.lambda2;
    d["lambda3"] = mo.lambda3;
    d["F"] = mo.big_f;
    d["Q"] = mo.q;
    d["Q0"] = mo.q0;
    d["variance"] = mo.variance;
    return d;
  }, py::arg("p"));

  m.def("log_pmf", [](const std::vector<double>& p, const std::string& method, const std::string& precision,
                      unsigned digits) { return compute_pmf(p, method, precision, digits).log_mass; },
        py::arg("p"), py::arg("method") = "dp", py::arg("precision") = "binary64",
        py::arg("digits") = PrecisionPolicy::kDefaultExtendedDigits);

  m.def("pmf", [](const std::vector<double>& p, const std::string& method, const std::string& precision,
                  unsigned digits) {
    const LogPmf w = compute_pmf(p, method, precision, digits);
    std::vector<double> out;
    for (double l : w.log_mass) out.push_back(std::exp(l));
    return out;
  }, py::arg("p"), py::arg("method") = "dp", py::arg("precision") = "binary64",
        py::arg("digits") = PrecisionPolicy::kDefaultExtendedDigits);

  m.def("poisson_pmf", [](double lambda, std::size_t last) {
    std::vector<double> out;
    for (std::size_t k = 0; k <= last; ++k) out.push_back(std::exp(poisson_log_pmf(lambda, k)));
    return out;
  }, py::arg("lam"), py::arg("last"));

  m.def("divergence_report", [](const std::vector<double>& p, const std::optional<std::vector<double>>& alphas,
                                const std::string& precision, unsigned digits) {
    const DivergenceReport r = divergence_report(BernoulliVector(p), alphas_or_default(alphas), policy(precision, digits));
    return to_python(to_json(r));
  }, py::arg("p"), py::arg("alphas") = py::none(), py::arg("precision") = "binary64",
        py::arg("digits") = PrecisionPolicy::kDefaultExtendedDigits);

  m.def("evaluate_bounds", [](const std::vector<double>& p, const std::optional<std::vector<double>>& alphas) {
    const BernoulliVector v(p);
    const BoundEvaluation ev = evaluate_bounds(v, divergence_report(v, alphas_or_default(alphas)));
    nlohmann::ordered_json j;
    j["checks"] = nlohmann::ordered_json::array();
    j["ratios"] = nlohmann::ordered_json::array();
    for (const auto& c : ev.checks) j["checks"].push_back(to_json(c));
    for (const auto& r : ev.ratios) j["ratios"].push_back(to_json(r));
    return to_python(j);
  }, py::arg("p"), py::arg("alphas") = py::none());

  m.def("bound_catalog", [] {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const BoundSpec& b : bound_catalog()) j.push_back(to_json(b));
    return to_python(j);
  });

  m.def("family", [](const std::string& spec) {
    const BernoulliVector v = parse_family(spec).generate();
    return std::vector<double>(v.probabilities().begin(), v.probabilities().end());
  }, py::arg("spec"), "Probability vector of a family spec such as 'equal:n=10,p=0.1'.");

  m.def("sweep", [](const std::vector<std::string>& families, const std::optional<std::vector<double>>& alphas,
                    const std::string& precision, unsigned digits, unsigned workers) {
    std::vector<FamilySpec> specs;
    for (const auto& f : families) specs.push_back(parse_family(f));
    SweepOptions opts;
    opts.alphas = alphas_or_default(alphas);
    opts.precision = policy(precision, digits);
    opts.workers = workers;
    std::vector<SweepRecord> recs;
    {
      py::gil_scoped_release release;
      recs = run_sweep(specs, opts);
    }
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : recs) j.push_back(to_json(r));
    return to_python(j);
  }, py::arg("families"), py::arg("alphas") = py::none(), py::arg("precision") = "binary64",
        py::arg("digits") = PrecisionPolicy::kDefaultExtendedDigits, py::arg("workers") = 0);

  m.def("degenerate_asymptotics", [](const std::vector<std::size_t>& ns) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : degenerate_asymptotics(ns)) j.push_back(to_json(r));
    return to_python(j);
  }, py::arg("ns"));

  m.def("bv_limit_check", [](const std::vector<double>& lambdas, const std::vector<std::size_t>& ns) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : bv_limit_check(lambdas, ns)) j.push_back(to_json(r));
    return to_python(j);
  }, py::arg("lambdas"), py::arg("ns"));

  m.def("solve_saddle", [](const std::vector<double>& p, std::uint64_t k) {
    const SaddleSolution s = solve_saddle(BernoulliVector(p), k);
    py::dict d;
    d["k"] = s.k;
    d["r"] = s.r;
    d["bracket"] = py::make_tuple(s.bracket.low, s.bracket.high);
    d["log_r_k"] = s.log_r_k;
    d["iterations"] = s.iterations;
    return d;
  }, py::arg("p"), py::arg("k"));
}
