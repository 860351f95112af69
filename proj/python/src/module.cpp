#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "bergman/composition.hpp"
#include "bergman/config.hpp"
#include "bergman/kernels.hpp"
#include "bergman/reports.hpp"
#include "bergman/toeplitz.hpp"
#include "bergman/verification.hpp"
#include "bergman/weights.hpp"

namespace py = pybind11;
using namespace bergman;

namespace {

// Specs cross the boundary as JSON text; the Python layer serializes dicts.
Json parse(const std::string& text) { return Json::parse(text); }

RadialWeight weight(const std::string& spec) { return weight_from_json(parse(spec)); }

Measure measure(const std::string& spec, const RadialWeight& base) {
  return measure_from_json(parse(spec), base);
}

Symbol symbol(const std::string& spec) { return symbol_from_json(parse(spec)); }

std::string dump(const Json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_bergman, m) {
  m.doc() = "Native core of the bergman package";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  m.def("weight_density", [](const std::string& w, double r) { return weight(w).density(r); });
  m.def("omega_hat", [](const std::string& w, double r) { return weight(w).tail(r); });
  m.def("omega_star", [](const std::string& w, double r) { return weight(w).star(r); });
  m.def("moment", [](const std::string& w, std::size_t n) { return weight(w).moment(n); });
  m.def("box_mass", [](const std::string& w, double modulus) { return weight(w).box_mass(modulus); });
  m.def("classify", [](const std::string& w) { return dump(to_json(classify(weight(w)))); });

  m.def(
      "kernel_eval",
      [](const std::string& w, Complex z, Complex zeta, int order) {
        const KernelValue v = kernel_eval(weight(w), z, zeta, order);
        return py::make_tuple(v.value, v.error_estimate, v.terms);
      },
      py::arg("weight"), py::arg("z"), py::arg("zeta"), py::arg("order") = 0);
  m.def("kernel_diag", [](const std::string& w, Complex z) { return kernel_diag(weight(w), z); });

  m.def("toeplitz_matrix", [](const std::string& mu, const std::string& w, int N) {
    const RadialWeight om = weight(w);
    return Eigen::MatrixXcd(toeplitz_matrix(measure(mu, om), om, N).entries);
  });
  m.def("berezin", [](const std::string& mu, const std::string& w, Complex z) {
    const RadialWeight om = weight(w);
    return berezin(measure(mu, om), om, z);
  });
  m.def("criteria", [](const std::string& mu, const std::string& w, double p, double q, double r) {
    const RadialWeight om = weight(w);
    return dump(to_json(criteria_report_pq(measure(mu, om), om, {p, q}, r)));
  });

  m.def("composition_matrix",
        [](const std::string& phi, const std::string& w, int N) {
          return Eigen::MatrixXcd(composition_matrix(symbol(phi), weight(w), N).entries);
        });
  m.def("schatten_composition", [](const std::string& phi, const std::string& w, double p, int N) {
    return dump(to_json(schatten_composition(symbol(phi), weight(w), p, N)));
  });

  m.def("schatten_norm", [](const Eigen::MatrixXcd& entries, double p) {
    OperatorMatrix T;
    T.entries = entries;
    return dump(to_json(schatten_norm(T, p)));
  });

  m.def("suite_names", &suite_names);
  m.def("run_suite", [](const std::string& name) {
    if (name == "geometry") return dump(to_json(geometry_suite()));
    return dump(to_json(run_suite(name)));
  });
}
