#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rfdlab/driver.hpp"

namespace py = pybind11;

namespace {

rfdlab::DriverOptions make_options(const std::string& element,
                                   std::optional<double> epsilon,
                                   std::optional<double> tolerance,
                                   bool parallel, int max_dim) {
  rfdlab::DriverOptions o;
  o.element_selector = element;
  o.epsilon = epsilon;
  o.tolerance = tolerance;
  o.parallel = parallel;
  o.max_dim = max_dim;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "separation certificates from finite-dimensional representations";

  py::register_exception<rfdlab::ParseError>(m, "ParseError", PyExc_ValueError);

  m.def(
      "canonical_instance",
      [](const std::string& text) {
        return rfdlab::canonical_instance(rfdlab::parse_instance(text));
      },
      py::arg("text"), "Canonical serialization of an instance.");

  m.def(
      "instance_digest",
      [](const std::string& text) {
        return rfdlab::instance_digest(rfdlab::parse_instance(text));
      },
      py::arg("text"), "Digest of the canonical serialization.");

  m.def(
      "canonical_json",
      [](const std::string& text) {
        return rfdlab::canonical_dump(rfdlab::Json::parse(text));
      },
      py::arg("text"), "Canonical re-serialization of arbitrary json text.");

  m.def(
      "verify",
      [](const std::string& text, std::optional<double> tolerance) {
        rfdlab::DriverOptions o;
        o.tolerance = tolerance;
        const rfdlab::VerifyOutcome out =
            rfdlab::run_verify(rfdlab::parse_instance(text), o);
        return py::make_tuple(static_cast<int>(out.exit), out.message,
                              out.report.dump());
      },
      py::arg("text"), py::arg("tolerance") = std::nullopt,
      "Run the representation axiom suite on a groupoid instance.");

  m.def(
      "separate",
      [](const std::string& text, const std::string& element,
         std::optional<double> epsilon, std::optional<double> tolerance,
         bool parallel, int max_dim) {
        const rfdlab::InstanceSpec spec = rfdlab::parse_instance(text);
        const rfdlab::SeparateOutcome out = rfdlab::run_separate(
            spec, make_options(element, epsilon, tolerance, parallel, max_dim));
        rfdlab::Json certs = rfdlab::Json::array();
        for (const auto& c : out.certificates)
          certs.push_back(rfdlab::certificate_json(c));
        return py::make_tuple(static_cast<int>(out.exit), out.message,
                              out.report.dump(), certs.dump());
      },
      py::arg("text"), py::arg("element") = "",
      py::arg("epsilon") = std::nullopt, py::arg("tolerance") = std::nullopt,
      py::arg("parallel") = false, py::arg("max_dim") = 4096,
      "Build certificates separating an element from the identity.");

  m.def(
      "check",
      [](const std::string& text, std::optional<double> tolerance) {
        rfdlab::DriverOptions o;
        o.tolerance = tolerance;
        const rfdlab::CheckOutcome out = rfdlab::run_check(text, o);
        return py::make_tuple(static_cast<int>(out.exit), out.message,
                              out.report.dump());
      },
      py::arg("text"), py::arg("tolerance") = std::nullopt,
      "Re-verify a stored certificate, including a full replay.");
}
