// Thin pybind11 layer. Reports cross the boundary as JSON strings; the
// Python package parses them, so the serialization stays single-sourced
// with the CLI output.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hyperconc/protocol.hpp"
#include "hyperconc/truth_tables.hpp"
#include "hyperconc/verify.hpp"

namespace py = pybind11;
using namespace hyperconc;

namespace {

DetectorModel parse_detector(const std::string& s) {
    if (s == "pnr") return DetectorModel::PNR;
    if (s == "bucket") return DetectorModel::Bucket;
    throw std::invalid_argument("detector must be 'pnr' or 'bucket'");
}

PpcVariant parse_ppc(const std::string& s) {
    if (s == "plain") return PpcVariant::Plain;
    if (s == "improved") return PpcVariant::Improved;
    throw std::invalid_argument("ppc must be 'plain' or 'improved'");
}

ProtocolVariant parse_variant(const std::string& s) {
    if (s == "two_copies") return ProtocolVariant::TwoCopies;
    if (s == "auxiliary") return ProtocolVariant::Auxiliary;
    throw std::invalid_argument("variant must be 'two_copies' or 'auxiliary'");
}

ProtocolConfig make_config(int n, double alpha2, double delta2, const std::string& detector,
                           const std::string& ppc, const std::string& variant) {
    ProtocolConfig cfg;
    cfg.n_parties = n;
    cfg.params = StateParams::from_squares(alpha2, delta2);
    cfg.detector_model = parse_detector(detector);
    cfg.ppc_variant = parse_ppc(ppc);
    cfg.variant = parse_variant(variant);
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "linear-optics hyperentanglement concentration engine";

    m.def("success_formula",
          [](double alpha2, double delta2) {
              return success_formula(StateParams::from_squares(alpha2, delta2));
          },
          py::arg("alpha2"), py::arg("delta2"),
          "Closed-form success probability 4|alpha beta delta eta|^2.");

    m.def("run_exact_json",
          [](int n, double alpha2, double delta2, const std::string& detector,
             const std::string& ppc, const std::string& variant) {
              return report_json(run_exact(make_config(n, alpha2, delta2, detector, ppc, variant)));
          },
          py::arg("n"), py::arg("alpha2"), py::arg("delta2"), py::arg("detector") = "pnr",
          py::arg("ppc") = "plain", py::arg("variant") = "two_copies",
          "Exhaustive branch enumeration; returns the run report as JSON.");

    m.def("run_shots_json",
          [](int n, double alpha2, double delta2, long shots, std::uint64_t seed,
             const std::string& detector, const std::string& ppc, const std::string& variant) {
              return shot_report_json(
                  run_shots(make_config(n, alpha2, delta2, detector, ppc, variant), shots, seed));
          },
          py::arg("n"), py::arg("alpha2"), py::arg("delta2"), py::arg("shots"), py::arg("seed"),
          py::arg("detector") = "pnr", py::arg("ppc") = "plain",
          py::arg("variant") = "two_copies",
          "Deterministic Monte-Carlo sampling; returns the shot report as JSON.");

    m.def("sweep",
          [](int n, double lo, double hi, double step) {
              std::vector<std::tuple<double, double, double, double>> rows;
              for (double a2 = lo; a2 <= hi + 1e-12; a2 += step) {
                  for (double d2 = lo; d2 <= hi + 1e-12; d2 += step) {
                      ProtocolConfig cfg;
                      cfg.n_parties = n;
                      cfg.params = StateParams::from_squares(a2, d2);
                      const RunReport r = run_exact(cfg);
                      rows.emplace_back(a2, d2, r.success_probability, r.formula_probability);
                  }
              }
              return rows;
          },
          py::arg("n"), py::arg("lo") = 0.05, py::arg("hi") = 0.95, py::arg("step") = 0.05,
          "Grid of (alpha2, delta2, p_exact, p_formula) tuples.");

    m.def("device_tables_json",
          [](const std::string& detector) { return device_tables_json(parse_detector(detector)); },
          py::arg("detector") = "pnr",
          "Characteristic input/output tables of the four devices as JSON.");

    m.def("ppc_routing_json", &ppc_routing_json,
          "Routing of the PPC comparator stage for the four polarization products.");

    m.def("verify",
          [](int trials, std::uint64_t seed) {
              const VerifyResult r = verify_against_oracle(trials, seed);
              py::dict d;
              d["trials"] = r.trials;
              d["max_amplitude_deviation"] = r.max_amplitude_deviation;
              d["max_completeness_defect"] = r.max_completeness_defect;
              return d;
          },
          py::arg("trials") = 100, py::arg("seed") = 12345,
          "Cross-check the circuit engine against the permanent oracle on random circuits.");
}
