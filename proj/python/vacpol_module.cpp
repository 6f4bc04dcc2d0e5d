#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vacpol/errors.hpp"
#include "vacpol/pauli_villars.hpp"
#include "vacpol/renorm.hpp"
#include "vacpol/run.hpp"
#include "vacpol/scf.hpp"

namespace py = pybind11;
using namespace vacpol;

namespace {

py::dict report_dict(const SCFReport& r) {
  py::dict d;
  d["iterations"] = r.iterations;
  d["energy"] = r.energy;
  d["relative_energy"] = r.relative_energy;
  d["residual"] = r.residual;
  d["fermi_level"] = r.fermi_level;
  d["relative_charge"] = r.relative_charge;
  d["degenerate_levels"] = r.degenerate_levels;
  d["uniqueness_condition_met"] = r.uniqueness_condition_met;
  d["converged"] = r.converged;
  d["energy_history"] = r.energy_history;
  return d;
}

py::dict solve_gaussian(double box_length, double cutoff, double mass, double alpha,
                        double charge, double width, double q, const std::string& shape) {
  const CutoffShape s = shape == "quadratic" ? CutoffShape::Quadratic : CutoffShape::Sharp;
  SCFResult result = [&] {
    py::gil_scoped_release release;
    const PeriodicModel model(build_lattice(box_length, cutoff, s), mass);
    const ChargeDensity nu = periodize(gaussian_profile(charge, width), model.lattice());
    return q == 0.0 ? scf_solve(model, nu, alpha) : scf_charge_sector(model, nu, alpha, q);
  }();
  py::dict d = report_dict(result.report);
  d["induced_charge"] = result.density.total_charge();
  d["modes"] = result.state.lattice().mode_count();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Periodic reduced BDF vacuum, renormalization and Pauli-Villars multipliers";

  auto base = py::register_exception<Error>(m, "VacpolError");
  auto validation = py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<LandauPole>(m, "LandauPole", m.attr("NumericalError").ptr());
  py::register_exception<DomainError>(m, "DomainError", validation.ptr());
  py::register_exception<Unsupported>(m, "Unsupported", validation.ptr());

  m.def("B0", &B0, py::arg("cutoff"));
  m.def("B0_asymptotic", &B0_asymptotic, py::arg("cutoff"));
  m.def("B_k", &B_k, py::arg("cutoff"), py::arg("k"));
  m.def("uehling_U", &uehling_U, py::arg("k"));
  m.def("uehling_U_closed", &uehling_U_closed, py::arg("k"));
  m.def("uehling_U_integral", &uehling_U_integral, py::arg("k"));
  m.def("U_cutoff", &U_cutoff, py::arg("cutoff"), py::arg("k"));
  m.def("cutoff_from_Z3", &cutoff_from_Z3, py::arg("alpha_ph"), py::arg("z3"));

  py::class_<RenormPoint>(m, "RenormPoint")
      .def_readonly("alpha_bare", &RenormPoint::alpha_bare)
      .def_readonly("alpha_ph", &RenormPoint::alpha_ph)
      .def_readonly("cutoff", &RenormPoint::cutoff)
      .def_readonly("z3", &RenormPoint::z3);
  m.def("renorm_point_from_bare", &renorm_point_from_bare, py::arg("alpha"), py::arg("cutoff"));
  m.def("bare_from_physical", &bare_from_physical, py::arg("alpha_ph"), py::arg("cutoff"));

  m.def(
      "linear_response",
      [](std::vector<double> grid, std::vector<double> values, double alpha, double cutoff) {
        return linear_response(SampledFunction(std::move(grid), std::move(values)), alpha, cutoff)
            .values();
      },
      py::arg("grid"), py::arg("values"), py::arg("alpha"), py::arg("cutoff"));
  m.def(
      "uehling_potential_gaussian",
      [](double charge, double width, double alpha_ph, double r) {
        return uehling_potential(gaussian_radial(charge, width), alpha_ph, r);
      },
      py::arg("charge"), py::arg("width"), py::arg("alpha_ph"), py::arg("r"));

  py::class_<PVScheme>(m, "PVScheme")
      .def_readonly("masses", &PVScheme::masses)
      .def_readonly("coefficients", &PVScheme::coefficients)
      .def_readonly("averaged_cutoff", &PVScheme::averaged_cutoff);
  m.def("pv_scheme", &pv_scheme, py::arg("m0"), py::arg("m1"), py::arg("m2"));
  m.def("M_multiplier", &M_multiplier, py::arg("scheme"), py::arg("k"));
  m.def("uehling_limit_gap", &uehling_limit_gap, py::arg("scheme"), py::arg("k"));

  m.def("scf_gaussian", &solve_gaussian, py::arg("box_length"), py::arg("cutoff"),
        py::arg("mass"), py::arg("alpha"), py::arg("charge"), py::arg("width"),
        py::arg("q") = 0.0, py::arg("shape") = "sharp",
        "Solve the lattice SCF for a Gaussian external density and return the report.");

  m.def(
      "run_json",
      [](const std::string& config) {
        std::ostringstream err;
        const int code = run_json(config, err);
        return py::make_tuple(code, err.str());
      },
      py::arg("config"), "Run a CLI command from a JSON config; returns (exit_code, stderr).");
}
