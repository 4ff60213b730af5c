#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sbpsat/experiments.hpp"
#include "sbpsat/operators.hpp"

namespace py = pybind11;
using namespace sbpsat;

namespace {

py::array_t<double> to_numpy(const linalg::Matrix& m) {
  py::array_t<double> a({m.rows(), m.cols()});
  auto r = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return a;
}

py::array_t<double> to_numpy(const linalg::Vector& v) {
  py::array_t<double> a(v.size());
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

py::dict operator_dict(const operators::SbpOperatorSet& ops) {
  py::dict d;
  d["interior_order"] = ops.order.interior_order;
  d["variant"] = operators::to_string(ops.variant);
  d["N"] = ops.N;
  d["h"] = ops.h;
  d["H"] = to_numpy(ops.H);
  d["Q"] = to_numpy(ops.Q);
  d["D1"] = to_numpy(ops.D1);
  if (!ops.D2.empty()) {
    d["D2"] = to_numpy(ops.D2);
    d["S"] = to_numpy(ops.S);
    d["A_S"] = to_numpy(ops.A_S);
  }
  d["q0"] = ops.q0;
  d["qN"] = ops.qN;
  d["qc"] = ops.qc;
  d["q"] = ops.q;
  return d;
}

py::dict certificate_dict(const assembly::DualityCertificate& c) {
  py::dict d;
  d["scheme"] = c.scheme;
  d["duality_left"] = c.duality_left;
  d["duality_right"] = c.duality_right;
  d["adjoint_residual"] = c.adjoint_residual;
  d["rho"] = c.rho;
  d["eta"] = c.eta;
  d["dual_consistent"] = c.dual_consistent;
  d["stable"] = c.stable;
  d["verdict"] = c.verdict;
  return d;
}

py::dict report_dict(const experiments::ErrorReport& r) {
  py::dict d;
  d["N"] = r.N;
  d["h"] = r.h;
  d["omega"] = r.omega;
  d["q"] = r.q;
  d["sol_error"] = r.sol_error;
  d["component_errors"] = r.component_errors;
  d["func_errors"] = r.func_errors;
  d["func_values"] = r.func_values;
  d["rho"] = r.rho;
  d["eta"] = r.eta;
  d["certificate"] = certificate_dict(r.certificate);
  d["runtime"] = r.runtime;
  if (!r.solution.empty()) {
    d["solution"] = to_numpy(r.solution);
    d["grid"] = to_numpy(r.grid);
  }
  return d;
}

experiments::CaseConfig case_config(const std::string& preset, int order, const std::string& variant,
                                    const std::string& omega_mode, const std::string& flavor,
                                    std::optional<double> eps, std::optional<double> a, bool spectrum) {
  experiments::CaseConfig c;
  c.preset = preset;
  c.options.eps = eps;
  c.options.a = a;
  c.interior_order = order;
  c.variant = operators::parse_variant(variant);
  c.omega = penalties::parse_omega_mode(omega_mode);
  c.flavor = penalties::parse_flavor(flavor);
  c.spectrum = spectrum;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "SBP-SAT finite difference operators, dual-consistent penalties and convergence studies";

  static py::exception<Error> sbpsat_error(m, "SbpsatError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(sbpsat_error, e.what());
    }
  });

  m.def(
      "build_operators",
      [](int order, const std::string& variant, std::size_t N, double h) {
        const double step = h > 0 ? h : 1.0 / static_cast<double>(N);
        return operator_dict(operators::build_second_derivative(order, operators::parse_variant(variant), N, step));
      },
      py::arg("order"), py::arg("variant") = "wide", py::arg("N"), py::arg("h") = 0.0,
      "SBP first and second derivative operators on N intervals (h defaults to 1/N).");

  m.def(
      "verify_sbp",
      [](int order, const std::string& variant, std::size_t N) {
        const auto rep = operators::verify_sbp(operators::build_second_derivative(
            order, operators::parse_variant(variant), N, 1.0 / static_cast<double>(N)));
        py::dict checks;
        for (const auto& c : rep.checks) checks[py::str(c.name)] = py::make_tuple(c.residual, c.tolerance, c.passed);
        return py::make_tuple(rep.passed(), checks);
      },
      py::arg("order"), py::arg("variant") = "wide", py::arg("N"),
      "Returns (passed, {check: (residual, tolerance, passed)}).");

  m.def(
      "scalar_penalties",
      [](double a, double eps, double alphaL, double betaL, double alphaR, double betaR, double omega, double q) {
        const auto p = penalties::scalar_penalties(a, eps, alphaL, betaL, alphaR, betaR, omega, q);
        py::dict d;
        d["mu0"] = p.mu0(0, 0);
        d["nu0"] = p.nu0(0, 0);
        d["muN"] = p.muN(0, 0);
        d["nuN"] = p.nuN(0, 0);
        return d;
      },
      py::arg("a"), py::arg("eps"), py::arg("alphaL"), py::arg("betaL"), py::arg("alphaR"), py::arg("betaR"),
      py::arg("omega"), py::arg("q"), "Dual-consistent penalties for u_t + a u_x = eps u_xx; omega may be inf.");

  m.def("preset_names", &experiments::preset_names);

  m.def(
      "run_case",
      [](const std::string& preset, std::size_t N, int order, const std::string& variant,
         const std::string& omega_mode, const std::string& flavor, std::optional<double> eps,
         std::optional<double> a, bool spectrum, bool keep_solution) {
        auto c = case_config(preset, order, variant, omega_mode, flavor, eps, a, spectrum);
        c.keep_solution = keep_solution;
        experiments::ErrorReport r;
        {
          py::gil_scoped_release release;
          r = experiments::run_case(c, N);
        }
        return report_dict(r);
      },
      py::arg("preset"), py::arg("N"), py::arg("order") = 6, py::arg("variant") = "narrow",
      py::arg("omega_mode") = "eigen", py::arg("flavor") = "theorem2", py::arg("eps") = py::none(),
      py::arg("a") = py::none(), py::arg("spectrum") = true, py::arg("keep_solution") = false);

  m.def(
      "convergence_study",
      [](const std::string& preset, const std::vector<std::size_t>& Ns, int order, const std::string& variant,
         const std::string& omega_mode, const std::string& flavor, std::optional<double> eps,
         std::optional<double> a, bool spectrum, std::size_t threads) {
        const auto c = case_config(preset, order, variant, omega_mode, flavor, eps, a, spectrum);
        std::vector<experiments::ConvergenceRow> rows;
        {
          py::gil_scoped_release release;
          rows = experiments::convergence_study(c, Ns, threads);
        }
        py::list out;
        for (const auto& row : rows) {
          py::dict d = report_dict(row.report);
          d["sol_order"] = row.sol_order;
          d["component_orders"] = row.component_orders;
          d["func_orders"] = row.func_orders;
          out.append(d);
        }
        return out;
      },
      py::arg("preset"), py::arg("Ns"), py::arg("order") = 6, py::arg("variant") = "narrow",
      py::arg("omega_mode") = "eigen", py::arg("flavor") = "theorem2", py::arg("eps") = py::none(),
      py::arg("a") = py::none(), py::arg("spectrum") = false, py::arg("threads") = 0);

  m.def(
      "omega_sweep",
      [](const std::string& preset, const std::vector<double>& omegas, std::size_t N, int order,
         const std::string& variant, std::optional<double> eps, std::optional<double> a, std::size_t threads) {
        const auto c = case_config(preset, order, variant, "eigen", "theorem2", eps, a, true);
        std::vector<experiments::SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = experiments::omega_sweep(c, omegas, N, threads);
        }
        py::list out;
        for (const auto& row : rows) out.append(report_dict(row.report));
        return out;
      },
      py::arg("preset"), py::arg("omegas"), py::arg("N"), py::arg("order") = 6, py::arg("variant") = "narrow",
      py::arg("eps") = py::none(), py::arg("a") = py::none(), py::arg("threads") = 0);

  m.attr("__version__") = "0.1.0";
}
