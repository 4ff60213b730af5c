#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sbpsat/assembly.hpp"
#include "sbpsat/solver.hpp"

namespace sbpsat::experiments {

using linalg::Matrix;
using linalg::Vector;

// Weight function G(x), one entry per component.
struct FunctionalSpec {
  std::string name;
  std::function<Vector(double)> weight;
};

// J = G^T Hbar U with G_i = weight(x_i).
double functional(const FunctionalSpec& g, const Vector& U, const assembly::SemiDiscreteSystem& sys);
double functional(const Vector& G, const Vector& U, const Vector& Hbar);

// Composite Gauss-Legendre quadrature refined until two successive levels agree to tol.
double integrate_reference(const std::function<double(double)>& f, double a, double b, double tol = 1e-14);

// Reference J = int G^T u(x, t) dx.
double reference_functional(const FunctionalSpec& g, const assembly::Field& exact, double t, double a, double b);

struct PresetOptions {
  std::optional<double> eps;
  std::optional<double> a;
};

struct ProblemInstance {
  std::string preset;
  assembly::ProblemSpec spec;
  std::vector<FunctionalSpec> functionals;
  std::vector<std::string> component_names;
  bool steady = true;
  solver::TimeIntegratorConfig time;  // default for unsteady presets
  bool scalar = true;
  double a = 0.0, eps = 0.0;
  double alphaL = 0.0, betaL = 0.0, alphaR = 0.0, betaR = 0.0;  // scalar boundary coefficients
  bool dirichlet = false;
  penalties::NsParameters ns;
};

const std::vector<std::string>& preset_names();
ProblemInstance make_problem(const std::string& preset, const PresetOptions& opts = {});

struct CaseConfig {
  std::string preset;
  PresetOptions options;
  int interior_order = 6;
  operators::Variant variant = operators::Variant::narrow;
  penalties::OmegaMode omega;
  penalties::Flavor flavor = penalties::Flavor::theorem2;
  std::optional<solver::TimeIntegratorConfig> time;  // overrides the preset default
  bool spectrum = true;                              // compute rho, eta
  bool keep_solution = false;
};

struct ErrorReport {
  std::size_t N = 0;
  double h = 0.0;
  double omega = 0.0;
  double q = 0.0;
  double sol_error = 0.0;                // ||e||_Hbar
  std::vector<double> component_errors;  // per variable
  std::vector<double> func_errors;       // |J(U) - J(u)|
  std::vector<double> func_values;
  double rho = 0.0, eta = 0.0;
  assembly::DualityCertificate certificate;
  double runtime = 0.0;  // seconds
  Vector solution, grid;
};

// Penalties for the flavor and omega mode of cfg on ops.
penalties::ParabolicPenalties build_penalties(const ProblemInstance& prob, const CaseConfig& cfg,
                                              const operators::SbpOperatorSet& ops, double& omega_out);

operators::SbpOperatorSet build_operators(const ProblemInstance& prob, const CaseConfig& cfg, std::size_t N);

ErrorReport run_case(const CaseConfig& cfg, std::size_t N);

struct ConvergenceRow {
  ErrorReport report;
  std::optional<double> sol_order;
  std::vector<std::optional<double>> component_orders;
  std::vector<std::optional<double>> func_orders;
};

// Orders between consecutive N use log(e1/e2)/log(N2/N1).
std::vector<ConvergenceRow> convergence_study(const CaseConfig& cfg, const std::vector<std::size_t>& Ns,
                                              std::size_t threads = 0);

struct SweepRow {
  double omega = 0.0;
  ErrorReport report;
};

// Each omega enters as an explicit value.
std::vector<SweepRow> omega_sweep(const CaseConfig& cfg, const std::vector<double>& omegas, std::size_t N,
                                  std::size_t threads = 0);

std::optional<double> observed_order(double e1, double e2, std::size_t N1, std::size_t N2);

// SBPSAT_THREADS if set, otherwise hardware concurrency.
std::size_t default_threads();

// Runs f(i) for i in [0, count) on up to threads workers; results stay in index order.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& f);

}  // namespace sbpsat::experiments
