#include "sbpsat/experiments.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace sbpsat::experiments {

using assembly::Field;
using penalties::Flavor;
using penalties::OmegaMode;

namespace {

constexpr std::size_t kGaussPoints = 16;

struct GaussRule {
  std::array<double, kGaussPoints> x{}, w{};
};

// Legendre roots by Newton iteration on the three-term recurrence.
const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    GaussRule r;
    const int n = static_cast<int>(kGaussPoints);
    for (int i = 0; i < n; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      r.x[i] = z;
      r.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
  }();
  return rule;
}

double composite_gauss(const std::function<double(double)>& f, double a, double b, std::size_t panels) {
  const auto& g = gauss_rule();
  const double w = (b - a) / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double c = a + (static_cast<double>(p) + 0.5) * w;
    double s = 0.0;
    for (std::size_t i = 0; i < kGaussPoints; ++i) s += g.w[i] * f(c + 0.5 * w * g.x[i]);
    sum += 0.5 * w * s;
  }
  return sum;
}

// Closed-form scalar solution with the derivatives needed for forcing and boundary data.
struct ScalarSolution {
  std::function<double(double, double)> u, u_t, u_x, u_xx;
};

Vector one(double v) { return Vector{v}; }

void set_scalar(ProblemInstance& p, const ScalarSolution& s) {
  const double a = p.a, eps = p.eps;
  auto& spec = p.spec;
  spec.kind = assembly::ProblemKind::parabolic;
  spec.n = 1;
  spec.A = Matrix{{a}};
  spec.E = Matrix{{eps}};
  spec.bc.H_L = Matrix{{p.alphaL}};
  spec.bc.G_L = Matrix{{p.betaL}};
  spec.bc.K_L = Matrix{{p.betaL / eps}};
  spec.bc.H_R = Matrix{{p.alphaR}};
  spec.bc.G_R = Matrix{{p.betaR}};
  spec.bc.K_R = Matrix{{p.betaR / eps}};
  const double xl = spec.x_left, xr = spec.x_right;
  const double aL = p.alphaL, bL = p.betaL, aR = p.alphaR, bR = p.betaR;
  spec.bc.g_L = [=](double t) { return one(aL * s.u(xl, t) + bL * s.u_x(xl, t)); };
  spec.bc.g_R = [=](double t) { return one(aR * s.u(xr, t) + bR * s.u_x(xr, t)); };
  spec.forcing = [=](double x, double t) { return one(s.u_t(x, t) + a * s.u_x(x, t) - eps * s.u_xx(x, t)); };
  spec.exact = [=](double x, double t) { return one(s.u(x, t)); };
  p.component_names = {"u"};
}

ScalarSolution cos30() {
  return {[](double x, double) { return std::cos(30 * x); }, [](double, double) { return 0.0; },
          [](double x, double) { return -30 * std::sin(30 * x); },
          [](double x, double) { return -900 * std::cos(30 * x); }};
}

FunctionalSpec scalar_weight(const std::string& name, std::function<double(double)> g) {
  return {name, [g = std::move(g)](double x) { return one(g(x)); }};
}

FunctionalSpec weight_cos30() {
  return scalar_weight("cos30x", [](double x) { return std::cos(30 * x); });
}
FunctionalSpec weight_one() {
  return scalar_weight("one", [](double) { return 1.0; });
}

void dirichlet(ProblemInstance& p) {
  p.dirichlet = true;
  p.alphaL = p.alphaR = 1.0;
  p.betaL = p.betaR = 0.0;
}

ProblemInstance heat_dirichlet_steady(const PresetOptions& o) {
  ProblemInstance p;
  p.eps = o.eps.value_or(1.0);
  p.a = o.a.value_or(0.0);
  dirichlet(p);
  set_scalar(p, cos30());
  p.functionals = {weight_cos30()};
  return p;
}

ProblemInstance heat_dirichlet(const PresetOptions& o) {
  ProblemInstance p;
  p.eps = o.eps.value_or(0.01);
  p.a = o.a.value_or(0.0);
  dirichlet(p);
  ScalarSolution s;
  s.u = [](double x, double t) { return std::cos(30 * x) + std::sin(20 * x) * std::cos(10 * t) + std::sin(35 * t); };
  s.u_t = [](double x, double t) { return -10 * std::sin(20 * x) * std::sin(10 * t) + 35 * std::cos(35 * t); };
  s.u_x = [](double x, double t) { return -30 * std::sin(30 * x) + 20 * std::cos(20 * x) * std::cos(10 * t); };
  s.u_xx = [](double x, double t) { return -900 * std::cos(30 * x) - 400 * std::sin(20 * x) * std::cos(10 * t); };
  set_scalar(p, s);
  p.functionals = {weight_one()};
  p.steady = false;
  p.time.scheme = solver::Scheme::rk4_classic;
  p.time.dt = 1e-4;
  p.time.t_end = 1.0;
  return p;
}

ProblemInstance heat_neumann(const PresetOptions& o) {
  ProblemInstance p;
  p.eps = o.eps.value_or(0.01);
  p.a = o.a.value_or(0.0);
  p.alphaL = p.alphaR = 0.0;
  p.betaL = p.betaR = 1.0;
  set_scalar(p, cos30());
  p.functionals = {weight_cos30()};
  p.steady = false;
  p.time.scheme = solver::Scheme::implicit_euler;
  p.time.dt = 1.0;
  p.time.t_end = 100.0;
  return p;
}

ProblemInstance advdiff_dirichlet_steady(const PresetOptions& o) {
  ProblemInstance p;
  p.eps = o.eps.value_or(0.1);
  p.a = o.a.value_or(1.0);
  dirichlet(p);
  set_scalar(p, cos30());
  p.functionals = {weight_cos30()};
  return p;
}

// u = c1 + c2 exp(a x / eps) with u(0) = 1, u(1) = 0, written to avoid overflow.
ProblemInstance advdiff_boundary_layer(const PresetOptions& o) {
  ProblemInstance p;
  p.eps = o.eps.value_or(0.005);
  p.a = o.a.value_or(1.0);
  if (p.a == 0.0) throw Error(ErrorKind::InvalidArgument, "advdiff_boundary_layer needs a != 0");
  dirichlet(p);
  const double k = p.a / p.eps;
  // u = (exp(k) - exp(k x)) / (exp(k) - 1), scaled by exp(-max(k, 0))
  const double sh = std::max(k, 0.0);
  const double top = std::exp(k - sh), bot = std::exp(k - sh) - std::exp(-sh);
  ScalarSolution s;
  s.u = [=](double x, double) { return (top - std::exp(k * x - sh)) / bot; };
  s.u_t = [](double, double) { return 0.0; };
  s.u_x = [=](double x, double) { return -k * std::exp(k * x - sh) / bot; };
  s.u_xx = [=](double x, double) { return -k * k * std::exp(k * x - sh) / bot; };
  set_scalar(p, s);
  p.spec.forcing = nullptr;
  p.functionals = {weight_one()};
  return p;
}

ProblemInstance advdiff_farfield(const PresetOptions& o) {
  ProblemInstance p;
  p.eps = o.eps.value_or(1e-4);
  p.a = o.a.value_or(1.0);
  const double aa = std::abs(p.a);
  p.alphaL = (aa + p.a) / 2;
  p.betaL = -p.eps;
  p.alphaR = (aa - p.a) / 2;
  p.betaR = p.eps;
  set_scalar(p, cos30());
  p.functionals = {weight_cos30()};
  return p;
}

ProblemInstance ns_wall_system(const PresetOptions& o) {
  ProblemInstance p;
  p.scalar = false;
  auto& ns = p.ns;
  ns.eps = o.eps.value_or(0.01);
  if (o.a) ns.a = *o.a;
  p.eps = ns.eps;
  const double ub = ns.ubar, a = ns.a, b = ns.b, e = ns.eps, phi = ns.phi, psi = ns.psi;
  auto& spec = p.spec;
  spec.kind = assembly::ProblemKind::parabolic;
  spec.n = 3;
  spec.A = Matrix{{ub, a, 0}, {a, ub, b}, {0, b, ub}};
  spec.E = Matrix{{0, 0, 0}, {0, e * phi, 0}, {0, 0, e * psi}};
  // wall: u = 0, T_x = 0
  spec.bc.H_L = Matrix{{0, 1, 0}, {0, 0, 0}};
  spec.bc.G_L = Matrix{{0, 0, 0}, {0, 0, 1}};
  spec.bc.K_L = Matrix{{0, 0, 0}, {0, 0, 1 / (e * psi)}};
  spec.bc.H_R = Matrix::identity(3);
  spec.bc.G_R = Matrix(3, 3);
  spec.bc.K_R = Matrix(3, 3);
  auto U = [](double x) { return Vector{std::cos(7 * x), std::sin(13 * x), std::cos(30 * x)}; };
  auto Ux = [](double x) { return Vector{-7 * std::sin(7 * x), 13 * std::cos(13 * x), -30 * std::sin(30 * x)}; };
  auto Uxx = [](double x) { return Vector{-49 * std::cos(7 * x), -169 * std::sin(13 * x), -900 * std::cos(30 * x)}; };
  const Matrix A = spec.A, E = spec.E, HL = spec.bc.H_L, GL = spec.bc.G_L;
  spec.exact = [=](double x, double) { return U(x); };
  spec.forcing = [=](double x, double) {
    Vector f = A * Ux(x);
    const Vector d = E * Uxx(x);
    for (std::size_t i = 0; i < 3; ++i) f[i] -= d[i];
    return f;
  };
  spec.bc.g_L = [=](double) {
    Vector g = HL * U(0.0);
    const Vector d = GL * Ux(0.0);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += d[i];
    return g;
  };
  spec.bc.g_R = [=](double) { return U(1.0); };
  p.component_names = {"rho", "u", "T"};
  for (std::size_t k = 0; k < 3; ++k) {
    Vector w(3, 0.0);
    w[k] = 1.0;
    p.functionals.push_back({"unit_" + p.component_names[k], [w](double) { return w; }});
  }
  return p;
}

using Factory = ProblemInstance (*)(const PresetOptions&);

const std::map<std::string, Factory>& factories() {
  static const std::map<std::string, Factory> m{
      {"heat_dirichlet_steady", heat_dirichlet_steady},
      {"heat_dirichlet", heat_dirichlet},
      {"heat_neumann", heat_neumann},
      {"advdiff_dirichlet_steady", advdiff_dirichlet_steady},
      {"advdiff_boundary_layer", advdiff_boundary_layer},
      {"advdiff_farfield", advdiff_farfield},
      {"ns_wall_system", ns_wall_system},
  };
  return m;
}

double h_weighted_norm(const Vector& e, const Vector& H, std::size_t n, std::size_t comp, bool all) {
  double s = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (all || i % n == comp) s += H[i] * e[i] * e[i];
  return std::sqrt(s);
}

// Spectra beyond this size are skipped.
constexpr std::size_t kSpectrumMaxSize = 1200;

}  // namespace

double functional(const Vector& G, const Vector& U, const Vector& Hbar) {
  if (G.size() != U.size() || U.size() != Hbar.size())
    throw Error(ErrorKind::ShapeMismatch, "functional weights, solution and norm must have equal length");
  double s = 0.0;
  for (std::size_t i = 0; i < U.size(); ++i) s += G[i] * Hbar[i] * U[i];
  return s;
}

double functional(const FunctionalSpec& g, const Vector& U, const assembly::SemiDiscreteSystem& sys) {
  Vector G(sys.size());
  for (std::size_t i = 0; i < sys.grid.size(); ++i) {
    const Vector w = g.weight(sys.grid[i]);
    if (w.size() != sys.n) throw Error(ErrorKind::ShapeMismatch, "functional weight has the wrong length");
    for (std::size_t r = 0; r < sys.n; ++r) G[i * sys.n + r] = w[r];
  }
  return functional(G, U, sys.Hbar);
}

double integrate_reference(const std::function<double(double)>& f, double a, double b, double tol) {
  double prev = composite_gauss(f, a, b, 8);
  for (std::size_t panels = 16; panels <= (1u << 16); panels *= 2) {
    const double cur = composite_gauss(f, a, b, panels);
    if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

double reference_functional(const FunctionalSpec& g, const Field& exact, double t, double a, double b) {
  return integrate_reference(
      [&](double x) {
        const Vector w = g.weight(x), u = exact(x, t);
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * u[i];
        return s;
      },
      a, b);
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, f] : factories()) v.push_back(k);
    return v;
  }();
  return names;
}

ProblemInstance make_problem(const std::string& preset, const PresetOptions& opts) {
  const auto it = factories().find(preset);
  if (it == factories().end()) {
    std::string allowed;
    for (const auto& n : preset_names()) allowed += (allowed.empty() ? "" : ", ") + n;
    throw Error(ErrorKind::InvalidArgument, "unknown preset '" + preset + "' (allowed: " + allowed + ")");
  }
  if (opts.eps && !(*opts.eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  ProblemInstance p = it->second(opts);
  p.preset = preset;
  p.spec.validate();
  return p;
}

operators::SbpOperatorSet build_operators(const ProblemInstance& prob, const CaseConfig& cfg, std::size_t N) {
  const double h = (prob.spec.x_right - prob.spec.x_left) / static_cast<double>(N);
  return operators::build_second_derivative(cfg.interior_order, cfg.variant, N, h);
}

penalties::ParabolicPenalties build_penalties(const ProblemInstance& prob, const CaseConfig& cfg,
                                              const operators::SbpOperatorSet& ops, double& omega_out) {
  const double q = ops.q;
  omega_out = 0.0;
  switch (cfg.flavor) {
    case Flavor::theorem2: {
      if (prob.scalar) {
        omega_out = penalties::resolve_omega(cfg.omega, prob.a, prob.eps, q);
        return penalties::scalar_penalties(prob.a, prob.eps, prob.alphaL, prob.betaL, prob.alphaR, prob.betaR,
                                           omega_out, q);
      }
      if (cfg.omega.kind != OmegaMode::eigen)
        throw Error(ErrorKind::InvalidArgument, "systems use the eigen factorization; omega_mode must be 'eigen'");
      const auto& s = prob.spec;
      const auto fbar =
          factorization::factor_symmetric(assembly::build_abar(s.A, s.E), assembly::kCertifyZeroTol);
      const auto rot = factorization::extract_rotation(s.bc.B_L(), s.bc.B_R(), fbar);
      return penalties::parabolic_theorem2(fbar, rot, s.bc.K_L, s.bc.K_R, q);
    }
    case Flavor::method1:
    case Flavor::method2:
      if (!prob.scalar || !prob.dirichlet)
        throw Error(ErrorKind::InvalidArgument, "method1/method2 penalties apply to scalar Dirichlet presets only");
      return cfg.flavor == Flavor::method1 ? penalties::method1_penalties(prob.a, prob.eps, q)
                                           : penalties::method2_penalties(prob.a, prob.eps);
    case Flavor::ns_alternative:
      if (prob.preset != "ns_wall_system")
        throw Error(ErrorKind::InvalidArgument, "ns_alternative penalties apply to ns_wall_system only");
      return penalties::ns_alternative_penalties(prob.ns);
    case Flavor::custom: break;
  }
  throw Error(ErrorKind::InvalidArgument, "penalty flavor 'custom' needs explicit matrices");
}

ErrorReport run_case(const CaseConfig& cfg, std::size_t N) {
  const auto t0 = std::chrono::steady_clock::now();
  const ProblemInstance prob = make_problem(cfg.preset, cfg.options);
  const auto ops = build_operators(prob, cfg, N);
  ErrorReport r;
  r.N = N;
  r.h = ops.h;
  r.q = ops.q;
  const auto pens = build_penalties(prob, cfg, ops, r.omega);
  const auto sys = assembly::assemble_parabolic(prob.spec, ops, pens);
  r.certificate = assembly::certify(prob.spec, ops, pens, cfg.spectrum && sys.size() <= kSpectrumMaxSize);
  if (cfg.spectrum && sys.size() <= kSpectrumMaxSize) {
    r.rho = r.certificate.rho;
    r.eta = r.certificate.eta;
  } else {
    r.rho = r.eta = std::numeric_limits<double>::quiet_NaN();
  }

  Vector U;
  double t_end = 0.0;
  if (prob.steady) {
    U = solver::solve_steady(sys);
  } else {
    const auto tc = cfg.time.value_or(prob.time);
    const Field init = prob.spec.initial ? prob.spec.initial : prob.spec.exact;
    U = solver::integrate(sys, tc, sys.sample(init, 0.0)).final_state;
    t_end = tc.t_end;
  }
  const Vector ex = sys.sample(prob.spec.exact, t_end);
  Vector e(U.size());
  for (std::size_t i = 0; i < U.size(); ++i) e[i] = U[i] - ex[i];
  r.sol_error = h_weighted_norm(e, sys.Hbar, sys.n, 0, true);
  for (std::size_t c = 0; c < sys.n; ++c) r.component_errors.push_back(h_weighted_norm(e, sys.Hbar, sys.n, c, false));
  for (const auto& g : prob.functionals) {
    const double J = functional(g, U, sys);
    const double ref = reference_functional(g, prob.spec.exact, t_end, prob.spec.x_left, prob.spec.x_right);
    r.func_values.push_back(J);
    r.func_errors.push_back(std::abs(J - ref));
  }
  if (cfg.keep_solution) {
    r.solution = U;
    r.grid = sys.grid;
  }
  r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::optional<double> observed_order(double e1, double e2, std::size_t N1, std::size_t N2) {
  if (!(e1 > 0.0) || !(e2 > 0.0) || N1 == N2) return std::nullopt;
  return std::log(e1 / e2) / std::log(static_cast<double>(N2) / static_cast<double>(N1));
}

std::size_t default_threads() {
  if (const char* env = std::getenv("SBPSAT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& f) {
  if (threads == 0) threads = default_threads();
  threads = std::min(threads, count);
  std::vector<std::exception_ptr> errors(count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::mutex mu;
    std::size_t next = 0;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i;
          {
            std::lock_guard<std::mutex> lock(mu);
            if (next >= count) return;
            i = next++;
          }
          try {
            f(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<ConvergenceRow> convergence_study(const CaseConfig& cfg, const std::vector<std::size_t>& Ns,
                                              std::size_t threads) {
  if (Ns.empty()) throw Error(ErrorKind::InvalidArgument, "N list is empty");
  for (std::size_t i = 1; i < Ns.size(); ++i)
    if (Ns[i] <= Ns[i - 1]) throw Error(ErrorKind::InvalidArgument, "N list must be strictly ascending");
  std::vector<ConvergenceRow> rows(Ns.size());
  parallel_for(Ns.size(), threads, [&](std::size_t i) { rows[i].report = run_case(cfg, Ns[i]); });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& r = rows[i];
    const std::size_t nf = r.report.func_errors.size(), nc = r.report.component_errors.size();
    r.func_orders.assign(nf, std::nullopt);
    r.component_orders.assign(nc, std::nullopt);
    if (i == 0) continue;
    const auto& p = rows[i - 1].report;
    r.sol_order = observed_order(p.sol_error, r.report.sol_error, p.N, r.report.N);
    for (std::size_t k = 0; k < nf; ++k)
      r.func_orders[k] = observed_order(p.func_errors[k], r.report.func_errors[k], p.N, r.report.N);
    for (std::size_t k = 0; k < nc; ++k)
      r.component_orders[k] = observed_order(p.component_errors[k], r.report.component_errors[k], p.N, r.report.N);
  }
  return rows;
}

std::vector<SweepRow> omega_sweep(const CaseConfig& cfg, const std::vector<double>& omegas, std::size_t N,
                                  std::size_t threads) {
  std::vector<SweepRow> rows(omegas.size());
  parallel_for(omegas.size(), threads, [&](std::size_t i) {
    CaseConfig c = cfg;
    c.omega = OmegaMode{OmegaMode::value, omegas[i]};
    rows[i].omega = omegas[i];
    rows[i].report = run_case(c, N);
  });
  return rows;
}

}  // namespace sbpsat::experiments
