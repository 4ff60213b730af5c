#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sbpsat/experiments.hpp"
#include "sbpsat/operators.hpp"

using namespace sbpsat;
using experiments::CaseConfig;
using operators::Variant;
using penalties::Flavor;
using penalties::OmegaMode;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: ";
      if (pass) detail << what << "; ";
      pass = false;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool within_rel(double v, double ref, double rel) { return std::abs(v - ref) <= rel * std::abs(ref); }

operators::SbpOperatorSet unit(int order, Variant v, std::size_t N) {
  return operators::build_second_derivative(order, v, N, 1.0 / static_cast<double>(N));
}

const int kCertOrders[] = {2, 4, 6};
const Variant kVariants[] = {Variant::wide, Variant::narrow};

std::string tag(const std::string& preset, int order, Variant v) {
  return preset + " order " + std::to_string(order) + " " + operators::to_string(v);
}

// Certificate for a preset with the given flavor at N, built the same way as a run.
assembly::DualityCertificate certificate(const std::string& preset, int order, Variant v, Flavor f, std::size_t N,
                                         bool spectrum) {
  CaseConfig c;
  c.preset = preset;
  c.interior_order = order;
  c.variant = v;
  c.flavor = f;
  const auto prob = experiments::make_problem(preset);
  const auto ops = experiments::build_operators(prob, c, N);
  double omega = 0.0;
  const auto pens = experiments::build_penalties(prob, c, ops, omega);
  return assembly::certify(prob.spec, ops, pens, spectrum);
}

void criterion1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const double exact_wide[] = {2.0, 48.0 / 17, 43200.0 / 13649, 5080320.0 / 1498139};
  const int wide_orders[] = {2, 4, 6, 8};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto ops = unit(wide_orders[i], Variant::wide, 32);
    const double rel = std::abs(ops.q * ops.h - exact_wide[i]) / exact_wide[i];
    worst = std::max(worst, rel);
    o.require(rel <= 1e-12, "wide order " + std::to_string(wide_orders[i]));
  }
  const double n20 = unit(2, Variant::narrow_20, 32).q / 32, n21 = unit(2, Variant::narrow, 32).q / 32;
  o.require(within_rel(n20, 1.0, 1e-12), "narrow (2,0)");
  o.require(within_rel(n21, 2.5, 1e-12), "narrow (2,1)");
  const double q42 = unit(4, Variant::narrow, 8).q / 8, q63 = unit(6, Variant::narrow, 12).q / 12;
  o.require(within_rel(q42, 3.986391480987749, 1e-12), "narrow (4,2) N=8");
  o.require(within_rel(q63, 5.322804652661742, 1e-10), "narrow (6,3) N=12");
  const double q84 = unit(8, Variant::narrow, 16).q / 16;
  const double t = seconds_since(t0);
  o.require(t < 1.0, "runtime");
  o.detail << "max wide rel diff " << worst << ", (4,2) " << q42 << ", (6,3) " << q63 << ", (8,4) informational "
           << q84 << " vs 633.693; " << t << " s";
}

void criterion2(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0, prev = INFINITY;
  for (const auto& r : operators::corner_q_reference()) {
    const auto ops = unit(4, Variant::narrow, r.N);
    const auto q = operators::compute_q(ops);
    const double d = std::abs(q.q0 * ops.h - r.q0h);
    worst = std::max(worst, d);
    o.require(d <= 1e-12, "q0 h at N=" + std::to_string(r.N));
    const double qc = std::abs(q.qc) * ops.h;
    o.require(qc < prev, "qc h not decreasing at N=" + std::to_string(r.N));
    prev = qc;
  }
  const double t = seconds_since(t0);
  o.require(t < 1.0, "runtime");
  o.detail << "max |q0 h - ref| " << worst << ", qc h decreasing; " << t << " s";
}

void criterion3(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  struct Column {
    const char* name;
    OmegaMode::Kind mode;
    double e[3], E[3], eo[2], Eo[2];
  };
  const Column cols[] = {
      {"omega=q eps", OmegaMode::q_eps, {0.029297, 0.000790, 0.000017}, {0.00297573, 0.00002315, 0.00000039},
       {5.2121, 5.5131}, {7.0064, 5.9055}},
      {"omega=2 eps", OmegaMode::eigen, {0.480872, 0.048501, 0.003307}, {0.00258741, 0.00002704, 0.00000038},
       {3.3096, 3.8743}, {6.5804, 6.1559}},
  };
  for (const auto& col : cols) {
    CaseConfig c;
    c.preset = "heat_dirichlet";
    c.interior_order = 6;
    c.variant = Variant::narrow;
    c.omega.kind = col.mode;
    c.spectrum = false;
    const auto rows = experiments::convergence_study(c, {32, 64, 128});
    o.detail << col.name << ":";
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& r = rows[i].report;
      o.require(within_rel(r.sol_error, col.e[i], 0.02), std::string(col.name) + " e N=" + std::to_string(r.N));
      o.require(within_rel(r.func_errors[0], col.E[i], 0.05), std::string(col.name) + " E N=" + std::to_string(r.N));
      o.detail << " N=" << r.N << " e=" << r.sol_error << " E=" << r.func_errors[0];
      if (i > 0) {
        const double so = *rows[i].sol_order, fo = *rows[i].func_orders[0];
        o.require(std::abs(so - col.eo[i - 1]) <= 0.2, std::string(col.name) + " e order");
        o.require(std::abs(fo - col.Eo[i - 1]) <= 0.2, std::string(col.name) + " E order");
        o.detail << " (" << so << ", " << fo << ")";
      }
    }
    o.detail << "; ";
  }
  o.detail << seconds_since(t0) << " s";
}

void criterion4(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_t2 = 0.0, least_bad = INFINITY;
  std::size_t count = 0;
  for (const auto& preset : experiments::preset_names())
    for (int order : kCertOrders)
      for (Variant v : kVariants) {
        const auto c = certificate(preset, order, v, Flavor::theorem2, 32, false);
        const double r = std::max(c.duality_left, c.duality_right);
        worst_t2 = std::max(worst_t2, r);
        o.require(r <= assembly::kDualityTol && c.dual_consistent, tag(preset, order, v) + " theorem2");
        ++count;
      }
  // hyperbolic 2x2 system: discrete adjoint against the dual scheme
  assembly::ProblemSpec h;
  h.kind = assembly::ProblemKind::hyperbolic;
  h.n = 2;
  h.A = linalg::Matrix{{1.0, 0.5}, {0.5, -1.0}};
  h.B_L = linalg::Matrix{{1.0, 0.3}};
  h.B_R = linalg::Matrix{{0.2, 1.0}};
  h.bc.g_L = h.bc.g_R = [](double) { return linalg::Vector{0.0}; };
  h.forcing = [](double, double) { return linalg::Vector{0.0, 0.0}; };
  const auto f = factorization::factor_symmetric(h.A);
  const auto rot = factorization::extract_rotation(h.B_L, h.B_R, f);
  const auto hp = penalties::hyperbolic_dual_penalties(f, rot, penalties::hyperbolic_theorem1(f, rot));
  double worst_adj = 0.0;
  for (int order : kCertOrders) {
    const auto ops = operators::build_first_derivative(order, 32, 1.0 / 32);
    const auto c = assembly::certify(h, ops, f, rot, hp, false);
    worst_adj = std::max(worst_adj, c.adjoint_residual);
    o.require(c.adjoint_residual <= assembly::kAdjointTol, "hyperbolic adjoint order " + std::to_string(order));
    o.require(std::max(c.duality_left, c.duality_right) <= assembly::kDualityTol, "hyperbolic duality");
  }
  // comparison penalties must be visibly inconsistent
  struct Bad {
    const char* preset;
    Flavor flavor;
  };
  const Bad bad[] = {{"heat_dirichlet_steady", Flavor::method1}, {"heat_dirichlet_steady", Flavor::method2},
                     {"heat_dirichlet", Flavor::method1},        {"heat_dirichlet", Flavor::method2},
                     {"advdiff_dirichlet_steady", Flavor::method1}, {"advdiff_dirichlet_steady", Flavor::method2},
                     {"ns_wall_system", Flavor::ns_alternative}};
  for (const auto& b : bad)
    for (int order : kCertOrders)
      for (Variant v : kVariants) {
        const auto c = certificate(b.preset, order, v, b.flavor, 32, false);
        const double r = std::max(c.duality_left, c.duality_right);
        least_bad = std::min(least_bad, r);
        o.require(r > 1e-3, tag(b.preset, order, v) + " " + penalties::to_string(b.flavor) + " residual too small");
      }
  o.detail << count << " theorem2 configs, max residual " << worst_t2 << "; hyperbolic adjoint max " << worst_adj
           << "; smallest comparison residual " << least_bad << "; " << seconds_since(t0) << " s";
}

void criterion5(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = INFINITY, worst_growth = 0.0;
  std::size_t count = 0;
  for (const auto& preset : experiments::preset_names())
    for (int order : kCertOrders)
      for (Variant v : kVariants) {
        const auto c = certificate(preset, order, v, Flavor::theorem2, 32, true);
        worst = std::min(worst, c.eta / c.rho);
        o.require(c.eta >= -1e-10 * c.rho, tag(preset, order, v) + " spectrum");

        // homogeneous data under implicit Euler
        CaseConfig cc;
        cc.preset = preset;
        cc.interior_order = order;
        cc.variant = v;
        auto prob = experiments::make_problem(preset);
        const std::size_t n = prob.spec.n;
        const auto ops = experiments::build_operators(prob, cc, 32);
        double omega = 0.0;
        const auto pens = experiments::build_penalties(prob, cc, ops, omega);
        prob.spec.forcing = [n](double, double) { return linalg::Vector(n, 0.0); };
        const std::size_t mL = prob.spec.bc.H_L.rows(), mR = prob.spec.bc.H_R.rows();
        prob.spec.bc.g_L = [mL](double) { return linalg::Vector(mL, 0.0); };
        prob.spec.bc.g_R = [mR](double) { return linalg::Vector(mR, 0.0); };
        const auto sys = assembly::assemble_parabolic(prob.spec, ops, pens);
        const auto init = prob.spec.initial ? prob.spec.initial : prob.spec.exact;
        const auto U0 = sys.sample(init, 0.0);
        double prev = solver::h_norm(U0, sys.Hbar);
        bool monotone = true;
        solver::TimeIntegratorConfig tc;
        tc.scheme = solver::Scheme::implicit_euler;
        tc.dt = 0.01;
        tc.t_end = 1.0;
        tc.observer = [&](double, const linalg::Vector& U) {
          const double e = solver::h_norm(U, sys.Hbar);
          worst_growth = std::max(worst_growth, e / prev - 1.0);
          monotone = monotone && e <= prev * (1.0 + 1e-12);
          prev = e;
        };
        const auto tr = solver::integrate(sys, tc, U0);
        o.require(tr.steps == 100 && monotone, tag(preset, order, v) + " energy growth");
        ++count;
      }
  o.detail << count << " configs at N=32, min eta/rho " << worst << ", max relative step growth " << worst_growth
           << "; " << seconds_since(t0) << " s";
}

void criterion6(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int order : {6, 8})
    for (Variant v : kVariants)
      for (auto mode : {OmegaMode::eigen, OmegaMode::q_eps}) {
        CaseConfig c;
        c.preset = "heat_dirichlet_steady";
        c.interior_order = order;
        c.variant = v;
        c.omega.kind = mode;
        c.spectrum = false;
        const auto rows = experiments::convergence_study(c, {32, 64, 128, 256});
        const double fo = *rows.back().func_orders[0], so = *rows.back().sol_order;
        const std::string name = tag("", order, v) + " " + penalties::to_string(c.omega);
        o.require(fo >= (order == 6 ? 5.5 : 7.5), name + " functional order");
        o.require(so <= fo - 0.5, name + " solution order not lower");
        if (order == 6 && v == Variant::narrow) o.require(so <= 5.7, name + " solution order above 5.7");
        o.detail << name << ": J " << fo << ", u " << so << ";";
      }
  const double t = seconds_since(t0);
  o.require(t < 60.0, "runtime");
  o.detail << " " << t << " s";
}

void criterion7(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  CaseConfig c;
  c.preset = "advdiff_boundary_layer";
  c.interior_order = 8;
  c.variant = Variant::wide;
  c.omega.kind = OmegaMode::abs_a;
  c.keep_solution = true;
  const auto r = experiments::run_case(c, 16);
  std::size_t changes = 0;
  double last = 0.0, worst = 0.0;
  for (std::size_t i = 1; i < r.solution.size(); ++i) {
    const double d = r.solution[i] - r.solution[i - 1];
    if (d != 0.0) {
      if (last != 0.0 && (d > 0) != (last > 0)) {
        ++changes;
        worst = std::max(worst, std::min(std::abs(d), std::abs(last)));
      }
      last = d;
    }
  }
  o.require(changes == 0, "sign changes in consecutive differences");
  o.require(r.func_errors[0] <= 1e-10, "functional error");
  const double t = seconds_since(t0);
  o.require(t < 1.0, "runtime");
  o.detail << changes << " sign changes (largest reversal " << worst << "), |E| = " << r.func_errors[0] << "; " << t
           << " s";
}

void criterion8(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  CaseConfig c;
  c.preset = "ns_wall_system";
  c.interior_order = 6;
  c.variant = Variant::narrow;
  c.spectrum = false;
  const std::vector<std::size_t> Ns{64, 128, 256, 512};
  const auto good = experiments::convergence_study(c, Ns);
  c.flavor = Flavor::ns_alternative;
  const auto alt = experiments::convergence_study(c, Ns);
  const auto& g = good.back();
  const auto& a = alt.back();
  const double sol_ref[] = {4.0, 4.5, 4.5};
  const char* names[] = {"rho", "u", "T"};
  o.detail << "eps=0.01:";
  for (std::size_t k = 0; k < 3; ++k) {
    const double fo = *g.func_orders[k], ao = *a.func_orders[k], so = *g.component_orders[k];
    o.require(fo >= 5.7, std::string("consistent functional order ") + names[k]);
    o.require(ao <= 5.3, std::string("alternative functional order ") + names[k]);
    o.require(std::abs(so - sol_ref[k]) <= 0.3, std::string("solution order ") + names[k]);
    o.detail << " " << names[k] << " J " << fo << " vs " << ao << ", sol " << so << ";";
  }
  // small diffusion: consistent functional errors below the inconsistent ones
  c.options.eps = 1e-6;
  c.flavor = Flavor::theorem2;
  const auto rg = experiments::run_case(c, 256);
  c.flavor = Flavor::ns_alternative;
  const auto ra = experiments::run_case(c, 256);
  o.detail << " eps=1e-6 N=256:";
  for (std::size_t k = 0; k < 3; ++k) {
    o.require(rg.func_errors[k] < ra.func_errors[k], std::string("eps=1e-6 functional ") + names[k]);
    o.detail << " " << rg.func_errors[k] << " < " << ra.func_errors[k];
  }
  o.detail << "; " << seconds_since(t0) << " s";
}

void criterion9(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  struct Shipped {
    int order;
    Variant v;
  };
  const Shipped all[] = {{2, Variant::wide},   {4, Variant::wide},   {6, Variant::wide},   {8, Variant::wide},
                         {2, Variant::narrow}, {4, Variant::narrow}, {6, Variant::narrow}, {8, Variant::narrow},
                         {2, Variant::narrow_20}};
  std::size_t count = 0;
  for (const auto& s : all)
    for (std::size_t N : {operators::min_grid(s.order, s.v), std::size_t{32}, std::size_t{100}}) {
      const auto rep = operators::verify_sbp(unit(s.order, s.v, N));
      for (const char* name : {"Q_plus_QT", "A_S_symmetric", "H_quadrature"}) {
        const auto* c = rep.find(name);
        o.require(c != nullptr && c->passed, tag("", s.order, s.v) + " N=" + std::to_string(N) + " " + name);
      }
      ++count;
    }
  const double t = seconds_since(t0);
  o.require(t < 1.0, "runtime");
  o.detail << count << " operator sets; " << t << " s";
}

struct Criterion {
  const char* title;
  void (*run)(Outcome&);
};

const Criterion kCriteria[] = {
    {"q-table reproduction", criterion1},     {"corner q table", criterion2},
    {"heat equation error table", criterion3}, {"dual-consistency certificates", criterion4},
    {"stability suite", criterion5},          {"superconvergence", criterion6},
    {"boundary-layer monotonicity", criterion7}, {"Navier-Stokes system", criterion8},
    {"SBP identity suite", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > 9) {
      std::fprintf(stderr, "usage: %s [criterion 1-9 ...]\n", argv[0]);
      return 2;
    }
    which.push_back(k);
  }
  if (which.empty())
    for (int k = 1; k <= 9; ++k) which.push_back(k);
  int failed = 0;
  for (int k : which) {
    Outcome o;
    try {
      kCriteria[k - 1].run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::printf("criterion %d %-30s %s  %s\n", k, kCriteria[k - 1].title, o.pass ? "PASS" : "FAIL",
                o.detail.str().c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
