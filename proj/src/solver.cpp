#include "sbpsat/solver.hpp"

#include <cmath>

namespace sbpsat::solver {

using linalg::LU;
using linalg::Matrix;

Scheme parse_scheme(const std::string& s) {
  if (s == "rk4_classic" || s == "rk4") return Scheme::rk4_classic;
  if (s == "implicit_euler") return Scheme::implicit_euler;
  throw Error(ErrorKind::InvalidArgument, "unknown time scheme '" + s + "' (allowed: rk4_classic, implicit_euler)");
}

std::string to_string(Scheme s) { return s == Scheme::rk4_classic ? "rk4_classic" : "implicit_euler"; }

void TimeIntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  if (!(t_end >= dt)) throw Error(ErrorKind::InvalidArgument, "t_end must be at least dt");
}

double h_norm(const Vector& u, const Vector& hbar) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += hbar[i] * u[i] * u[i];
  return std::sqrt(s);
}

Vector solve_steady(const assembly::SemiDiscreteSystem& sys) { return LU(sys.L).solve(sys.rhs(0.0)); }

namespace {

void check_growth(const Vector& u, double limit, double t) {
  const double n = linalg::norm2(u);
  if (!std::isfinite(n) || n > limit)
    throw Error(ErrorKind::BlowUp, "solution norm exceeded 1e12 times the initial norm at t = " + std::to_string(t));
}

}  // namespace

Trajectory integrate(const assembly::SemiDiscreteSystem& sys, const TimeIntegratorConfig& cfg, const Vector& U0) {
  cfg.validate();
  if (U0.size() != sys.size()) throw Error(ErrorKind::ShapeMismatch, "initial state has the wrong size");
  const auto steps = static_cast<std::size_t>(std::llround(std::ceil(cfg.t_end / cfg.dt - 1e-9)));
  const double dt = cfg.t_end / static_cast<double>(steps);
  const double limit = 1e12 * std::max(linalg::norm2(U0), 1.0);
  const Matrix& L = sys.L;

  Trajectory tr;
  tr.times.reserve(steps + 1);
  tr.times.push_back(0.0);
  if (cfg.keep_states) tr.states.push_back(U0);
  Vector u = U0;

  auto record = [&](std::size_t k) {
    const double t = static_cast<double>(k) * dt;
    tr.times.push_back(t);
    if (cfg.keep_states) tr.states.push_back(u);
    if (cfg.observer) cfg.observer(t, u);
    check_growth(u, limit, t);
  };

  if (cfg.scheme == Scheme::rk4_classic) {
    auto f = [&](double t, const Vector& v) {
      Vector r = sys.rhs(t);
      const Vector lv = L * v;
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= lv[i];
      return r;
    };
    Vector tmp(u.size());
    for (std::size_t k = 0; k < steps; ++k) {
      const double t = static_cast<double>(k) * dt;
      const Vector k1 = f(t, u);
      for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
      const Vector k2 = f(t + 0.5 * dt, tmp);
      for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
      const Vector k3 = f(t + 0.5 * dt, tmp);
      for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + dt * k3[i];
      const Vector k4 = f(t + dt, tmp);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      record(k + 1);
    }
  } else {
    Matrix m = L * dt;
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += 1.0;
    const LU lu(m);
    for (std::size_t k = 0; k < steps; ++k) {
      const double t1 = static_cast<double>(k + 1) * dt;
      Vector b = sys.rhs(t1);
      for (std::size_t i = 0; i < b.size(); ++i) b[i] = u[i] + dt * b[i];
      u = lu.solve(b);
      record(k + 1);
    }
  }
  tr.final_state = u;
  tr.final_time = cfg.t_end;
  tr.steps = steps;
  return tr;
}

}  // namespace sbpsat::solver
