#pragma once

#include <functional>
#include <string>

#include "sbpsat/assembly.hpp"

namespace sbpsat::solver {

using linalg::Vector;

enum class Scheme { rk4_classic, implicit_euler };

Scheme parse_scheme(const std::string& s);
std::string to_string(Scheme s);

struct TimeIntegratorConfig {
  Scheme scheme = Scheme::rk4_classic;
  double dt = 1e-4;
  double t_end = 1.0;
  bool keep_states = false;
  // Called after every step with (t, U).
  std::function<void(double, const Vector&)> observer;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;  // filled when keep_states is set
  Vector final_state;
  double final_time = 0.0;
  std::size_t steps = 0;
};

// Solves L U = rhs(0).
Vector solve_steady(const assembly::SemiDiscreteSystem& sys);

// U' = -L U + rhs(t).
Trajectory integrate(const assembly::SemiDiscreteSystem& sys, const TimeIntegratorConfig& cfg, const Vector& U0);

// sqrt(U^T Hbar U)
double h_norm(const Vector& u, const Vector& hbar);

}  // namespace sbpsat::solver
