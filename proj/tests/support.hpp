#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "sbpsat/assembly.hpp"
#include "sbpsat/operators.hpp"
#include "sbpsat/penalties.hpp"

namespace sbpsat::testing {

using linalg::Matrix;
using linalg::Vector;

struct Scalar {
  double a = 0.0, eps = 1.0;
  double alphaL = 1.0, betaL = 0.0, alphaR = 1.0, betaR = 0.0;
};

// u_t + a u_x - eps u_xx = F with alpha u + beta u_x = g, manufactured from u(x, t).
inline assembly::ProblemSpec scalar_problem(const Scalar& s, std::function<double(double, double)> u,
                                            std::function<double(double, double)> u_t,
                                            std::function<double(double, double)> u_x,
                                            std::function<double(double, double)> u_xx) {
  assembly::ProblemSpec p;
  p.kind = assembly::ProblemKind::parabolic;
  p.n = 1;
  p.A = Matrix{{s.a}};
  p.E = Matrix{{s.eps}};
  p.bc.H_L = Matrix{{s.alphaL}};
  p.bc.G_L = Matrix{{s.betaL}};
  p.bc.K_L = Matrix{{s.betaL / s.eps}};
  p.bc.H_R = Matrix{{s.alphaR}};
  p.bc.G_R = Matrix{{s.betaR}};
  p.bc.K_R = Matrix{{s.betaR / s.eps}};
  p.bc.g_L = [=](double t) { return Vector{s.alphaL * u(0, t) + s.betaL * u_x(0, t)}; };
  p.bc.g_R = [=](double t) { return Vector{s.alphaR * u(1, t) + s.betaR * u_x(1, t)}; };
  p.forcing = [=](double x, double t) { return Vector{u_t(x, t) + s.a * u_x(x, t) - s.eps * u_xx(x, t)}; };
  p.exact = [=](double x, double t) { return Vector{u(x, t)}; };
  return p;
}

inline penalties::ParabolicPenalties scalar_theorem2(const Scalar& s, double omega, double q) {
  return penalties::scalar_penalties(s.a, s.eps, s.alphaL, s.betaL, s.alphaR, s.betaR, omega, q);
}

inline operators::SbpOperatorSet unit_interval(int order, operators::Variant v, std::size_t N) {
  return operators::build_second_derivative(order, v, N, 1.0 / static_cast<double>(N));
}

inline Matrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

inline double max_diff(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace sbpsat::testing
