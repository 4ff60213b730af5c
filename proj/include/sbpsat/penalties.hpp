#pragma once

#include <functional>
#include <limits>
#include <string>

#include "sbpsat/factorization.hpp"

namespace sbpsat::penalties {

using factorization::BoundaryRotation;
using factorization::SignedFactorization;
using linalg::Matrix;
using linalg::Vector;

struct HyperbolicPenalties {
  Matrix Sigma0, SigmaN;            // n x m+, n x m-
  Matrix Pi0, Gamma0, PiN, GammaN;  // ansatz blocks
  Matrix Sigma0_dual, SigmaN_dual;  // n x m-, n x m+
  Matrix Pi0_dual, Gamma0_dual, PiN_dual, GammaN_dual;
};

// Sigma_0 = (Z+ Pi_0 + Z- Gamma_0) P_L^{-1}, Sigma_N = (Z+ Gamma_N + Z- Pi_N) P_R^{-1} with Pi fixed by duality.
HyperbolicPenalties hyperbolic_penalties(const SignedFactorization& f, const BoundaryRotation& rot,
                                         const Matrix& Gamma0, const Matrix& GammaN);

// Gamma = 0 member; throws NotWellPosed if the continuous problem is not.
HyperbolicPenalties hyperbolic_theorem1(const SignedFactorization& f, const BoundaryRotation& rot);

// Fills the dual blocks of primal; throws DualityViolated if Pi does not follow from Gamma.
HyperbolicPenalties hyperbolic_dual_penalties(const SignedFactorization& f, const BoundaryRotation& rot,
                                              HyperbolicPenalties primal);

struct HyperbolicDualityResiduals {
  double left = 0.0, right = 0.0, scale = 1.0;
};

// Frobenius norms of B_L^T S_0^T + A - S~_0 B~_L and B_R^T S_N^T - A - S~_N B~_R.
HyperbolicDualityResiduals hyperbolic_duality_residuals(const Matrix& A, const Matrix& B_L, const Matrix& B_R,
                                                        const SignedFactorization& f, const BoundaryRotation& rot,
                                                        const HyperbolicPenalties& p);

enum class Flavor { theorem2, method1, method2, ns_alternative, custom };

Flavor parse_flavor(const std::string& s);
std::string to_string(Flavor f);

struct ParabolicPenalties {
  Matrix mu0, nu0;  // n x m+
  Matrix muN, nuN;  // n x m-
  double q_used = 0.0;
  Flavor flavor = Flavor::custom;
};

// H U + G U_x = g at each end, G = K E.
struct BoundaryConditionSpec {
  Matrix H_L, G_L, K_L;
  Matrix H_R, G_R, K_R;
  std::function<Vector(double)> g_L, g_R;

  Matrix B_L() const { return linalg::hstack(H_L, G_L); }
  Matrix B_R() const { return linalg::hstack(H_R, G_R); }
  // Largest of ||G - K E|| / max(||G||, ||E||) over both ends.
  double scaling_residual(const Matrix& E) const;
};

ParabolicPenalties parabolic_theorem2(const SignedFactorization& fbar, const BoundaryRotation& rot,
                                      const Matrix& K_L, const Matrix& K_R, double q);

inline constexpr double kInfiniteOmega = std::numeric_limits<double>::infinity();

// Closed forms for u_t + a u_x - eps u_xx with alpha u + beta u_x = g; omega may be infinite.
ParabolicPenalties scalar_penalties(double a, double eps, double alphaL, double betaL, double alphaR, double betaR,
                                    double omega, double q);

struct NsParameters {
  double ubar = -0.5, a = 0.8, b = 0.6, eps = 0.01, phi = 1.0, psi = 2.0;
};

// Scalar Dirichlet comparison methods.
ParabolicPenalties method1_penalties(double a, double eps, double q);
ParabolicPenalties method2_penalties(double a, double eps);
ParabolicPenalties ns_alternative_penalties(const NsParameters& p);

struct OmegaMode {
  enum Kind { eigen, q_eps, abs_a, abs_a_plus_q_eps, inf, value } kind = eigen;
  double value_ = 0.0;
};

OmegaMode parse_omega_mode(const std::string& s);
std::string to_string(const OmegaMode& m);
double resolve_omega(const OmegaMode& m, double a, double eps, double q);

}  // namespace sbpsat::penalties
