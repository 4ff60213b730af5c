#pragma once

#include <functional>
#include <memory>
#include <string>

#include "sbpsat/factorization.hpp"
#include "sbpsat/operators.hpp"
#include "sbpsat/penalties.hpp"

namespace sbpsat::assembly {

using linalg::Matrix;
using linalg::Vector;
using operators::SbpOperatorSet;

enum class ProblemKind { hyperbolic, parabolic };

// Value of an n-vector field at (x, t).
using Field = std::function<Vector(double x, double t)>;

struct ProblemSpec {
  ProblemKind kind = ProblemKind::parabolic;
  std::size_t n = 1;
  Matrix R;  // hyperbolic reaction, n x n (empty means zero)
  Matrix A;
  Matrix E;                                  // parabolic only
  Matrix B_L, B_R;                           // hyperbolic boundary operators
  penalties::BoundaryConditionSpec bc;       // parabolic operators; g_L, g_R used by both kinds
  double x_left = 0.0, x_right = 1.0;
  Field forcing;
  Field exact;    // optional
  Field initial;  // optional, defaults to exact(x, 0)

  void validate() const;
};

struct SemiDiscreteSystem {
  Matrix L;      // U_t + L U = rhs(t)
  Vector Hbar;   // diagonal of H kron I_n
  Vector grid;
  std::size_t n = 1;
  std::function<Vector(double)> rhs;
  std::shared_ptr<const SbpOperatorSet> ops;

  std::size_t size() const { return L.rows(); }
  Vector sample(const Field& f, double t) const;
};

Matrix build_abar(const Matrix& A, const Matrix& E);

SemiDiscreteSystem assemble_hyperbolic(const ProblemSpec& problem, const SbpOperatorSet& ops,
                                       const penalties::HyperbolicPenalties& pens);
SemiDiscreteSystem assemble_parabolic(const ProblemSpec& problem, const SbpOperatorSet& ops,
                                      const penalties::ParabolicPenalties& pens);

// Dual parabolic penalties with unit dual scaling; [mu~; nu~] B~ = M.
struct DualParabolicPenalties {
  Matrix mu0, nu0, muN, nuN;  // n x m-, n x m+
  Matrix Bt_L, Bt_R;          // m- x 2n, m+ x 2n, acting on (V, V_x)
};

// Boundary coupling matrices whose rows must lie in the row space of the dual boundary operators.
Matrix duality_matrix_left(const ProblemSpec& problem, const penalties::ParabolicPenalties& pens);
Matrix duality_matrix_right(const ProblemSpec& problem, const penalties::ParabolicPenalties& pens);

DualParabolicPenalties dual_parabolic_penalties(const ProblemSpec& problem, const penalties::ParabolicPenalties& pens,
                                                const factorization::SignedFactorization& fbar,
                                                const factorization::BoundaryRotation& rot);

SemiDiscreteSystem assemble_dual(const ProblemSpec& problem, const SbpOperatorSet& ops,
                                 const DualParabolicPenalties& dual);
SemiDiscreteSystem assemble_dual(const ProblemSpec& problem, const SbpOperatorSet& ops,
                                 const penalties::HyperbolicPenalties& pens, const Matrix& Bt_L, const Matrix& Bt_R);

// H^{-1} L^T H for diagonal H.
Matrix discrete_adjoint(const SemiDiscreteSystem& sys);

struct DualityCertificate {
  std::string scheme;
  bool empty_problem = false;
  double duality_left = 0.0, duality_right = 0.0;  // relative residuals
  std::size_t rank_left = 0, rank_right = 0, max_rank_left = 0, max_rank_right = 0;
  double adjoint_residual = 0.0;  // ||L* - L_dual|| / ||L||
  double rho = 0.0, eta = 0.0;
  double energy_min = 0.0;        // min eigenvalue of sym(Hbar L) / max |eigenvalue|
  double boundary_left = 0.0, boundary_right = 0.0;  // max eigenvalues of the boundary forms (hyperbolic)
  bool dual_consistent = false;
  bool stable = false;
  std::string verdict;

  std::string to_json(const std::string& config_json = "{}") const;
};

inline constexpr double kDualityTol = 1e-10;
inline constexpr double kAdjointTol = 1e-12;
// Small-diffusion eigenvalues of the first-order matrix scale like eps^2.
inline constexpr double kCertifyZeroTol = 1e-14;
// energy_min is NaN above this size.
inline constexpr std::size_t kEnergyMaxSize = 400;

DualityCertificate certify(const ProblemSpec& problem, const SbpOperatorSet& ops,
                           const penalties::ParabolicPenalties& pens, bool with_spectrum = true);
DualityCertificate certify(const ProblemSpec& problem, const SbpOperatorSet& ops,
                           const factorization::SignedFactorization& f, const factorization::BoundaryRotation& rot,
                           const penalties::HyperbolicPenalties& pens, bool with_spectrum = true);

}  // namespace sbpsat::assembly
