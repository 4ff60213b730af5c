#pragma once

#include <cstddef>

#include "sbpsat/linalg.hpp"

namespace sbpsat::factorization {

using linalg::Matrix;
using linalg::Vector;

struct Inertia {
  std::size_t plus = 0, zero = 0, minus = 0;
  bool operator==(const Inertia&) const = default;
};

// A = Z diag(delta) Z^T with columns ordered (+, 0, -).
struct SignedFactorization {
  Matrix Z;
  Vector delta;
  Inertia inertia;
  double zero_tol_rel = 1e-12;

  std::size_t size() const { return Z.rows(); }
  Matrix Z_plus() const;
  Matrix Z_zero() const;
  Matrix Z_minus() const;
  Matrix Delta() const;
  Matrix Delta_plus() const;
  Matrix Delta_minus() const;
  Matrix reconstruct() const;
};

SignedFactorization factor_symmetric(const Matrix& a, double zero_tol_rel = 1e-12);

// 2x2 family for [[a, -eps], [-eps, 0]].
SignedFactorization scalar_family(double a, double eps, double omega, double s1, double s2);

double eigen_omega(double a, double eps);

struct ScalarScaling {
  double s1, s2;
};

// Eigendecomposition scaling where it is real, 1 otherwise.
ScalarScaling default_scaling(double a, double omega);

struct BoundaryRotation {
  Matrix P_L, R_L, P_R, R_R;
  Matrix R_L_dual, R_R_dual;
  double zero_block_left = 0.0, zero_block_right = 0.0;
};

// B_L = P_L (Z+^T + R_L Z-^T), B_R = P_R (R_R Z+^T + Z-^T), one factorization per side.
BoundaryRotation extract_rotation(const Matrix& B_L, const Matrix& B_R, const SignedFactorization& left,
                                  const SignedFactorization& right);
BoundaryRotation extract_rotation(const Matrix& B_L, const Matrix& B_R, const SignedFactorization& f);

// Dual boundary operators with unit scaling: Z-^T + R~_L Z+^T and Z+^T + R~_R Z-^T.
Matrix dual_boundary_left(const SignedFactorization& f, const BoundaryRotation& rot);
Matrix dual_boundary_right(const SignedFactorization& f, const BoundaryRotation& rot);

struct WellPosednessReport {
  Matrix C_L, C_R, C_L_dual, C_R_dual;
  double max_eig_L = 0, max_eig_R = 0, max_eig_L_dual = 0, max_eig_R_dual = 0;
  double scale = 1.0;
  bool well_posed = false;
  bool dual_well_posed = false;
};

WellPosednessReport check_wellposedness(const SignedFactorization& left, const SignedFactorization& right,
                                        const BoundaryRotation& rot);
WellPosednessReport check_wellposedness(const SignedFactorization& f, const BoundaryRotation& rot);

// Largest eigenvalue of a symmetric matrix, 0 for an empty one.
double max_sym_eigenvalue(const Matrix& a);

// Inverse of a small matrix, throwing SingularP below rel_tol * ||P||.
Matrix checked_inverse(const Matrix& p, double rel_tol, ErrorKind kind, const char* what);

}  // namespace sbpsat::factorization
