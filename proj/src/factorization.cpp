#include "sbpsat/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sbpsat::factorization {

using linalg::LU;

namespace {

Matrix columns(const Matrix& z, std::size_t c0, std::size_t nc) { return z.block(0, c0, z.rows(), nc); }

Matrix diag_range(const Vector& d, std::size_t c0, std::size_t nc) {
  Matrix m(nc, nc);
  for (std::size_t i = 0; i < nc; ++i) m(i, i) = d[c0 + i];
  return m;
}

Matrix diag_inverse(const Matrix& d) {
  Matrix m(d.rows(), d.cols());
  for (std::size_t i = 0; i < d.rows(); ++i) m(i, i) = 1.0 / d(i, i);
  return m;
}

}  // namespace

Matrix SignedFactorization::Z_plus() const { return columns(Z, 0, inertia.plus); }
Matrix SignedFactorization::Z_zero() const { return columns(Z, inertia.plus, inertia.zero); }
Matrix SignedFactorization::Z_minus() const { return columns(Z, inertia.plus + inertia.zero, inertia.minus); }
Matrix SignedFactorization::Delta() const { return Matrix::diag(delta); }
Matrix SignedFactorization::Delta_plus() const { return diag_range(delta, 0, inertia.plus); }
Matrix SignedFactorization::Delta_minus() const {
  return diag_range(delta, inertia.plus + inertia.zero, inertia.minus);
}
Matrix SignedFactorization::reconstruct() const { return Z * Delta() * Z.transpose(); }

SignedFactorization factor_symmetric(const Matrix& a, double zero_tol_rel) {
  if (!a.is_square()) throw Error(ErrorKind::ShapeMismatch, "factor_symmetric needs a square matrix");
  const std::size_t n = a.rows();
  const auto eig = linalg::sym_eigen(a);
  double lmax = 0.0;
  for (const auto& l : eig.eigenvalues) lmax = std::max(lmax, std::abs(l.real()));
  const double cut = zero_tol_rel * lmax;

  // sym_eigen sorts descending, so (+, 0, -) order is already in place
  SignedFactorization f;
  f.zero_tol_rel = zero_tol_rel;
  f.Z = *eig.eigenvectors;
  f.delta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double l = eig.eigenvalues[i].real();
    if (std::abs(l) <= cut) {
      f.delta[i] = 0.0;
      ++f.inertia.zero;
    } else if (l > 0) {
      f.delta[i] = l;
      ++f.inertia.plus;
    } else {
      f.delta[i] = l;
      ++f.inertia.minus;
    }
  }
  return f;
}

double eigen_omega(double a, double eps) { return std::sqrt(a * a + 4.0 * eps * eps); }

ScalarScaling default_scaling(double a, double omega) {
  const double p = omega * (omega + a) / 2.0, m = omega * (omega - a) / 2.0;
  return {p > 0 ? std::sqrt(p) : 1.0, m > 0 ? std::sqrt(m) : 1.0};
}

SignedFactorization scalar_family(double a, double eps, double omega, double s1, double s2) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw Error(ErrorKind::InvalidOmega, "omega must be finite and > 0");
  if (s1 == 0.0 || s2 == 0.0) throw Error(ErrorKind::InvalidArgument, "s1 and s2 must be nonzero");
  SignedFactorization f;
  f.Z = Matrix{{(a + omega) / (2 * s1), (a - omega) / (2 * s2)}, {-eps / s1, -eps / s2}};
  f.delta = {s1 * s1 / omega, -s2 * s2 / omega};
  f.inertia = {1, 0, 1};
  return f;
}

Matrix checked_inverse(const Matrix& p, double rel_tol, ErrorKind kind, const char* what) {
  if (p.empty()) return p;
  if (linalg::rank_with_tolerance(p, rel_tol) < p.rows()) throw Error(kind, what);
  return linalg::inverse(p);
}

BoundaryRotation extract_rotation(const Matrix& B_L, const Matrix& B_R, const SignedFactorization& left,
                                  const SignedFactorization& right) {
  BoundaryRotation r;
  auto side = [](const Matrix& B, const SignedFactorization& f, bool is_left, Matrix& P, Matrix& R, double& zres) {
    const auto [mp, m0, mm] = f.inertia;
    const std::size_t m = is_left ? mp : mm;
    if (B.rows() != m || B.cols() != f.size())
      throw Error(ErrorKind::ShapeMismatch, std::string(is_left ? "B_L" : "B_R") + " must be " + std::to_string(m) +
                                                "x" + std::to_string(f.size()) + " for this inertia");
    // W = B Z^{-T}
    const Matrix W = LU(f.Z).solve(B.transpose()).transpose();
    const Matrix zero = W.block(0, mp, m, m0);
    const double scale = std::max(linalg::norm_fro(W), 1e-300);
    zres = linalg::norm_fro(zero) / scale;
    if (zres > 1e-10)
      throw Error(ErrorKind::InvalidZeroBlock, "boundary operator acts on the null space of the coefficient matrix");
    if (is_left) {
      P = W.block(0, 0, m, mp);
      const Matrix Pi = checked_inverse(P, 1e-10, ErrorKind::SingularP, "P_L is singular");
      R = Pi * W.block(0, mp + m0, m, mm);
      if (mp == 0) R = Matrix(0, mm);
    } else {
      P = W.block(0, mp + m0, m, mm);
      const Matrix Pi = checked_inverse(P, 1e-10, ErrorKind::SingularP, "P_R is singular");
      R = Pi * W.block(0, 0, m, mp);
      if (mm == 0) R = Matrix(0, mp);
    }
  };
  side(B_L, left, true, r.P_L, r.R_L, r.zero_block_left);
  side(B_R, right, false, r.P_R, r.R_R, r.zero_block_right);
  // R~_L = -D-^{-1} R_L^T D+, R~_R = -D+^{-1} R_R^T D-
  r.R_L_dual = -(diag_inverse(left.Delta_minus()) * r.R_L.transpose() * left.Delta_plus());
  r.R_R_dual = -(diag_inverse(right.Delta_plus()) * r.R_R.transpose() * right.Delta_minus());
  return r;
}

BoundaryRotation extract_rotation(const Matrix& B_L, const Matrix& B_R, const SignedFactorization& f) {
  return extract_rotation(B_L, B_R, f, f);
}

Matrix dual_boundary_left(const SignedFactorization& f, const BoundaryRotation& rot) {
  return f.Z_minus().transpose() + rot.R_L_dual * f.Z_plus().transpose();
}

Matrix dual_boundary_right(const SignedFactorization& f, const BoundaryRotation& rot) {
  return f.Z_plus().transpose() + rot.R_R_dual * f.Z_minus().transpose();
}

double max_sym_eigenvalue(const Matrix& a) {
  if (a.empty()) return 0.0;
  Matrix s(a);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return linalg::sym_eigen(s).eigenvalues.front().real();
}

WellPosednessReport check_wellposedness(const SignedFactorization& left, const SignedFactorization& right,
                                        const BoundaryRotation& rot) {
  WellPosednessReport w;
  const Matrix DpL = left.Delta_plus(), DmL = left.Delta_minus();
  const Matrix DpR = right.Delta_plus(), DmR = right.Delta_minus();
  w.C_L = DmL + rot.R_L.transpose() * DpL * rot.R_L;
  w.C_R = -DpR - rot.R_R.transpose() * DmR * rot.R_R;
  w.C_L_dual = -DpL - DpL * rot.R_L * diag_inverse(DmL) * rot.R_L.transpose() * DpL;
  w.C_R_dual = DmR + DmR * rot.R_R * diag_inverse(DpR) * rot.R_R.transpose() * DmR;
  w.max_eig_L = max_sym_eigenvalue(w.C_L);
  w.max_eig_R = max_sym_eigenvalue(w.C_R);
  w.max_eig_L_dual = max_sym_eigenvalue(w.C_L_dual);
  w.max_eig_R_dual = max_sym_eigenvalue(w.C_R_dual);
  double s = 0.0;
  for (double d : left.delta) s = std::max(s, std::abs(d));
  for (double d : right.delta) s = std::max(s, std::abs(d));
  w.scale = s > 0 ? s : 1.0;
  const double tol = 1e-10 * w.scale;
  w.well_posed = w.max_eig_L <= tol && w.max_eig_R <= tol;
  w.dual_well_posed = w.max_eig_L_dual <= tol && w.max_eig_R_dual <= tol;
  return w;
}

WellPosednessReport check_wellposedness(const SignedFactorization& f, const BoundaryRotation& rot) {
  return check_wellposedness(f, f, rot);
}

}  // namespace sbpsat::factorization
