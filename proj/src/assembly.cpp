#include "sbpsat/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace sbpsat::assembly {

using factorization::BoundaryRotation;
using factorization::SignedFactorization;
using linalg::norm_fro;
using penalties::HyperbolicPenalties;
using penalties::ParabolicPenalties;

namespace {

// One side of a SAT: sum over (vector, matrix) pairs on each side of the outer product.
struct Factor {
  Vector v;  // length N+1
  Matrix m;
};

void check_square(const Matrix& m, std::size_t n, const char* what) {
  if (m.rows() != n || m.cols() != n)
    throw Error(ErrorKind::ShapeMismatch, std::string(what) + " must be " + std::to_string(n) + "x" + std::to_string(n));
}

// L += scale * (M kron C)
void add_kron(Matrix& L, const Matrix& M, const Matrix& C, double scale) {
  const std::size_t n = C.rows();
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) {
      const double mij = M(i, j) * scale;
      if (mij == 0.0) continue;
      for (std::size_t r = 0; r < n; ++r) {
        double* row = L.row_ptr(i * n + r) + j * n;
        for (std::size_t c = 0; c < n; ++c) row[c] += mij * C(r, c);
      }
    }
}

// L += scale * Hbar^{-1} (sum_k a_k kron P_k)(sum_l b_l^T kron B_l)
void add_sat(Matrix& L, const Vector& H, std::size_t n, const std::vector<Factor>& left,
             const std::vector<Factor>& right, double scale) {
  const std::size_t np = H.size();
  for (const auto& a : left)
    for (const auto& b : right) {
      if (a.m.empty() || b.m.empty()) continue;
      const Matrix pb = a.m * b.m;
      for (std::size_t i = 0; i < np; ++i) {
        if (a.v[i] == 0.0) continue;
        for (std::size_t j = 0; j < np; ++j) {
          if (b.v[j] == 0.0) continue;
          const double w = scale * a.v[i] * b.v[j] / H[i];
          for (std::size_t r = 0; r < n; ++r) {
            double* row = L.row_ptr(i * n + r) + j * n;
            for (std::size_t c = 0; c < n; ++c) row[c] += w * pb(r, c);
          }
        }
      }
    }
}

Vector unit(std::size_t np, std::size_t k) {
  Vector e(np, 0.0);
  e[k] = 1.0;
  return e;
}

Matrix left_cols(const Matrix& b, std::size_t n) { return b.block(0, 0, b.rows(), n); }
Matrix right_cols(const Matrix& b, std::size_t n) { return b.block(0, n, b.rows(), n); }

SemiDiscreteSystem base_system(const ProblemSpec& p, const SbpOperatorSet& ops) {
  SemiDiscreteSystem s;
  s.n = p.n;
  s.ops = std::make_shared<const SbpOperatorSet>(ops);
  s.grid = ops.grid(p.x_left);
  s.Hbar.resize(ops.size() * p.n);
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t r = 0; r < p.n; ++r) s.Hbar[i * p.n + r] = ops.H[i];
  s.L = Matrix(ops.size() * p.n, ops.size() * p.n);
  return s;
}

void check_grid(const ProblemSpec& p, const SbpOperatorSet& ops) {
  const double h = (p.x_right - p.x_left) / static_cast<double>(ops.N);
  if (std::abs(h - ops.h) > 1e-12 * h) throw Error(ErrorKind::ShapeMismatch, "operator spacing does not match domain");
}

// rhs(t) = F(t) - Hbar^{-1} (sum_k a_k kron P_k) g_L(t) - (same at the right) g_R(t)
std::function<Vector(double)> make_rhs(const SemiDiscreteSystem& s, const ProblemSpec& p, std::vector<Factor> left,
                                       std::vector<Factor> right) {
  auto grid = s.grid;
  auto H = s.ops->H;
  const std::size_t n = p.n;
  auto forcing = p.forcing;
  auto gL = p.bc.g_L, gR = p.bc.g_R;
  return [=](double t) {
    Vector out(grid.size() * n, 0.0);
    if (forcing)
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const Vector f = forcing(grid[i], t);
        for (std::size_t r = 0; r < n; ++r) out[i * n + r] = f[r];
      }
    auto apply = [&](const std::vector<Factor>& fs, const std::function<Vector(double)>& g) {
      if (!g) return;
      const Vector gv = g(t);
      for (const auto& fa : fs) {
        if (fa.m.empty()) continue;
        const Vector pg = fa.m * gv;
        for (std::size_t i = 0; i < grid.size(); ++i) {
          if (fa.v[i] == 0.0) continue;
          for (std::size_t r = 0; r < n; ++r) out[i * n + r] -= fa.v[i] * pg[r] / H[i];
        }
      }
    };
    apply(left, gL);
    apply(right, gR);
    return out;
  };
}

double min_abs_floor(double v, double floor) { return v > floor ? v : floor; }

// The dual first-order variable is (V, -V_x); return the operator acting on (V, V_x).
Matrix flip_derivative_block(Matrix b, std::size_t n) {
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = n; j < 2 * n; ++j) b(i, j) = -b(i, j);
  return b;
}

}  // namespace

void ProblemSpec::validate() const {
  check_square(A, n, "A");
  const double scale = std::max(norm_fro(A), 1e-300);
  if (linalg::asymmetry(A) > 1e-12 * scale) throw Error(ErrorKind::NotSymmetric, "A must be symmetric");
  if (!R.empty()) check_square(R, n, "R");
  if (kind == ProblemKind::parabolic) {
    check_square(E, n, "E");
    if (linalg::asymmetry(E) > 1e-12 * std::max(norm_fro(E), 1e-300))
      throw Error(ErrorKind::NotSymmetric, "E must be symmetric");
    if (bc.H_L.cols() != n || bc.G_L.cols() != n || bc.H_R.cols() != n || bc.G_R.cols() != n)
      throw Error(ErrorKind::ShapeMismatch, "boundary operators must have n columns");
    if (bc.scaling_residual(E) > 1e-12) throw Error(ErrorKind::InvalidArgument, "G must equal K E");
  } else {
    if (B_L.cols() != n || B_R.cols() != n) throw Error(ErrorKind::ShapeMismatch, "B_L, B_R must have n columns");
  }
  if (!(x_right > x_left)) throw Error(ErrorKind::InvalidArgument, "empty domain");
}

Vector SemiDiscreteSystem::sample(const Field& f, double t) const {
  Vector out(grid.size() * n);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vector v = f(grid[i], t);
    for (std::size_t r = 0; r < n; ++r) out[i * n + r] = v[r];
  }
  return out;
}

Matrix build_abar(const Matrix& A, const Matrix& E) {
  const std::size_t n = A.rows();
  check_square(A, n, "A");
  check_square(E, n, "E");
  Matrix m(2 * n, 2 * n);
  m.set_block(0, 0, A);
  m.set_block(0, n, -E);
  m.set_block(n, 0, -E);
  return m;
}

SemiDiscreteSystem assemble_hyperbolic(const ProblemSpec& p, const SbpOperatorSet& ops, const HyperbolicPenalties& pens) {
  if (p.kind != ProblemKind::hyperbolic) throw Error(ErrorKind::InvalidArgument, "problem is not hyperbolic");
  p.validate();
  check_grid(p, ops);
  if (pens.Sigma0.rows() != p.n || pens.Sigma0.cols() != p.B_L.rows() || pens.SigmaN.rows() != p.n ||
      pens.SigmaN.cols() != p.B_R.rows())
    throw Error(ErrorKind::ShapeMismatch, "penalty shapes do not match boundary operators");
  SemiDiscreteSystem s = base_system(p, ops);
  const std::size_t np = ops.size();
  if (!p.R.empty()) add_kron(s.L, Matrix::identity(np), p.R, 1.0);
  add_kron(s.L, ops.D1, p.A, 1.0);
  const std::vector<Factor> l0{{unit(np, 0), pens.Sigma0}}, r0{{unit(np, 0), p.B_L}};
  const std::vector<Factor> lN{{unit(np, np - 1), pens.SigmaN}}, rN{{unit(np, np - 1), p.B_R}};
  add_sat(s.L, ops.H, p.n, l0, r0, -1.0);
  add_sat(s.L, ops.H, p.n, lN, rN, -1.0);
  s.rhs = make_rhs(s, p, l0, lN);
  return s;
}

SemiDiscreteSystem assemble_parabolic(const ProblemSpec& p, const SbpOperatorSet& ops, const ParabolicPenalties& pens) {
  if (p.kind != ProblemKind::parabolic) throw Error(ErrorKind::InvalidArgument, "problem is not parabolic");
  p.validate();
  check_grid(p, ops);
  if (ops.D2.empty() || ops.S.empty()) throw Error(ErrorKind::InvalidArgument, "operator set lacks D2/S");
  const std::size_t mL = p.bc.H_L.rows(), mR = p.bc.H_R.rows();
  if (pens.mu0.rows() != p.n || pens.mu0.cols() != mL || pens.nu0.rows() != p.n || pens.nu0.cols() != mL ||
      pens.muN.rows() != p.n || pens.muN.cols() != mR || pens.nuN.rows() != p.n || pens.nuN.cols() != mR)
    throw Error(ErrorKind::ShapeMismatch, "penalty shapes do not match boundary operators");
  SemiDiscreteSystem s = base_system(p, ops);
  const std::size_t np = ops.size();
  add_kron(s.L, ops.D1, p.A, 1.0);
  add_kron(s.L, ops.D2, p.E, -1.0);
  const Vector e0 = unit(np, 0), eN = unit(np, np - 1);
  const Vector s0 = ops.S.get_row(0), sN = ops.S.get_row(np - 1);
  const std::vector<Factor> l0{{e0, pens.mu0}, {s0, pens.nu0}}, r0{{e0, p.bc.H_L}, {s0, p.bc.G_L}};
  const std::vector<Factor> lN{{eN, pens.muN}, {sN, pens.nuN}}, rN{{eN, p.bc.H_R}, {sN, p.bc.G_R}};
  add_sat(s.L, ops.H, p.n, l0, r0, -1.0);
  add_sat(s.L, ops.H, p.n, lN, rN, -1.0);
  s.rhs = make_rhs(s, p, l0, lN);
  return s;
}

Matrix duality_matrix_left(const ProblemSpec& p, const ParabolicPenalties& pens) {
  const std::size_t n = p.n;
  Matrix m(2 * n, 2 * n);
  m.set_block(0, 0, p.bc.H_L.transpose() * pens.mu0.transpose() + p.A);
  m.set_block(0, n, p.bc.H_L.transpose() * pens.nu0.transpose() + p.E);
  m.set_block(n, 0, p.bc.G_L.transpose() * pens.mu0.transpose() - p.E);
  m.set_block(n, n, p.bc.G_L.transpose() * pens.nu0.transpose());
  return m;
}

Matrix duality_matrix_right(const ProblemSpec& p, const ParabolicPenalties& pens) {
  const std::size_t n = p.n;
  Matrix m(2 * n, 2 * n);
  m.set_block(0, 0, p.bc.H_R.transpose() * pens.muN.transpose() - p.A);
  m.set_block(0, n, p.bc.H_R.transpose() * pens.nuN.transpose() - p.E);
  m.set_block(n, 0, p.bc.G_R.transpose() * pens.muN.transpose() + p.E);
  m.set_block(n, n, p.bc.G_R.transpose() * pens.nuN.transpose());
  return m;
}

DualParabolicPenalties dual_parabolic_penalties(const ProblemSpec& p, const ParabolicPenalties& pens,
                                                const SignedFactorization& fbar, const BoundaryRotation& rot) {
  const std::size_t n = p.n;
  DualParabolicPenalties d;
  d.Bt_L = flip_derivative_block(factorization::dual_boundary_left(fbar, rot), n);
  d.Bt_R = flip_derivative_block(factorization::dual_boundary_right(fbar, rot), n);
  auto split = [n](const Matrix& x, Matrix& mu, Matrix& nu) {
    mu = x.block(0, 0, n, x.cols());
    nu = x.block(n, 0, n, x.cols());
  };
  const Matrix xl = d.Bt_L.rows() ? linalg::right_divide(duality_matrix_left(p, pens), d.Bt_L) : Matrix(2 * n, 0);
  const Matrix xr = d.Bt_R.rows() ? linalg::right_divide(duality_matrix_right(p, pens), d.Bt_R) : Matrix(2 * n, 0);
  split(xl, d.mu0, d.nu0);
  split(xr, d.muN, d.nuN);
  return d;
}

SemiDiscreteSystem assemble_dual(const ProblemSpec& p, const SbpOperatorSet& ops, const DualParabolicPenalties& d) {
  check_grid(p, ops);
  SemiDiscreteSystem s = base_system(p, ops);
  const std::size_t np = ops.size(), n = p.n;
  add_kron(s.L, ops.D1, p.A, -1.0);
  add_kron(s.L, ops.D2, p.E, -1.0);
  const Vector e0 = unit(np, 0), eN = unit(np, np - 1);
  const Vector s0 = ops.S.get_row(0), sN = ops.S.get_row(np - 1);
  add_sat(s.L, ops.H, n, {{e0, d.mu0}, {s0, d.nu0}}, {{e0, left_cols(d.Bt_L, n)}, {s0, right_cols(d.Bt_L, n)}}, -1.0);
  add_sat(s.L, ops.H, n, {{eN, d.muN}, {sN, d.nuN}}, {{eN, left_cols(d.Bt_R, n)}, {sN, right_cols(d.Bt_R, n)}}, -1.0);
  s.rhs = [size = s.L.rows()](double) { return Vector(size, 0.0); };
  return s;
}

SemiDiscreteSystem assemble_dual(const ProblemSpec& p, const SbpOperatorSet& ops, const HyperbolicPenalties& pens,
                                 const Matrix& Bt_L, const Matrix& Bt_R) {
  check_grid(p, ops);
  SemiDiscreteSystem s = base_system(p, ops);
  const std::size_t np = ops.size();
  if (!p.R.empty()) add_kron(s.L, Matrix::identity(np), p.R, 1.0);
  add_kron(s.L, ops.D1, p.A, -1.0);
  add_sat(s.L, ops.H, p.n, {{unit(np, 0), pens.Sigma0_dual}}, {{unit(np, 0), Bt_L}}, -1.0);
  add_sat(s.L, ops.H, p.n, {{unit(np, np - 1), pens.SigmaN_dual}}, {{unit(np, np - 1), Bt_R}}, -1.0);
  s.rhs = [size = s.L.rows()](double) { return Vector(size, 0.0); };
  return s;
}

Matrix discrete_adjoint(const SemiDiscreteSystem& sys) {
  Matrix a = sys.L.transpose();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) *= sys.Hbar[j] / sys.Hbar[i];
  return a;
}

namespace {

struct Spectrum {
  double rho = 0.0, eta = 0.0, energy_min = 0.0;
};

Spectrum spectrum_of(const SemiDiscreteSystem& s) {
  Spectrum sp;
  const auto eig = linalg::general_eigenvalues(s.L);
  sp.eta = std::numeric_limits<double>::infinity();
  for (const auto& l : eig.eigenvalues) {
    sp.rho = std::max(sp.rho, std::abs(l));
    sp.eta = std::min(sp.eta, l.real());
  }
  const std::size_t m = s.L.rows();
  if (m > kEnergyMaxSize) {
    sp.energy_min = std::numeric_limits<double>::quiet_NaN();
    return sp;
  }
  Matrix sym(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) sym(i, j) = 0.5 * (s.Hbar[i] * s.L(i, j) + s.Hbar[j] * s.L(j, i));
  const auto se = linalg::sym_eigen(sym);
  const double top = std::max(std::abs(se.eigenvalues.front().real()), std::abs(se.eigenvalues.back().real()));
  sp.energy_min = top > 0 ? se.eigenvalues.back().real() / top : 0.0;
  return sp;
}

void finish(DualityCertificate& c, const SemiDiscreteSystem& primal, const SemiDiscreteSystem& dual, bool spectrum) {
  const Matrix adj = discrete_adjoint(primal);
  c.adjoint_residual = norm_fro(adj - dual.L) / min_abs_floor(norm_fro(primal.L), 1e-300);
  if (spectrum) {
    const Spectrum sp = spectrum_of(primal);
    c.rho = sp.rho;
    c.eta = sp.eta;
    c.energy_min = sp.energy_min;
    c.stable = c.eta >= -1e-10 * c.rho;
  } else {
    c.stable = true;
  }
  if (!c.stable) c.verdict = "unstable";
  else c.verdict = c.dual_consistent ? "dual_consistent" : "dual_inconsistent";
}

}  // namespace

DualityCertificate certify(const ProblemSpec& p, const SbpOperatorSet& ops, const ParabolicPenalties& pens,
                           bool with_spectrum) {
  DualityCertificate c;
  c.scheme = "parabolic/" + operators::to_string(ops.variant) + "/" + std::to_string(ops.order.interior_order) +
             "/" + penalties::to_string(pens.flavor);
  const double sa = norm_fro(p.A), se = norm_fro(p.E);
  if (sa == 0.0 && se == 0.0) {
    c.empty_problem = true;
    c.verdict = "empty_problem";
    return c;
  }
  const Matrix abar = build_abar(p.A, p.E);
  const SignedFactorization fbar = factorization::factor_symmetric(abar, kCertifyZeroTol);
  const BoundaryRotation rot = factorization::extract_rotation(p.bc.B_L(), p.bc.B_R(), fbar);

  // Row-space membership is invariant under column scaling; balance the U and U_x blocks.
  const std::size_t n = p.n;
  const double su = std::max(sa, se), sx = se > 0 ? se : su;
  Vector dcol(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    dcol[i] = 1.0 / su;
    dcol[n + i] = 1.0 / sx;
  }
  auto scaled = [&](Matrix m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= dcol[j];
    return m;
  };
  const double scale = norm_fro(scaled(abar));
  const Matrix ML = scaled(duality_matrix_left(p, pens)), MR = scaled(duality_matrix_right(p, pens));
  const Matrix BtL = scaled(flip_derivative_block(factorization::dual_boundary_left(fbar, rot), n));
  const Matrix BtR = scaled(flip_derivative_block(factorization::dual_boundary_right(fbar, rot), n));
  c.duality_left = linalg::row_space_residual(ML, BtL, 1e-12) / scale;
  c.duality_right = linalg::row_space_residual(MR, BtR, 1e-12) / scale;
  c.rank_left = linalg::rank_with_tolerance(ML, 1e-10);
  c.rank_right = linalg::rank_with_tolerance(MR, 1e-10);
  c.max_rank_left = fbar.inertia.minus;
  c.max_rank_right = fbar.inertia.plus;
  c.dual_consistent = c.duality_left <= kDualityTol && c.duality_right <= kDualityTol &&
                      c.rank_left <= c.max_rank_left && c.rank_right <= c.max_rank_right;

  const SemiDiscreteSystem primal = assemble_parabolic(p, ops, pens);
  const SemiDiscreteSystem dual = assemble_dual(p, ops, dual_parabolic_penalties(p, pens, fbar, rot));
  finish(c, primal, dual, with_spectrum);
  return c;
}

DualityCertificate certify(const ProblemSpec& p, const SbpOperatorSet& ops, const SignedFactorization& f,
                           const BoundaryRotation& rot, const HyperbolicPenalties& pens, bool with_spectrum) {
  DualityCertificate c;
  c.scheme = "hyperbolic/" + std::to_string(ops.order.interior_order);
  if (norm_fro(p.A) == 0.0) {
    c.empty_problem = true;
    c.verdict = "empty_problem";
    return c;
  }
  const auto r = penalties::hyperbolic_duality_residuals(p.A, p.B_L, p.B_R, f, rot, pens);
  c.duality_left = r.left / r.scale;
  c.duality_right = r.right / r.scale;
  c.max_rank_left = f.inertia.minus;
  c.max_rank_right = f.inertia.plus;
  const Matrix sl = pens.Sigma0 * p.B_L, sr = pens.SigmaN * p.B_R;
  c.boundary_left = factorization::max_sym_eigenvalue(p.A + sl + sl.transpose()) / r.scale;
  c.boundary_right = factorization::max_sym_eigenvalue(-p.A + sr + sr.transpose()) / r.scale;

  const SemiDiscreteSystem primal = assemble_hyperbolic(p, ops, pens);
  const SemiDiscreteSystem dual = assemble_dual(p, ops, pens, factorization::dual_boundary_left(f, rot),
                                                factorization::dual_boundary_right(f, rot));
  const Matrix adj = discrete_adjoint(primal);
  const double adj_res = norm_fro(adj - dual.L) / min_abs_floor(norm_fro(primal.L), 1e-300);
  c.dual_consistent = c.duality_left <= kDualityTol && c.duality_right <= kDualityTol && adj_res <= kAdjointTol;
  finish(c, primal, dual, with_spectrum);
  return c;
}

std::string DualityCertificate::to_json(const std::string& config_json) const {
  nlohmann::ordered_json j;
  j["config"] = nlohmann::ordered_json::parse(config_json.empty() ? "{}" : config_json);
  j["scheme"] = scheme;
  auto& r = j["residuals"];
  r["duality_left"] = duality_left;
  r["duality_right"] = duality_right;
  r["stability_min_re"] = eta;
  r["rho"] = rho;
  r["eta"] = eta;
  r["adjoint"] = adjoint_residual;
  r["energy_min"] = energy_min;
  r["rank_left"] = rank_left;
  r["rank_right"] = rank_right;
  r["max_rank_left"] = max_rank_left;
  r["max_rank_right"] = max_rank_right;
  if (scheme.rfind("hyperbolic", 0) == 0) {
    r["boundary_left"] = boundary_left;
    r["boundary_right"] = boundary_right;
  }
  j["verdict"] = verdict;
  return j.dump(2);
}

}  // namespace sbpsat::assembly
