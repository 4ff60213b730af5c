#include "sbpsat/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "coefficients.hpp"

namespace sbpsat::operators {

using linalg::LU;

Variant parse_variant(const std::string& s) {
  if (s == "wide") return Variant::wide;
  if (s == "narrow") return Variant::narrow;
  if (s == "narrow_20") return Variant::narrow_20;
  throw Error(ErrorKind::UnknownVariant, "'" + s + "' (expected wide, narrow or narrow_20)");
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::wide: return "wide";
    case Variant::narrow: return "narrow";
    case Variant::narrow_20: return "narrow_20";
  }
  return "?";
}

Vector SbpOperatorSet::grid(double x_left) const {
  Vector x(N + 1);
  for (std::size_t i = 0; i <= N; ++i) x[i] = x_left + static_cast<double>(i) * h;
  return x;
}

namespace {

void check_order(int interior_order) {
  if (interior_order != 2 && interior_order != 4 && interior_order != 6 && interior_order != 8)
    throw Error(ErrorKind::UnknownVariant, "interior order " + std::to_string(interior_order));
}

std::size_t closure_rows(int interior_order) { return detail::first_derivative_table(interior_order).H.size(); }

std::size_t closure_cols(int interior_order, Variant v) {
  std::size_t c = 0;
  if (v == Variant::narrow) {
    for (const auto& r : detail::narrow_second_derivative_table(interior_order).d2_rows) c = std::max(c, r.size());
    c = std::max(c, detail::narrow_second_derivative_table(interior_order).s0.size());
  }
  for (const auto& r : detail::first_derivative_table(interior_order).q_rows) c = std::max(c, r.size());
  return c;
}

void require_grid(int interior_order, Variant v, std::size_t N) {
  const std::size_t need = min_grid(interior_order, v);
  if (N < need)
    throw Error(ErrorKind::GridTooSmall, "order " + std::to_string(interior_order) + " " + to_string(v) +
                                             " needs N >= " + std::to_string(need) + ", got " + std::to_string(N));
}

Matrix boundary_operator(const SbpOperatorSet& ops) {
  const std::size_t n = ops.size();
  Matrix b(n, n);
  b(0, 0) = -1.0;
  b(n - 1, n - 1) = 1.0;
  return b;
}

}  // namespace

std::size_t min_grid(int interior_order, Variant v) {
  check_order(interior_order);
  if (v == Variant::narrow_20 && interior_order != 2)
    throw Error(ErrorKind::UnknownVariant, "narrow_20 exists only for interior order 2");
  const std::size_t b = closure_rows(interior_order);
  const std::size_t need_points = std::max(2 * b, closure_cols(interior_order, v));
  return std::max<std::size_t>(need_points - 1, 2);
}

SbpOperatorSet build_first_derivative(int interior_order, std::size_t N, double h) {
  check_order(interior_order);
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "h must be positive");
  require_grid(interior_order, Variant::wide, N);
  const auto& t = detail::first_derivative_table(interior_order);
  const std::size_t n = N + 1, b = t.H.size(), w = t.stencil.size();

  SbpOperatorSet ops;
  ops.order.interior_order = interior_order;
  ops.variant = Variant::wide;
  ops.N = N;
  ops.h = h;
  ops.H.assign(n, h);
  for (std::size_t i = 0; i < b; ++i) {
    ops.H[i] = t.H[i] * h;
    ops.H[n - 1 - i] = t.H[i] * h;
  }

  Matrix Q(n, n);
  for (std::size_t i = b; i + b < n; ++i)
    for (std::size_t d = 1; d <= w; ++d) {
      if (i + d < n) Q(i, i + d) = t.stencil[d - 1];
      if (i >= d) Q(i, i - d) = -t.stencil[d - 1];
    }
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < t.q_rows[i].size(); ++j) {
      Q(i, j) = t.q_rows[i][j];
      Q(n - 1 - i, n - 1 - j) = -t.q_rows[i][j];
    }
  ops.Q = Q;

  Matrix D1(Q);
  for (std::size_t i = 0; i < n; ++i) {
    const double inv = 1.0 / ops.H[i];
    for (std::size_t j = 0; j < n; ++j) D1(i, j) *= inv;
  }
  ops.D1 = std::move(D1);
  ops.q_hat = 1.0 / ops.H[0];
  return ops;
}

SbpOperatorSet build_second_derivative(int interior_order, Variant v, std::size_t N, double h, double delta) {
  check_order(interior_order);
  require_grid(interior_order, v, N);
  SbpOperatorSet ops = build_first_derivative(interior_order, N, h);
  ops.variant = v;
  const std::size_t n = N + 1;

  if (v == Variant::wide) {
    ops.D2 = ops.D1 * ops.D1;
    ops.S = ops.D1;
    ops.A_S = ops.D1.transpose() * ops.Hmat() * ops.D1;
    ops.q0 = ops.qN = ops.q = ops.q_hat;
    ops.qc = 0.0;
    return ops;
  }

  const double h2 = h * h;
  Matrix D2(n, n), S(n, n);
  if (v == Variant::narrow_20) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      D2(i, i - 1) = 1.0 / h2;
      D2(i, i) = -2.0 / h2;
      D2(i, i + 1) = 1.0 / h2;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) S(i, i) = 1.0;
    S(0, 0) = -1.0 / h;
    S(0, 1) = 1.0 / h;
    S(n - 1, n - 2) = -1.0 / h;
    S(n - 1, n - 1) = 1.0 / h;
  } else {
    const auto& t = detail::narrow_second_derivative_table(interior_order);
    const std::size_t b = t.d2_rows.size(), w = t.stencil.size() - 1;
    for (std::size_t i = b; i + b < n; ++i)
      for (std::size_t d = 0; d <= w; ++d) {
        if (i + d < n) D2(i, i + d) = t.stencil[d] / h2;
        if (d > 0 && i >= d) D2(i, i - d) = t.stencil[d] / h2;
      }
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < t.d2_rows[i].size(); ++j) {
        D2(i, j) = t.d2_rows[i][j] / h2;
        D2(n - 1 - i, n - 1 - j) = t.d2_rows[i][j] / h2;
      }
    for (std::size_t i = 1; i + 1 < n; ++i) S(i, i) = 1.0;
    for (std::size_t j = 0; j < t.s0.size(); ++j) {
      S(0, j) = t.s0[j] / h;
      S(n - 1, n - 1 - j) = -t.s0[j] / h;
    }
  }
  ops.D2 = D2;
  ops.S = S;
  // A_S = -H D2 + (E_N - E_0) S
  Matrix As = boundary_operator(ops) * S;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) As(i, j) -= ops.H[i] * D2(i, j);
  ops.A_S = std::move(As);
  const QValues qv = compute_q(ops, delta);
  ops.q0 = qv.q0;
  ops.qN = qv.qN;
  ops.qc = qv.qc;
  ops.q = qv.q;
  return ops;
}

SbpOperatorSet narrow_from_wide(const SbpOperatorSet& wide, double delta) {
  SbpOperatorSet ops = wide;
  ops.variant = Variant::narrow;
  ops.D2 = wide.D1 * wide.D1;
  ops.S = wide.D1;
  Matrix As = boundary_operator(ops) * ops.S;
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = 0; j < ops.size(); ++j) As(i, j) -= ops.H[i] * ops.D2(i, j);
  ops.A_S = std::move(As);
  const QValues qv = compute_q(ops, delta);
  ops.q0 = qv.q0;
  ops.qN = qv.qN;
  ops.qc = qv.qc;
  ops.q = qv.q;
  return ops;
}

QValues compute_q(const SbpOperatorSet& ops, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta must be positive");
  if (ops.variant == Variant::wide) return {ops.q_hat, ops.q_hat, 0.0, ops.q_hat};
  if (ops.A_S.empty()) throw Error(ErrorKind::InvalidArgument, "operator set has no A_S");
  const std::size_t n = ops.size();
  Matrix At = ops.A_S;
  At(0, 0) += delta;
  Matrix rhs(n, 2);
  for (std::size_t j = 0; j < n; ++j) {
    rhs(j, 0) = ops.S(0, j);
    rhs(j, 1) = ops.S(n - 1, j);
  }
  Matrix x;
  try {
    x = LU(At).solve(rhs);
  } catch (const Error& e) {
    throw Error(ErrorKind::SingularPerturbedMatrix, e.what());
  }
  double c00 = 0, c0N = 0, cN0 = 0, cNN = 0;
  for (std::size_t j = 0; j < n; ++j) {
    c00 += ops.S(0, j) * x(j, 0);
    c0N += ops.S(0, j) * x(j, 1);
    cN0 += ops.S(n - 1, j) * x(j, 0);
    cNN += ops.S(n - 1, j) * x(j, 1);
  }
  QValues q{};
  q.q0 = c00;
  q.qN = cNN;
  q.qc = 0.5 * (c0N + cN0);
  q.q = q.q0 + std::abs(q.qc);
  return q;
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* VerifyReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

int exactness_degree(const Matrix& d, const Vector& x, std::size_t r0, std::size_t r1, int deriv, double tol,
                     int max_degree) {
  int best = -1;
  for (int k = 0; k <= max_degree; ++k) {
    Vector xk(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xk[i] = std::pow(x[i], k);
    const Vector dx = d * xk;
    double scale = 1.0, err = 0.0;
    for (std::size_t i = r0; i < r1; ++i) {
      double exact = 0.0;
      if (k >= deriv) {
        double c = 1.0;
        for (int m = 0; m < deriv; ++m) c *= (k - m);
        exact = c * std::pow(x[i], k - deriv);
      }
      scale = std::max(scale, std::abs(exact));
      err = std::max(err, std::abs(dx[i] - exact));
    }
    if (err > tol * scale) break;
    best = k;
  }
  return best;
}

VerifyReport verify_sbp(const SbpOperatorSet& ops) {
  VerifyReport rep;
  auto add = [&](const std::string& name, double residual, double tol) {
    rep.checks.push_back({name, residual, tol, std::isfinite(residual) && residual <= tol});
  };
  const std::size_t n = ops.size();
  const int p = ops.order.p();
  const double h = ops.h;
  const Vector x = ops.grid(0.0);  // on [0, N h]
  const double L = static_cast<double>(ops.N) * h;

  double hmin = *std::min_element(ops.H.begin(), ops.H.end());
  add("H_positive", hmin > 0 ? 0.0 : -hmin + 1.0, 0.0);

  // Q + Q^T = E_N - E_0
  double sbp = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double target = 0.0;
      if (i == j && i == 0) target = -1.0;
      if (i == j && i == n - 1) target = 1.0;
      sbp = std::max(sbp, std::abs(ops.Q(i, j) + ops.Q(j, i) - target));
    }
  add("Q_plus_QT", sbp / h, 1e-13 / h);

  double d1hq = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d1hq = std::max(d1hq, std::abs(ops.H[i] * ops.D1(i, j) - ops.Q(i, j)));
  add("D1_equals_Hinv_Q", d1hq, 1e-13);

  Vector ones(n, 1.0);
  add("D1_constants", linalg::norm2(ops.D1 * ones) * h, 1e-12);

  // Exactness is measured on [0, 1] scaled monomials.
  Vector xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] / L;
  const double s1 = L, s2 = L * L;
  const Matrix D1s = ops.D1 * s1;
  const std::size_t bq = std::min(n, detail::first_derivative_table(ops.order.interior_order).H.size());
  const int d1_boundary = exactness_degree(D1s, xs, 0, bq, 1, 1e-9);
  const int d1_interior = exactness_degree(D1s, xs, bq, n - bq, 1, 1e-9);
  add("D1_boundary_exactness", d1_boundary >= p ? 0.0 : static_cast<double>(p - d1_boundary), 0.0);
  add("D1_interior_exactness", d1_interior >= 2 * p ? 0.0 : static_cast<double>(2 * p - d1_interior), 0.0);

  // H quadrature on monomials of degree <= 2p-1 over [0, 1]
  double quad = 0.0;
  for (int k = 0; k <= 2 * p - 1; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += ops.H[i] / L * std::pow(xs[i], k);
    quad = std::max(quad, std::abs(s - 1.0 / (k + 1)));
  }
  add("H_quadrature", quad, 1e-12);

  if (!ops.D2.empty()) {
    add("A_S_symmetric", linalg::asymmetry(ops.A_S), 1e-13 / h);
    // D2 = H^{-1}(-A_S + (E_N - E_0) S)
    double d2res = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double bs = 0.0;
        if (i == 0) bs = -ops.S(0, j);
        if (i == n - 1) bs = ops.S(n - 1, j);
        d2res = std::max(d2res, std::abs(ops.H[i] * ops.D2(i, j) - (-ops.A_S(i, j) + bs)));
      }
    add("D2_sbp_form", d2res * h, 1e-12);
    Matrix sym = ops.A_S;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) sym(i, j) = sym(j, i) = 0.5 * (ops.A_S(i, j) + ops.A_S(j, i));
    const auto eig = linalg::sym_eigen(sym);
    const double lmin = eig.eigenvalues.back().real();
    add("A_S_psd", std::max(0.0, -lmin), 1e-10 * linalg::norm_fro(sym));

    const Matrix D2s = ops.D2 * s2;
    const std::size_t bd = ops.variant == Variant::narrow
                               ? detail::narrow_second_derivative_table(ops.order.interior_order).d2_rows.size()
                           : ops.variant == Variant::narrow_20 ? 1
                                                                : bq;
    const int want_b = ops.variant == Variant::narrow ? p + 1 : ops.variant == Variant::wide ? p : -1;
    const int want_i = ops.variant == Variant::wide ? 2 * p : 2 * p + 1;
    const int d2_boundary = exactness_degree(D2s, xs, 0, bd, 2, 1e-8);
    // wide interior rows that reach into the D1 closure are excluded
    const std::size_t bi = ops.variant == Variant::wide
                               ? bq + detail::first_derivative_table(ops.order.interior_order).stencil.size()
                               : bd;
    const int d2_interior = exactness_degree(D2s, xs, bi, n - bi, 2, 1e-8);
    add("D2_boundary_exactness", d2_boundary >= want_b ? 0.0 : static_cast<double>(want_b - d2_boundary), 0.0);
    add("D2_interior_exactness", d2_interior >= want_i ? 0.0 : static_cast<double>(want_i - d2_interior), 0.0);

    const int want_s = ops.variant == Variant::narrow ? p + 1 : p;
    const int s_deg = std::min(exactness_degree(ops.S * s1, xs, 0, 1, 1, 1e-9),
                               exactness_degree(ops.S * s1, xs, n - 1, n, 1, 1e-9));
    add("S_boundary_exactness", s_deg >= want_s ? 0.0 : static_cast<double>(want_s - s_deg), 0.0);

    if (ops.q > 0.0) {
      add("q_corner_symmetry", std::abs(ops.q0 - ops.qN), 1e-12 * ops.q);
    }
  }
  return rep;
}

std::string dump_matrix(const Matrix& m) {
  std::ostringstream os;
  char buf[64];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j) os << ' ';
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

const std::vector<QReferenceRow>& q_reference() {
  static const std::vector<QReferenceRow> rows = {
      {2, Variant::wide, 16, 2.0, false, "2,0 wide"},
      {4, Variant::wide, 16, 48.0 / 17.0, false, "4,1 wide"},
      {6, Variant::wide, 16, 43200.0 / 13649.0, false, "6,2 wide"},
      {8, Variant::wide, 16, 5080320.0 / 1498139.0, false, "8,3 wide"},
      {2, Variant::narrow_20, 16, 1.0, false, "2,0 narrow"},
      {2, Variant::narrow, 16, 2.5, false, "2,1 narrow"},
      {4, Variant::narrow, 8, 3.986391480987749, false, "4,2 narrow"},
      {6, Variant::narrow, 12, 5.322804652661742, false, "6,3 narrow"},
      {8, Variant::narrow, 16, 633.69326893357, true, "8,4 narrow"},
  };
  return rows;
}

const std::vector<CornerQRow>& corner_q_reference() {
  static const std::vector<CornerQRow> rows = {
      {8, 3.986350339808304, 0.000041141179445, 3.986391480987749},
      {9, 3.986350339313381, 0.000002953803786, 3.986353293117168},
      {10, 3.986350339310830, 0.000000212073570, 3.986350551384400},
      {11, 3.986350339310817, 0.000000015226197, 3.986350354537014},
      {12, 3.986350339310817, 0.000000001093192, 3.986350340404008},
  };
  return rows;
}

}  // namespace sbpsat::operators
