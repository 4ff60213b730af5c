#include "sbpsat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace sbpsat {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::UnknownVariant: return "UnknownVariant";
    case ErrorKind::SingularPerturbedMatrix: return "SingularPerturbedMatrix";
    case ErrorKind::InvalidOmega: return "InvalidOmega";
    case ErrorKind::SingularP: return "SingularP";
    case ErrorKind::InvalidZeroBlock: return "InvalidZeroBlock";
    case ErrorKind::NotWellPosed: return "NotWellPosed";
    case ErrorKind::DualityViolated: return "DualityViolated";
    case ErrorKind::SingularPenaltyDenominator: return "SingularPenaltyDenominator";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::EmptyProblem: return "EmptyProblem";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace sbpsat

namespace sbpsat::linalg {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::ShapeMismatch,
                std::string(op) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

}  // namespace

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::ShapeMismatch, "ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diag(const Vector& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::column(const Vector& v) {
  Matrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

Matrix Matrix::row(const Vector& v) {
  Matrix m(1, v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m(0, i) = v[i];
  return m;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw Error(ErrorKind::ShapeMismatch, "block out of range");
  Matrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_)
    throw Error(ErrorKind::ShapeMismatch, "set_block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

void Matrix::add_block(std::size_t r0, std::size_t c0, const Matrix& b, double scale) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_)
    throw Error(ErrorKind::ShapeMismatch, "add_block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) += scale * b(i, j);
}

Vector Matrix::get_row(std::size_t i) const { return Vector(row_ptr(i), row_ptr(i) + cols_); }

Vector Matrix::get_col(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require_same_shape(*this, o, "+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require_same_shape(*this, o, "-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::ShapeMismatch, "matrix product");
  Matrix c(a.rows(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row_ptr(i);
    const double* ai = a.row_ptr(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = ai[k];
      if (aik == 0.0) continue;
      const double* bk = b.row_ptr(k);
      for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) throw Error(ErrorKind::ShapeMismatch, "matrix-vector product");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row_ptr(i);
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += ai[j] * x[j];
    y[i] = s;
  }
  return y;
}

Vector axpy(double alpha, const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::ShapeMismatch, "axpy");
  Vector z(y);
  for (std::size_t i = 0; i < x.size(); ++i) z[i] += alpha * x[i];
  return z;
}

double dot(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::ShapeMismatch, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(const Vector& x) { return std::sqrt(dot(x, x)); }

double norm_fro(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

double norm_inf(const Matrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double asymmetry(const Matrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::ShapeMismatch, "asymmetry of non-square matrix");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - a(j, i)));
  return m;
}

bool all_finite(const Matrix& a) {
  return std::all_of(a.data().begin(), a.data().end(), [](double v) { return std::isfinite(v); });
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorKind::ShapeMismatch, "hstack");
  Matrix c(a.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(0, a.cols(), b);
  return c;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw Error(ErrorKind::ShapeMismatch, "vstack");
  Matrix c(a.rows() + b.rows(), a.cols());
  c.set_block(0, 0, a);
  c.set_block(a.rows(), 0, b);
  return c;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return c;
}

// ---------------------------------------------------------------- LU

LU::LU(const Matrix& a) : n_(a.rows()), lu_(a), perm_(a.rows()) {
  if (!a.is_square()) throw Error(ErrorKind::ShapeMismatch, "LU of non-square matrix");
  std::iota(perm_.begin(), perm_.end(), 0);
  const double tiny = 1e-14 * norm_inf(a);
  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n_; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        p = i;
      }
    }
    if (best <= tiny || best == 0.0)
      throw Error(ErrorKind::SingularMatrix, "pivot " + std::to_string(best) + " at column " + std::to_string(k));
    if (p != k) {
      std::swap_ranges(lu_.row_ptr(k), lu_.row_ptr(k) + n_, lu_.row_ptr(p));
      std::swap(perm_[k], perm_[p]);
    }
    const double* rk = lu_.row_ptr(k);
    const double inv = 1.0 / rk[k];
    for (std::size_t i = k + 1; i < n_; ++i) {
      double* ri = lu_.row_ptr(i);
      if (ri[k] == 0.0) continue;
      const double f = ri[k] * inv;
      ri[k] = f;
      for (std::size_t j = k + 1; j < n_; ++j) ri[j] -= f * rk[j];
    }
  }
}

Vector LU::solve(const Vector& b) const {
  if (b.size() != n_) throw Error(ErrorKind::ShapeMismatch, "LU solve");
  Vector x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n_; ++i) {
    const double* ri = lu_.row_ptr(i);
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= ri[j] * x[j];
    x[i] = s;
  }
  for (std::size_t i = n_; i-- > 0;) {
    const double* ri = lu_.row_ptr(i);
    double s = x[i];
    for (std::size_t j = i + 1; j < n_; ++j) s -= ri[j] * x[j];
    x[i] = s / ri[i];
  }
  return x;
}

Matrix LU::solve(const Matrix& b) const {
  if (b.rows() != n_) throw Error(ErrorKind::ShapeMismatch, "LU solve");
  Matrix x(n_, b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    Vector col = solve(b.get_col(j));
    for (std::size_t i = 0; i < n_; ++i) x(i, j) = col[i];
  }
  return x;
}

Matrix lu_solve(const Matrix& a, const Matrix& b) { return LU(a).solve(b); }

Matrix inverse(const Matrix& a) { return LU(a).solve(Matrix::identity(a.rows())); }

// ---------------------------------------------------------------- symmetric eigen

EigenResult sym_eigen(const Matrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::ShapeMismatch, "sym_eigen of non-square matrix");
  const std::size_t n = a.rows();
  const double scale = norm_inf(a);
  if (asymmetry(a) > 1e-12 * scale) throw Error(ErrorKind::NotSymmetric, "asymmetry exceeds 1e-12 relative");
  Matrix m(a);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = 0.5 * (a(i, j) + a(j, i));
  Matrix v = Matrix::identity(n);
  const double target = 1e-14 * norm_fro(m);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
    if (std::sqrt(2.0 * off) <= target) break;
    bool rotated = false;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        if (std::abs(apq) < 1e-300) {
          m(p, q) = m(q, p) = 0.0;
          continue;
        }
        rotated = true;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        m(p, q) = m(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return m(i, i) > m(j, j); });
  EigenResult r;
  Matrix vs(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    r.eigenvalues.emplace_back(m(order[k], order[k]), 0.0);
    for (std::size_t i = 0; i < n; ++i) vs(i, k) = v(i, order[k]);
  }
  r.eigenvectors = std::move(vs);
  return r;
}

// ---------------------------------------------------------------- general eigen

namespace {

void balance(Matrix& a) {
  const double radix = 2.0, sqrdx = radix * radix;
  const std::size_t n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= g;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

void to_hessenberg(Matrix& a) {
  const std::size_t n = a.rows();
  for (std::size_t m = 1; m + 1 < n; ++m) {
    double x = 0.0;
    std::size_t piv = m;
    for (std::size_t j = m; j < n; ++j) {
      if (std::abs(a(j, m - 1)) > std::abs(x)) {
        x = a(j, m - 1);
        piv = j;
      }
    }
    if (piv != m) {
      for (std::size_t j = m - 1; j < n; ++j) std::swap(a(piv, j), a(m, j));
      for (std::size_t j = 0; j < n; ++j) std::swap(a(j, piv), a(j, m));
    }
    if (x == 0.0) continue;
    for (std::size_t i = m + 1; i < n; ++i) {
      double y = a(i, m - 1);
      if (y == 0.0) continue;
      y /= x;
      a(i, m - 1) = y;
      for (std::size_t j = m; j < n; ++j) a(i, j) -= y * a(m, j);
      for (std::size_t j = 0; j < n; ++j) a(j, m) += y * a(j, i);
    }
  }
  for (std::size_t i = 2; i < n; ++i)
    for (std::size_t j = 0; j + 1 < i; ++j) a(i, j) = 0.0;
}

double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Francis double-shift QR on an upper Hessenberg matrix.
std::vector<std::complex<double>> hessenberg_qr(Matrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<std::complex<double>> w(n);
  const double eps = std::numeric_limits<double>::epsilon();
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
  const long cap = 100L * std::max(n, 1);
  long total = 0;
  int nn = n - 1;
  double t = 0.0;
  double p = 0, q = 0, r = 0, s = 0, x = 0, y = 0, z = 0, u = 0, v = 0, ww = 0;
  while (nn >= 0) {
    int its = 0, l = 0;
    do {
      for (l = nn; l > 0; --l) {
        s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) <= eps * s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      x = a(nn, nn);
      if (l == nn) {
        w[nn--] = x + t;
      } else {
        y = a(nn - 1, nn - 1);
        ww = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          p = 0.5 * (y - x);
          q = p * p + ww;
          z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            w[nn - 1] = w[nn] = x + z;
            if (z != 0.0) w[nn] = x - ww / z;
          } else {
            w[nn] = std::complex<double>(x + p, -z);
            w[nn - 1] = std::conj(w[nn]);
          }
          nn -= 2;
        } else {
          if (its == 60 || ++total > cap)
            throw Error(ErrorKind::NoConvergence, "QR iteration cap reached");
          if (its == 10 || its == 20 || its == 40) {
            t += x;
            for (int i = 0; i <= nn; ++i) a(i, i) -= x;
            s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            ww = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          for (; m >= l; --m) {
            z = a(m, m);
            r = x - z;
            s = y - z;
            p = (r * s - ww) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            a(i + 2, i) = 0.0;
            if (i != m) a(i + 2, i - 1) = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k + 1 != nn) r = a(k + 2, k - 1);
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            if ((s = sign_of(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
              if (k == m) {
                if (l != m) a(k, k - 1) = -a(k, k - 1);
              } else {
                a(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = a(k, j) + q * a(k + 1, j);
                if (k + 1 != nn) {
                  p += r * a(k + 2, j);
                  a(k + 2, j) -= p * z;
                }
                a(k + 1, j) -= p * y;
                a(k, j) -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * a(i, k) + y * a(i, k + 1);
                if (k + 1 != nn) {
                  p += z * a(i, k + 2);
                  a(i, k + 2) -= p * r;
                }
                a(i, k + 1) -= p * q;
                a(i, k) -= p;
              }
            }
          }
        }
      }
    } while (l < nn - 1);
  }
  return w;
}

}  // namespace

EigenResult general_eigenvalues(const Matrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::ShapeMismatch, "general_eigenvalues of non-square matrix");
  if (a.rows() > 4096) throw Error(ErrorKind::InvalidArgument, "dimension exceeds 4096");
  if (!all_finite(a)) throw Error(ErrorKind::InvalidArgument, "non-finite entries");
  EigenResult r;
  if (a.rows() == 0) return r;
  Matrix h(a);
  balance(h);
  to_hessenberg(h);
  r.eigenvalues = hessenberg_qr(h);
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end(), [](auto x, auto y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return r;
}

// ---------------------------------------------------------------- rank and row spaces

std::size_t rank_with_tolerance(const Matrix& a, double tol_rel) {
  if (!(tol_rel > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol_rel must be positive");
  Matrix r(a);
  const std::size_t m = r.rows(), n = r.cols();
  const std::size_t kmax = std::min(m, n);
  std::vector<double> diag;
  for (std::size_t k = 0; k < kmax; ++k) {
    std::size_t best = k;
    double bestn = -1.0;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += r(i, j) * r(i, j);
      if (s > bestn) {
        bestn = s;
        best = j;
      }
    }
    if (best != k)
      for (std::size_t i = 0; i < m; ++i) std::swap(r(i, k), r(i, best));
    const double alpha = std::sqrt(bestn);
    diag.push_back(alpha);
    if (alpha == 0.0) break;
    Vector hv(m - k);
    for (std::size_t i = k; i < m; ++i) hv[i - k] = r(i, k);
    hv[0] += (hv[0] >= 0 ? alpha : -alpha);
    const double hn = dot(hv, hv);
    if (hn == 0.0) continue;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += hv[i - k] * r(i, j);
      s *= 2.0 / hn;
      for (std::size_t i = k; i < m; ++i) r(i, j) -= s * hv[i - k];
    }
  }
  if (diag.empty() || diag[0] == 0.0) return 0;
  std::size_t rank = 0;
  for (double d : diag)
    if (d > tol_rel * diag[0]) ++rank;
  return rank;
}

Matrix row_space_basis(const Matrix& a, double tol_rel) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<Vector> rows;
  double ref = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    rows.push_back(a.get_row(i));
    ref = std::max(ref, norm2(rows.back()));
  }
  std::vector<Vector> basis;
  std::vector<bool> used(m, false);
  while (ref > 0.0 && basis.size() < std::min(m, n)) {
    std::size_t pick = m;
    double best = tol_rel * ref;
    for (std::size_t i = 0; i < m; ++i) {
      if (used[i]) continue;
      const double nr = norm2(rows[i]);
      if (nr > best) {
        best = nr;
        pick = i;
      }
    }
    if (pick == m) break;
    used[pick] = true;
    Vector q = rows[pick];
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& b : basis) q = axpy(-dot(q, b), b, q);
    const double nq = norm2(q);
    if (nq <= tol_rel * ref) continue;
    for (double& x : q) x /= nq;
    for (std::size_t i = 0; i < m; ++i)
      if (!used[i]) rows[i] = axpy(-dot(rows[i], q), q, rows[i]);
    basis.push_back(q);
  }
  Matrix out(basis.size(), n);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = basis[i][j];
  return out;
}

double row_space_residual(const Matrix& m, const Matrix& b, double tol_rel) {
  if (m.cols() != b.cols()) throw Error(ErrorKind::ShapeMismatch, "row_space_residual");
  const Matrix q = row_space_basis(b, tol_rel);
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Vector r = m.get_row(i);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < q.rows(); ++k) {
        const Vector qk = q.get_row(k);
        r = axpy(-dot(r, qk), qk, r);
      }
    s += dot(r, r);
  }
  return std::sqrt(s);
}

Matrix right_divide(const Matrix& m, const Matrix& b) {
  const Matrix bt = b.transpose();
  const Matrix gram = b * bt;
  return (lu_solve(gram, (m * bt).transpose())).transpose();
}

}  // namespace sbpsat::linalg
