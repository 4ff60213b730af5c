#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "sbpsat/error.hpp"

namespace sbpsat::linalg {

using Vector = std::vector<double>;

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diag(const Vector& d);
  static Matrix column(const Vector& v);
  static Matrix row(const Vector& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }
  bool is_square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
  const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }
  const std::vector<double>& data() const { return data_; }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
  void add_block(std::size_t r0, std::size_t c0, const Matrix& b, double scale = 1.0);
  Vector get_row(std::size_t i) const;
  Vector get_col(std::size_t j) const;
  Matrix transpose() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(Matrix a);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);

Vector axpy(double alpha, const Vector& x, const Vector& y);
double dot(const Vector& x, const Vector& y);
double norm2(const Vector& x);

double norm_fro(const Matrix& a);
double norm_inf(const Matrix& a);
double max_abs(const Matrix& a);
double asymmetry(const Matrix& a);
bool all_finite(const Matrix& a);

Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);
Matrix kron(const Matrix& a, const Matrix& b);

// LU with partial pivoting, reusable for repeated solves.
class LU {
 public:
  explicit LU(const Matrix& a);
  Matrix solve(const Matrix& b) const;
  Vector solve(const Vector& b) const;
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

Matrix lu_solve(const Matrix& a, const Matrix& b);
Matrix inverse(const Matrix& a);

struct EigenResult {
  std::vector<std::complex<double>> eigenvalues;
  std::optional<Matrix> eigenvectors;
};

// Cyclic Jacobi. Eigenvalues sorted descending, eigenvectors as columns.
EigenResult sym_eigen(const Matrix& a);

// Balancing, Hessenberg reduction and Francis double-shift QR.
EigenResult general_eigenvalues(const Matrix& a);

std::size_t rank_with_tolerance(const Matrix& a, double tol_rel);

// Orthonormal basis (as rows) of the row space of a.
Matrix row_space_basis(const Matrix& a, double tol_rel = 1e-12);

// Frobenius norm of the part of m's rows orthogonal to the row space of b.
double row_space_residual(const Matrix& m, const Matrix& b, double tol_rel = 1e-12);

// Least-squares solution of x * b = m for full-row-rank b.
Matrix right_divide(const Matrix& m, const Matrix& b);

}  // namespace sbpsat::linalg
