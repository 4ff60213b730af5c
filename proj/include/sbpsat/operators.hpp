#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sbpsat/linalg.hpp"

namespace sbpsat::operators {

using linalg::Matrix;
using linalg::Vector;

enum class Variant { wide, narrow, narrow_20 };

Variant parse_variant(const std::string& s);
std::string to_string(Variant v);

struct OperatorOrder {
  int interior_order = 2;  // 2p
  int p() const { return interior_order / 2; }
  int boundary_order() const { return interior_order / 2; }
};

struct SbpOperatorSet {
  OperatorOrder order;
  Variant variant = Variant::wide;
  std::size_t N = 0;
  double h = 0.0;
  Vector H;
  Matrix Q, D1, D2, S, A_S;
  double q_hat = 0.0;
  double q0 = 0.0, qN = 0.0, qc = 0.0, q = 0.0;

  std::size_t size() const { return N + 1; }
  Matrix Hmat() const { return Matrix::diag(H); }
  Vector grid(double x_left = 0.0) const;
};

struct QValues {
  double q0, qN, qc, q;
};

// Smallest admissible N for an order/variant pair.
std::size_t min_grid(int interior_order, Variant v = Variant::wide);

SbpOperatorSet build_first_derivative(int interior_order, std::size_t N, double h);
SbpOperatorSet build_second_derivative(int interior_order, Variant v, std::size_t N, double h, double delta = 1.0);

// Narrow machinery assembled from (D1^2, D1, H); used for the wide/narrow degeneracy check.
SbpOperatorSet narrow_from_wide(const SbpOperatorSet& wide, double delta = 1.0);

QValues compute_q(const SbpOperatorSet& ops, double delta = 1.0);

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};

VerifyReport verify_sbp(const SbpOperatorSet& ops);

// Highest degree k such that rows [r0, r1) of d are exact on x^j for all j <= k.
// deriv is the derivative order the rows approximate.
int exactness_degree(const Matrix& d, const Vector& x, std::size_t r0, std::size_t r1, int deriv, double tol,
                     int max_degree = 12);

// One row per line, space separated, 17 significant digits.
std::string dump_matrix(const Matrix& m);

struct QReferenceRow {
  int interior_order;
  Variant variant;
  std::size_t N;
  double reference;       // q*h
  bool informational;     // free-parameter caveat
  const char* label;
};

const std::vector<QReferenceRow>& q_reference();

struct CornerQRow {
  std::size_t N;
  double q0h, qch, qh;
};

const std::vector<CornerQRow>& corner_q_reference();

}  // namespace sbpsat::operators
