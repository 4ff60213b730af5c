#pragma once

#include <vector>

#include "sbpsat/error.hpp"

namespace sbpsat::operators::detail {

// Diagonal-norm first-derivative closure in units of h = 1.
// q_rows are the leading rows of Q including their couplings into the interior.
struct FirstDerivativeTable {
  int order;
  std::vector<double> H;
  std::vector<double> stencil;  // Q coefficients for offsets 1..w
  std::vector<std::vector<double>> q_rows;
};

// Narrow second-derivative closure in units of h = 1.
struct SecondDerivativeTable {
  int order;
  std::vector<double> stencil;  // central coefficients for offsets 0..w
  std::vector<double> s0;       // first row of S
  std::vector<std::vector<double>> d2_rows;
};

const FirstDerivativeTable& first_derivative_table(int order);
const SecondDerivativeTable& narrow_second_derivative_table(int order);

}  // namespace sbpsat::operators::detail
