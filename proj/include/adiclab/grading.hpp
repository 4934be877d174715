#pragma once

#include <map>

#include "adiclab/operator.hpp"

namespace adiclab {

// Components of an operator by level displacement (row level - column level).
using GradedDecomposition = std::map<int, SparseOperator>;

// Displacement-0 part: the average of the gauge action over the circle.
SparseOperator expectation(const SparseOperator& a);
GradedDecomposition graded(const SparseOperator& a);
// Sum of the components; the window is the smallest among them.
SparseOperator regrade(const GradedDecomposition& parts, const TreeSpace& space);

// a_n = E(x J*^n) for n >= 0 and E(J^-n x) for n < 0.
SparseOperator fourier_coeff(const SparseOperator& x, const SparseOperator& J, int n);

}  // namespace adiclab
