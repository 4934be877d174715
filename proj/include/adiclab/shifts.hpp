#pragma once

#include <string>
#include <vector>

#include "adiclab/operator.hpp"
#include "adiclab/sadic.hpp"

namespace adiclab {

enum class ShiftKind { BunceDeddens, Hensel, Bernoulli, Serre };

inline constexpr ShiftKind kAllShiftKinds[] = {ShiftKind::BunceDeddens, ShiftKind::Hensel, ShiftKind::Bernoulli,
                                                ShiftKind::Serre};

// "U", "V", "S", "W".
std::string shift_symbol(ShiftKind kind);
ShiftKind shift_from_symbol(char c);

// U E(n,x) = E(n+1, x+1)
// V E(n,x) = E(n+1, s x)
// S E(n,x) = s^-1/2 sum_j E(n+1, s x + j)
// W E(n,x) = s^-1/2 sum_j E(n+1, x + j s^n)
// Columns at level N are left empty; reliable = N - 1.
SparseOperator make_shift(ShiftKind kind, unsigned s, unsigned N);
// Adjoint written out from the explicit formulas rather than by transposition.
SparseOperator make_shift_adjoint(ShiftKind kind, unsigned s, unsigned N);

SparseOperator make_identity(unsigned s, unsigned N);
SparseOperator make_zero(unsigned s, unsigned N);
SparseOperator make_mult(const LCFunction& f, unsigned N);
SparseOperator make_mult_tree(const TreeFunction& F, unsigned N);

// Bunce-Deddens projections P_0 = I - UU*, P_n = U^n P_0 U*^n, in closed form.
SparseOperator make_P(unsigned n, unsigned s, unsigned N);
// Rank-one projection onto E(n,0), and the matrix unit E(l,0) -> E(k,0).
SparseOperator make_PV(unsigned n, unsigned s, unsigned N);
SparseOperator make_matrix_unit_V(unsigned k, unsigned l, unsigned s, unsigned N);
// Cuntz isometries S_j E(n,x) = E(n+1, s x + j).
SparseOperator make_Sj(unsigned j, unsigned s, unsigned N);
// S_{x_0} S_{x_1} ... S_{x_{n-1}} over the base-s digits of x.
SparseOperator make_S_word(unsigned n, std::uint64_t x, unsigned s, unsigned N);
// Serre projections calP_0 = I - WW*, calP_n = W^n calP_0 W*^n, in closed form.
SparseOperator make_calP(unsigned n, unsigned s, unsigned N);
// E(col) -> E(row).
SparseOperator make_matrix_unit(const Ball& row, const Ball& col, unsigned s, unsigned N);

// T_U(F) = sum_n (M_{f_n} - M_{f_inf}) P_n + M_{f_inf}. Indices past the end
// of `terms` take the limit value.
SparseOperator toeplitz_U(const LCSequence& F, unsigned N);
// T_V(f, x) = sum_n (x_n - f(0)) P_(n,0) + M_f; missing x_n default to f(0).
SparseOperator toeplitz_V(const LCFunction& f, const std::vector<QuadScalar>& xs, unsigned N);
// T_W(G) = sum_n calP_n (M_{g_n} - M_{g_inf}) calP_n + M_{g_inf}.
SparseOperator toeplitz_W(const LCSequence& G, unsigned N);

// alpha(a) = J a J*,  beta(a) = J* a J.
SparseOperator alpha(const SparseOperator& J, const SparseOperator& a);
SparseOperator beta(const SparseOperator& J, const SparseOperator& a);

// Index n with P_n E_b = E_b (every ball lies in exactly one P_n).
unsigned bunce_deddens_index(const Ball& b, unsigned s);

}  // namespace adiclab
