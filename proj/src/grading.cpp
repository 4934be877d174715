#include "adiclab/grading.hpp"

#include <set>

namespace adiclab {

SparseOperator expectation(const SparseOperator& a) { return displacement_component(a, 0); }

GradedDecomposition graded(const SparseOperator& a)
{
    const auto& sp = a.space();
    std::set<int> seen;
    for (std::size_t i = 0; i < a.columns().size(); ++i)
        for (const auto& e : a.column(i))
            seen.insert(static_cast<int>(sp.level(e.row)) - static_cast<int>(sp.level(i)));
    GradedDecomposition out;
    for (int d : seen) out.emplace(d, displacement_component(a, d));
    return out;
}

SparseOperator regrade(const GradedDecomposition& parts, const TreeSpace& space)
{
    SparseOperator out = SparseOperator::zero(space);
    for (const auto& [d, part] : parts) out = out + part;
    return out;
}

SparseOperator fourier_coeff(const SparseOperator& x, const SparseOperator& J, int n)
{
    if (n >= 0) return expectation(compose(x, power(adjoint(J), static_cast<unsigned>(n))));
    return expectation(compose(power(J, static_cast<unsigned>(-n)), x));
}

}  // namespace adiclab
