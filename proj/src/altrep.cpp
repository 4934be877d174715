#include "adiclab/altrep.hpp"

namespace adiclab {

GridOperator make_altrep_shift(std::int64_t K, unsigned L)
{
    GridSpace sp(K, L);
    std::vector<Column> cols(sp.size());
    for (std::size_t i = 0; i < cols.size(); ++i) {
        const GridPoint p = sp.key(i);
        if (p.l < L) cols[i].push_back(Entry{static_cast<std::uint32_t>(sp.index(GridPoint{p.k, p.l + 1})), QuadScalar(1)});
    }
    return GridOperator(sp, 1, 1, static_cast<int>(L) - 1, std::move(cols));
}

GridOperator make_altrep_mult(const LCSequence& F, std::int64_t K, unsigned L)
{
    GridSpace sp(K, L);
    std::vector<Column> cols(sp.size());
    for (std::size_t i = 0; i < cols.size(); ++i) {
        const GridPoint p = sp.key(i);
        cols[i].push_back(Entry{static_cast<std::uint32_t>(i), F[p.l].at(p.k + static_cast<std::int64_t>(p.l))});
    }
    return GridOperator(sp, 0, 0, static_cast<int>(L), std::move(cols));
}

AltrepOperators make_altrep_ops(const LCSequence& F, std::int64_t K, unsigned L)
{
    return AltrepOperators{make_altrep_shift(K, L), make_altrep_mult(F, K, L)};
}

}  // namespace adiclab
