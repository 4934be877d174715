#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adiclab/errors.hpp"
#include "adiclab/scalar.hpp"
#include "adiclab/sadic.hpp"

namespace adiclab {

// Basis of l^2(V) truncated at `depth`, enumerated level-major.
class TreeSpace {
public:
    using Key = Ball;

    TreeSpace(unsigned s, unsigned depth);

    unsigned s() const { return s_; }
    unsigned depth() const { return depth_; }
    std::size_t size() const { return offsets_.back(); }
    unsigned level(std::size_t i) const
    {
        return static_cast<unsigned>(std::upper_bound(offsets_.begin(), offsets_.end(), i) - offsets_.begin() - 1);
    }
    // Columns of level <= d form the prefix [0, prefix(d)).
    std::size_t prefix(unsigned d) const { return offsets_[std::min(d, depth_) + 1]; }
    bool contains(const Ball& b) const { return b.level <= depth_ && b.center < ipow(s_, b.level); }
    std::size_t index(const Ball& b) const { return offsets_[b.level] + b.center; }
    Ball key(std::size_t i) const
    {
        const unsigned n = level(i);
        return Ball{n, i - offsets_[n]};
    }
    std::string describe(const Ball& b) const { return b.str(); }

    friend bool operator==(const TreeSpace& a, const TreeSpace& b) { return a.s_ == b.s_ && a.depth_ == b.depth_; }

private:
    unsigned s_;
    unsigned depth_;
    std::vector<std::size_t> offsets_;  // offsets_[n] = index of (n, 0)
};

struct GridPoint {
    std::int64_t k = 0;
    unsigned l = 0;
    friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

// Basis E_{k,l} of l^2(Z x Z>=0) cut to |k| <= K, l <= L. The second
// coordinate plays the role of the level.
class GridSpace {
public:
    using Key = GridPoint;

    GridSpace(std::int64_t K, unsigned L) : K_(K), L_(L)
    {
        if (K < 0) throw std::invalid_argument("grid half-width must be >= 0");
    }

    std::int64_t half_width() const { return K_; }
    unsigned depth() const { return L_; }
    std::size_t size() const { return static_cast<std::size_t>(2 * K_ + 1) * (L_ + 1); }
    unsigned level(std::size_t i) const { return static_cast<unsigned>(i % (L_ + 1)); }
    bool contains(const GridPoint& p) const { return p.k >= -K_ && p.k <= K_ && p.l <= L_; }
    std::size_t index(const GridPoint& p) const
    {
        if (!contains(p)) throw IndexOutOfGrid("grid point outside [-K,K] x [0,L]");
        return static_cast<std::size_t>(p.k + K_) * (L_ + 1) + p.l;
    }
    GridPoint key(std::size_t i) const
    {
        return GridPoint{static_cast<std::int64_t>(i / (L_ + 1)) - K_, static_cast<unsigned>(i % (L_ + 1))};
    }
    std::string describe(const GridPoint& p) const
    {
        return "(" + std::to_string(p.k) + "," + std::to_string(p.l) + ")";
    }

    friend bool operator==(const GridSpace&, const GridSpace&) = default;

private:
    std::int64_t K_;
    unsigned L_;
};

struct Entry {
    std::uint32_t row;
    QuadScalar value;
};
using Column = std::vector<Entry>;

// Finitely supported operator on a truncated leveled basis.
//
// Window contract: raise_min/raise_max bound (row level - column level) of
// the true operator, and every column at level <= reliable equals the true
// infinite-dimensional column. Columns above the window may be incomplete
// and are never handed out by apply().
template <class Space>
class LeveledOperator {
public:
    using Key = typename Space::Key;

    LeveledOperator(Space space, int raise_min, int raise_max, int reliable, std::vector<Column> cols = {});

    static LeveledOperator zero(const Space& space) { return LeveledOperator(space, 0, 0, static_cast<int>(space.depth())); }
    static LeveledOperator identity(const Space& space);

    const Space& space() const { return space_; }
    unsigned depth() const { return space_.depth(); }
    int raise_min() const { return raise_min_; }
    int raise_max() const { return raise_max_; }
    int reliable() const { return reliable_; }
    const std::vector<Column>& columns() const { return cols_; }
    const Column& column(std::size_t i) const { return cols_[i]; }
    std::size_t nnz() const;

    QuadScalar at(const Key& row, const Key& col) const;
    // Column of the operator at basis vector b; throws UnreliableLevel above the window.
    std::map<Key, QuadScalar> apply(const Key& b) const;

    bool is_diagonal() const;
    bool is_level_preserving() const;

    // Narrow the window (never widens).
    LeveledOperator with_reliable(int reliable) const;

private:
    Space space_;
    std::vector<Column> cols_;
    int raise_min_;
    int raise_max_;
    int reliable_;
};

using SparseOperator = LeveledOperator<TreeSpace>;
using GridOperator = LeveledOperator<GridSpace>;

template <class Space>
struct Discrepancy {
    typename Space::Key row;
    typename Space::Key col;
    QuadScalar lhs;
    QuadScalar rhs;
};

// ---------------------------------------------------------------------------

namespace detail {

// Sort by row, merge duplicates, drop exact zeros.
void normalize_column(Column& col);
Column multiply_column(const std::vector<Column>& a_cols, const Column& b_col);
Column multiply_column_reference(const std::vector<Column>& a_cols, const Column& b_col);
Column add_columns(const Column& a, const Column& b, bool subtract);

template <class Space>
void require_same_space(const LeveledOperator<Space>& a, const LeveledOperator<Space>& b, const char* what)
{
    if (!(a.space() == b.space())) throw std::invalid_argument(std::string(what) + ": operators live on different spaces");
}

// Window of A*B: a column c of B lands at levels <= level(c) + B.raise_max,
// all of which must be reliable columns of A.
template <class Space>
int composed_window(const LeveledOperator<Space>& a, const LeveledOperator<Space>& b)
{
    int rel = std::min(b.reliable(), a.reliable() - b.raise_max());
    rel = std::min(rel, static_cast<int>(a.depth()));
    if (rel < 0) throw EmptyWindow("composition leaves an empty reliable window");
    return rel;
}

}  // namespace detail

template <class Space>
LeveledOperator<Space>::LeveledOperator(Space space, int raise_min, int raise_max, int reliable, std::vector<Column> cols)
    : space_(std::move(space)), cols_(std::move(cols)), raise_min_(raise_min), raise_max_(raise_max), reliable_(reliable)
{
    if (cols_.empty()) cols_.resize(space_.size());
    if (cols_.size() != space_.size()) throw std::invalid_argument("column count does not match space");
    if (raise_min_ > raise_max_) throw std::invalid_argument("raise_min > raise_max");
    if (reliable_ > static_cast<int>(space_.depth()) - std::max(raise_max_, 0))
        throw std::logic_error("reliable window exceeds depth - raise_max");
    for (auto& c : cols_) detail::normalize_column(c);
}

template <class Space>
LeveledOperator<Space> LeveledOperator<Space>::identity(const Space& space)
{
    std::vector<Column> cols(space.size());
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i].push_back(Entry{static_cast<std::uint32_t>(i), QuadScalar(1)});
    return LeveledOperator(space, 0, 0, static_cast<int>(space.depth()), std::move(cols));
}

template <class Space>
std::size_t LeveledOperator<Space>::nnz() const
{
    std::size_t n = 0;
    for (const auto& c : cols_) n += c.size();
    return n;
}

template <class Space>
QuadScalar LeveledOperator<Space>::at(const Key& row, const Key& col) const
{
    const auto r = static_cast<std::uint32_t>(space_.index(row));
    const Column& c = cols_[space_.index(col)];
    auto it = std::lower_bound(c.begin(), c.end(), r, [](const Entry& e, std::uint32_t v) { return e.row < v; });
    return (it != c.end() && it->row == r) ? it->value : QuadScalar(0);
}

template <class Space>
std::map<typename Space::Key, QuadScalar> LeveledOperator<Space>::apply(const Key& b) const
{
    if (!space_.contains(b)) throw std::out_of_range("basis vector " + space_.describe(b) + " outside the truncated space");
    const std::size_t i = space_.index(b);
    if (static_cast<int>(space_.level(i)) > reliable_)
        throw UnreliableLevel("column " + space_.describe(b) + " is above the reliable depth " + std::to_string(reliable_));
    std::map<Key, QuadScalar> out;
    for (const auto& e : cols_[i]) out.emplace(space_.key(e.row), e.value);
    return out;
}

template <class Space>
bool LeveledOperator<Space>::is_diagonal() const
{
    for (std::size_t i = 0; i < cols_.size(); ++i)
        for (const auto& e : cols_[i])
            if (e.row != i) return false;
    return true;
}

template <class Space>
bool LeveledOperator<Space>::is_level_preserving() const
{
    for (std::size_t i = 0; i < cols_.size(); ++i)
        for (const auto& e : cols_[i])
            if (space_.level(e.row) != space_.level(i)) return false;
    return true;
}

template <class Space>
LeveledOperator<Space> LeveledOperator<Space>::with_reliable(int reliable) const
{
    LeveledOperator out = *this;
    out.reliable_ = std::min(reliable_, reliable);
    return out;
}

// --- algebra ------------------------------------------------------------------

// Column-parallel product (OpenMP). Columns above the reliable window are
// left empty.
template <class Space>
LeveledOperator<Space> compose(const LeveledOperator<Space>& a, const LeveledOperator<Space>& b)
{
    detail::require_same_space(a, b, "compose");
    const int rel = detail::composed_window(a, b);
    const auto& bcols = b.columns();
    const auto& acols = a.columns();
    const auto& sp = a.space();
    std::vector<Column> cols(bcols.size());
    const auto n = static_cast<std::int64_t>(bcols.size());
#pragma omp parallel for schedule(dynamic, 64) if (n > 512)
    for (std::int64_t i = 0; i < n; ++i)
        if (static_cast<int>(sp.level(static_cast<std::size_t>(i))) <= rel)
            cols[i] = detail::multiply_column(acols, bcols[i]);
    return LeveledOperator<Space>(a.space(), a.raise_min() + b.raise_min(), a.raise_max() + b.raise_max(), rel,
                                  std::move(cols));
}

// Serial reference product: map-based accumulation, kept for testing the kernel.
template <class Space>
LeveledOperator<Space> compose_serial(const LeveledOperator<Space>& a, const LeveledOperator<Space>& b)
{
    detail::require_same_space(a, b, "compose");
    const int rel = detail::composed_window(a, b);
    std::vector<Column> cols(b.columns().size());
    for (std::size_t i = 0; i < cols.size(); ++i)
        if (static_cast<int>(a.space().level(i)) <= rel)
            cols[i] = detail::multiply_column_reference(a.columns(), b.column(i));
    return LeveledOperator<Space>(a.space(), a.raise_min() + b.raise_min(), a.raise_max() + b.raise_max(), rel,
                                  std::move(cols));
}

// Transpose (all scalars are real). Row c of A is complete once every column
// at levels up to level(c) - raise_min is reliable.
template <class Space>
LeveledOperator<Space> adjoint(const LeveledOperator<Space>& a)
{
    std::vector<Column> cols(a.columns().size());
    for (std::size_t i = 0; i < cols.size(); ++i)
        for (const auto& e : a.column(i)) cols[e.row].push_back(Entry{static_cast<std::uint32_t>(i), e.value});
    const int rel = std::min(static_cast<int>(a.depth()), a.reliable() + a.raise_min());
    return LeveledOperator<Space>(a.space(), -a.raise_max(), -a.raise_min(), rel, std::move(cols));
}

template <class Space>
LeveledOperator<Space> operator+(const LeveledOperator<Space>& a, const LeveledOperator<Space>& b)
{
    detail::require_same_space(a, b, "add");
    std::vector<Column> cols(a.columns().size());
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = detail::add_columns(a.column(i), b.column(i), false);
    return LeveledOperator<Space>(a.space(), std::min(a.raise_min(), b.raise_min()), std::max(a.raise_max(), b.raise_max()),
                                  std::min(a.reliable(), b.reliable()), std::move(cols));
}

template <class Space>
LeveledOperator<Space> operator-(const LeveledOperator<Space>& a, const LeveledOperator<Space>& b)
{
    detail::require_same_space(a, b, "subtract");
    std::vector<Column> cols(a.columns().size());
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = detail::add_columns(a.column(i), b.column(i), true);
    return LeveledOperator<Space>(a.space(), std::min(a.raise_min(), b.raise_min()), std::max(a.raise_max(), b.raise_max()),
                                  std::min(a.reliable(), b.reliable()), std::move(cols));
}

template <class Space>
LeveledOperator<Space> scalar_mul(const QuadScalar& c, const LeveledOperator<Space>& a)
{
    std::vector<Column> cols = a.columns();
    for (auto& col : cols)
        for (auto& e : col) e.value *= c;
    return LeveledOperator<Space>(a.space(), a.raise_min(), a.raise_max(), a.reliable(), std::move(cols));
}

template <class Space>
LeveledOperator<Space> operator-(const LeveledOperator<Space>& a)
{
    return scalar_mul(QuadScalar(-1), a);
}

// First entry (column-major, then row) where A and B differ among the
// columns of level <= d.
template <class Space>
std::optional<Discrepancy<Space>> first_discrepancy(const LeveledOperator<Space>& a, const LeveledOperator<Space>& b, int d)
{
    detail::require_same_space(a, b, "compare");
    if (d < 0) throw EmptyWindow("comparison window is empty");
    if (d > std::min(a.reliable(), b.reliable()))
        throw WindowTooDeep("window " + std::to_string(d) + " exceeds reliable depths " + std::to_string(a.reliable()) +
                            "/" + std::to_string(b.reliable()));
    const auto& sp = a.space();
    for (std::size_t i = 0; i < a.columns().size(); ++i) {
        if (static_cast<int>(sp.level(i)) > d) continue;
        const Column& x = a.column(i);
        const Column& y = b.column(i);
        std::size_t p = 0, q = 0;
        while (p < x.size() || q < y.size()) {
            if (q == y.size() || (p < x.size() && x[p].row < y[q].row))
                return Discrepancy<Space>{sp.key(x[p].row), sp.key(i), x[p].value, QuadScalar(0)};
            if (p == x.size() || y[q].row < x[p].row)
                return Discrepancy<Space>{sp.key(y[q].row), sp.key(i), QuadScalar(0), y[q].value};
            if (!(x[p].value == y[q].value)) return Discrepancy<Space>{sp.key(x[p].row), sp.key(i), x[p].value, y[q].value};
            ++p;
            ++q;
        }
    }
    return std::nullopt;
}

template <class Space>
bool equals_on_window(const LeveledOperator<Space>& a, const LeveledOperator<Space>& b, int d)
{
    return !first_discrepancy(a, b, d).has_value();
}

// Entries with row level - column level == d; same window as the source.
template <class Space>
LeveledOperator<Space> displacement_component(const LeveledOperator<Space>& a, int d)
{
    const auto& sp = a.space();
    std::vector<Column> cols(a.columns().size());
    for (std::size_t i = 0; i < cols.size(); ++i)
        for (const auto& e : a.column(i))
            if (static_cast<int>(sp.level(e.row)) - static_cast<int>(sp.level(i)) == d) cols[i].push_back(e);
    const int rel = std::min(a.reliable(), static_cast<int>(a.depth()) - std::max(d, 0));
    return LeveledOperator<Space>(sp, d, d, rel, std::move(cols));
}

template <class Space>
LeveledOperator<Space> power(const LeveledOperator<Space>& a, unsigned n)
{
    if (n == 0) return LeveledOperator<Space>::identity(a.space());
    LeveledOperator<Space> out = a;
    for (unsigned i = 1; i < n; ++i) out = compose(a, out);
    return out;
}

}  // namespace adiclab
