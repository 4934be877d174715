#include "adiclab/shifts.hpp"

#include <stdexcept>

namespace adiclab {

namespace {

struct Builder {
    TreeSpace space;
    std::vector<Column> cols;

    Builder(unsigned s, unsigned N) : space(s, N), cols(space.size()) {}

    void add(const Ball& row, const Ball& col, const QuadScalar& v)
    {
        if (row.level > space.depth()) return;
        cols[space.index(col)].push_back(Entry{static_cast<std::uint32_t>(space.index(row)), v});
    }

    SparseOperator finish(int raise_min, int raise_max, int reliable)
    {
        return SparseOperator(space, raise_min, raise_max, reliable, std::move(cols));
    }
};

template <class Fn>
void for_each_ball(const TreeSpace& sp, Fn fn)
{
    for (std::size_t i = 0; i < sp.size(); ++i) fn(sp.key(i));
}

SparseOperator diagonal(unsigned s, unsigned N, const std::function<QuadScalar(const Ball&)>& value)
{
    Builder b(s, N);
    for_each_ball(b.space, [&](const Ball& x) { b.add(x, x, value(x)); });
    return b.finish(0, 0, static_cast<int>(N));
}

void require_depth(unsigned N)
{
    if (N < 1) throw std::invalid_argument("truncation depth must be >= 1");
}

}  // namespace

std::string shift_symbol(ShiftKind kind)
{
    switch (kind) {
    case ShiftKind::BunceDeddens: return "U";
    case ShiftKind::Hensel: return "V";
    case ShiftKind::Bernoulli: return "S";
    case ShiftKind::Serre: return "W";
    }
    return "?";
}

ShiftKind shift_from_symbol(char c)
{
    switch (c) {
    case 'U': return ShiftKind::BunceDeddens;
    case 'V': return ShiftKind::Hensel;
    case 'S': return ShiftKind::Bernoulli;
    case 'W': return ShiftKind::Serre;
    default: throw std::invalid_argument(std::string("unknown shift '") + c + "'");
    }
}

SparseOperator make_shift(ShiftKind kind, unsigned s, unsigned N)
{
    require_depth(N);
    Builder b(s, N);
    const QuadScalar one(1);
    const QuadScalar w = QuadScalar::inv_sqrt(s);
    for_each_ball(b.space, [&](const Ball& c) {
        if (c.level >= N) return;
        const unsigned m = c.level + 1;
        const std::uint64_t step = ipow(s, c.level);
        switch (kind) {
        case ShiftKind::BunceDeddens: b.add(Ball{m, c.center + 1}, c, one); break;
        case ShiftKind::Hensel: b.add(Ball{m, s * c.center}, c, one); break;
        case ShiftKind::Bernoulli:
            for (unsigned j = 0; j < s; ++j) b.add(Ball{m, s * c.center + j}, c, w);
            break;
        case ShiftKind::Serre:
            for (unsigned j = 0; j < s; ++j) b.add(Ball{m, c.center + j * step}, c, w);
            break;
        }
    });
    return b.finish(1, 1, static_cast<int>(N) - 1);
}

SparseOperator make_shift_adjoint(ShiftKind kind, unsigned s, unsigned N)
{
    require_depth(N);
    Builder b(s, N);
    const QuadScalar one(1);
    const QuadScalar w = QuadScalar::inv_sqrt(s);
    for_each_ball(b.space, [&](const Ball& c) {
        const unsigned n = c.level;
        const std::uint64_t x = c.center;
        if (n == 0) return;
        const std::uint64_t up = ipow(s, n - 1);
        switch (kind) {
        case ShiftKind::BunceDeddens:
            if (x > 0 && x <= up) b.add(Ball{n - 1, x - 1}, c, one);
            break;
        case ShiftKind::Hensel:
            if (x % s == 0) b.add(Ball{n - 1, x / s}, c, one);
            break;
        case ShiftKind::Bernoulli: b.add(Ball{n - 1, (x - x % s) / s}, c, w); break;
        case ShiftKind::Serre: b.add(Ball{n - 1, x % up}, c, w); break;
        }
    });
    return b.finish(-1, -1, static_cast<int>(N));
}

SparseOperator make_identity(unsigned s, unsigned N) { return SparseOperator::identity(TreeSpace(s, N)); }

SparseOperator make_zero(unsigned s, unsigned N) { return SparseOperator::zero(TreeSpace(s, N)); }

SparseOperator make_mult(const LCFunction& f, unsigned N)
{
    return diagonal(f.s(), N, [&](const Ball& b) { return f(b.center); });
}

SparseOperator make_mult_tree(const TreeFunction& F, unsigned N)
{
    if (F.depth() < N) throw std::invalid_argument("tree function shallower than the truncation depth");
    return diagonal(F.s(), N, [&](const Ball& b) { return F(b); });
}

unsigned bunce_deddens_index(const Ball& b, unsigned s)
{
    Ball c = b;
    unsigned n = 0;
    // U* moves (m, y) to (m-1, y-1) exactly when P_0 does not fix it.
    while (c.level > 0 && c.center > 0 && c.center <= ipow(s, c.level - 1)) {
        c = Ball{c.level - 1, c.center - 1};
        ++n;
    }
    return n;
}

SparseOperator make_P(unsigned n, unsigned s, unsigned N)
{
    return diagonal(s, N, [&](const Ball& b) { return QuadScalar(bunce_deddens_index(b, s) == n ? 1 : 0); });
}

SparseOperator make_PV(unsigned n, unsigned s, unsigned N)
{
    return make_matrix_unit(Ball{n, 0}, Ball{n, 0}, s, N);
}

SparseOperator make_matrix_unit_V(unsigned k, unsigned l, unsigned s, unsigned N)
{
    return make_matrix_unit(Ball{k, 0}, Ball{l, 0}, s, N);
}

SparseOperator make_Sj(unsigned j, unsigned s, unsigned N)
{
    require_depth(N);
    if (j >= s) throw std::invalid_argument("S_j needs 0 <= j < s");
    Builder b(s, N);
    for_each_ball(b.space, [&](const Ball& c) {
        if (c.level < N) b.add(Ball{c.level + 1, s * c.center + j}, c, QuadScalar(1));
    });
    return b.finish(1, 1, static_cast<int>(N) - 1);
}

SparseOperator make_S_word(unsigned n, std::uint64_t x, unsigned s, unsigned N)
{
    if (x >= ipow(s, n)) throw std::invalid_argument("word index x must satisfy x < s^n");
    SparseOperator out = make_identity(s, N);
    // Rightmost factor is S_{x_{n-1}}; build from the right.
    std::vector<unsigned> digits;
    for (unsigned i = 0; i < n; ++i, x /= s) digits.push_back(static_cast<unsigned>(x % s));
    for (unsigned i = n; i-- > 0;) out = compose(make_Sj(digits[i], s, N), out);
    return out;
}

SparseOperator make_calP(unsigned n, unsigned s, unsigned N)
{
    // W^m W*^m averages the top m digits of the center on every level k >= m:
    //   Q_m E(k,y) = s^-m sum_t E(k, (y mod s^(k-m)) + t s^(k-m)),
    // and calP_n = Q_n - Q_(n+1) (with Q_m = 0 on levels below m).
    Builder b(s, N);
    for_each_ball(b.space, [&](const Ball& c) {
        const unsigned k = c.level;
        if (n > k) return;
        for (unsigned m : {n, n + 1}) {
            if (m > k) continue;
            const std::uint64_t low = ipow(s, k - m);
            const std::uint64_t count = ipow(s, m);
            const QuadScalar w = QuadScalar(mpq_class(1, count)) * QuadScalar(m == n ? 1 : -1);
            for (std::uint64_t t = 0; t < count; ++t) b.add(Ball{k, c.center % low + t * low}, c, w);
        }
    });
    return b.finish(0, 0, static_cast<int>(N));
}

SparseOperator make_matrix_unit(const Ball& row, const Ball& col, unsigned s, unsigned N)
{
    TreeSpace sp(s, N);
    if (!sp.contains(row) || !sp.contains(col))
        throw std::invalid_argument("matrix unit " + row.str() + "," + col.str() + " outside depth " + std::to_string(N));
    Builder b(s, N);
    b.add(row, col, QuadScalar(1));
    const int d = static_cast<int>(row.level) - static_cast<int>(col.level);
    return b.finish(d, d, static_cast<int>(N) - std::max(d, 0));
}

SparseOperator toeplitz_U(const LCSequence& F, unsigned N)
{
    const unsigned s = F.limit.s();
    SparseOperator out = make_mult(F.limit, N);
    for (std::size_t n = 0; n < F.terms.size(); ++n) {
        const SparseOperator d = make_mult(F.terms[n], N) - make_mult(F.limit, N);
        out = out + compose(d, make_P(static_cast<unsigned>(n), s, N));
    }
    return out;
}

SparseOperator toeplitz_V(const LCFunction& f, const std::vector<QuadScalar>& xs, unsigned N)
{
    const unsigned s = f.s();
    SparseOperator out = make_mult(f, N);
    for (std::size_t n = 0; n < xs.size() && n <= N; ++n) {
        const QuadScalar c = xs[n] - f(0);
        if (!c.is_zero()) out = out + scalar_mul(c, make_PV(static_cast<unsigned>(n), s, N));
    }
    return out;
}

SparseOperator toeplitz_W(const LCSequence& G, unsigned N)
{
    const unsigned s = G.limit.s();
    const SparseOperator m_inf = make_mult(G.limit, N);
    SparseOperator out = m_inf;
    for (std::size_t n = 0; n < G.terms.size() && n <= N; ++n) {
        const SparseOperator d = make_mult(G.terms[n], N) - m_inf;
        if (d.nnz() == 0) continue;
        const SparseOperator p = make_calP(static_cast<unsigned>(n), s, N);
        out = out + compose(p, compose(d, p));
    }
    return out;
}

SparseOperator alpha(const SparseOperator& J, const SparseOperator& a) { return compose(J, compose(a, adjoint(J))); }

SparseOperator beta(const SparseOperator& J, const SparseOperator& a) { return compose(adjoint(J), compose(a, J)); }

}  // namespace adiclab
