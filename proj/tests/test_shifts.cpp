#include <doctest.h>

#include "adiclab/errors.hpp"
#include "adiclab/random.hpp"
#include "adiclab/relations.hpp"
#include "adiclab/shifts.hpp"

using namespace adiclab;

namespace {

using Vec = std::map<Ball, QuadScalar>;

// Column of J at E(n,x), written from the defining formulas.
Vec shift_column(ShiftKind k, unsigned s, const Ball& b)
{
    const QuadScalar r = QuadScalar::inv_sqrt(s);
    const std::uint64_t sn = ipow(s, b.level);
    Vec out;
    switch (k) {
    case ShiftKind::BunceDeddens: out[Ball{b.level + 1, b.center + 1}] = QuadScalar(1); break;
    case ShiftKind::Hensel: out[Ball{b.level + 1, s * b.center}] = QuadScalar(1); break;
    case ShiftKind::Bernoulli:
        for (unsigned j = 0; j < s; ++j) out[Ball{b.level + 1, s * b.center + j}] = r;
        break;
    case ShiftKind::Serre:
        for (unsigned j = 0; j < s; ++j) out[Ball{b.level + 1, b.center + j * sn}] = r;
        break;
    }
    return out;
}

// Column of J* at E(n,x), from the explicit adjoint formulas.
Vec shift_adjoint_column(ShiftKind k, unsigned s, const Ball& b)
{
    Vec out;
    if (b.level == 0) return out;
    const std::uint64_t prev = ipow(s, b.level - 1);
    const QuadScalar r = QuadScalar::inv_sqrt(s);
    switch (k) {
    case ShiftKind::BunceDeddens:
        if (b.center != 0 && b.center <= prev) out[Ball{b.level - 1, b.center - 1}] = QuadScalar(1);
        break;
    case ShiftKind::Hensel:
        if (b.center % s == 0) out[Ball{b.level - 1, b.center / s}] = QuadScalar(1);
        break;
    case ShiftKind::Bernoulli: out[Ball{b.level - 1, b.center / s}] = r; break;
    case ShiftKind::Serre: out[Ball{b.level - 1, b.center % prev}] = r; break;
    }
    return out;
}

void check_against(const SparseOperator& op, unsigned s, const std::function<Vec(const Ball&)>& col)
{
    const TreeSpace sp(s, op.depth());
    for (std::size_t i = 0; i < sp.size(); ++i) {
        const Ball b = sp.key(i);
        if (static_cast<int>(b.level) > op.reliable()) continue;
        CHECK(op.apply(b) == col(b));
    }
}

SparseOperator chain(const SparseOperator& J, const SparseOperator& p0, unsigned n)
{
    SparseOperator out = p0;
    for (unsigned i = 0; i < n; ++i) out = compose(J, compose(out, adjoint(J)));
    return out;
}

}  // namespace

TEST_CASE("shifts follow their defining formulas")
{
    for (unsigned s : {2u, 3u, 4u}) {
        for (ShiftKind k : kAllShiftKinds) {
            const SparseOperator J = make_shift(k, s, 4);
            CHECK(J.reliable() == 3);
            CHECK(J.raise_max() == 1);
            check_against(J, s, [&](const Ball& b) { return shift_column(k, s, b); });
            check_against(make_shift_adjoint(k, s, 4), s, [&](const Ball& b) { return shift_adjoint_column(k, s, b); });
        }
    }
}

TEST_CASE("shift examples")
{
    CHECK(make_shift(ShiftKind::BunceDeddens, 2, 3).apply(Ball{1, 1}) == Vec{{Ball{2, 2}, QuadScalar(1)}});
    const QuadScalar r = QuadScalar::inv_sqrt(2);
    CHECK(make_shift(ShiftKind::Serre, 2, 3).apply(Ball{1, 1}) == Vec{{Ball{2, 1}, r}, {Ball{2, 3}, r}});
    // S carries the isometric normalization 1/sqrt(s) in every column.
    CHECK(make_shift(ShiftKind::Bernoulli, 2, 3).apply(Ball{0, 0}) == Vec{{Ball{1, 0}, r}, {Ball{1, 1}, r}});
}

TEST_CASE("isometries on the window")
{
    for (unsigned s : {2u, 3u, 4u})
        for (ShiftKind k : kAllShiftKinds) {
            const RelationResult r = check_isometry(k, s, 6);
            CHECK_MESSAGE(r.passed, r.id);
            CHECK(r.window == 5);
        }
}

TEST_CASE("multiplication operators")
{
    const SparseOperator one = make_mult(LCFunction::constant(2, QuadScalar(1)), 4);
    CHECK(equals_on_window(one, make_identity(2, 4), 4));
    const SparseOperator chi1 = make_mult(LCFunction::chi(2, 1), 4);
    CHECK(chi1.apply(Ball{2, 0}).empty());
    CHECK(chi1.apply(Ball{2, 1}) == Vec{{Ball{2, 1}, QuadScalar(1)}});
    const SparseOperator c = make_mult_tree(TreeFunction::constant(3, 4, QuadScalar(Rational(-2, 3))), 4);
    CHECK(equals_on_window(c, scalar_mul(QuadScalar(Rational(-2, 3)), make_identity(3, 4)), 4));
    RandomFunctions rnd(3, 5);
    for (int i = 0; i < 10; ++i) {
        const LCFunction f = rnd.lc();
        for (unsigned n = 0; n < 4; ++n) {
            const SparseOperator P = make_PV(n, 3, 4);
            CHECK(equals_on_window(compose(make_mult(f, 4), P), scalar_mul(f(0), P), 4));
        }
    }
}

TEST_CASE("Bunce-Deddens projections")
{
    const SparseOperator P0 = make_P(0, 2, 4);
    CHECK(P0.apply(Ball{0, 0}) == Vec{{Ball{0, 0}, QuadScalar(1)}});
    CHECK(P0.apply(Ball{1, 1}).empty());
    CHECK(make_P(1, 2, 4).apply(Ball{2, 1}) == Vec{{Ball{2, 1}, QuadScalar(1)}});
    for (unsigned s : {2u, 3u}) {
        const unsigned N = 6;
        const SparseOperator U = make_shift(ShiftKind::BunceDeddens, s, N);
        const SparseOperator p0 = make_identity(s, N) - compose(U, adjoint(U));
        CHECK(equals_on_window(make_P(0, s, N), p0, p0.reliable()));
        for (unsigned n = 1; n <= 2; ++n) {
            const SparseOperator c = chain(U, p0, n);
            CHECK(equals_on_window(make_P(n, s, N), c, c.reliable()));
        }
        const TreeSpace sp(s, N);
        for (std::size_t i = 0; i < sp.size(); ++i) {
            const Ball b = sp.key(i);
            const unsigned n = bunce_deddens_index(b, s);
            CHECK(make_P(n, s, N).apply(b) == Vec{{b, QuadScalar(1)}});
        }
    }
}

TEST_CASE("Hensel matrix units")
{
    CHECK(make_matrix_unit_V(1, 0, 2, 4).apply(Ball{0, 0}) == Vec{{Ball{1, 0}, QuadScalar(1)}});
    const unsigned N = 6;
    for (unsigned k = 0; k <= 3; ++k)
        for (unsigned l = 0; l <= 3; ++l) {
            const SparseOperator a = make_matrix_unit_V(k, l, 2, N);
            const SparseOperator at = adjoint(a), b = make_matrix_unit_V(l, k, 2, N);
            CHECK(equals_on_window(at, b, std::min(at.reliable(), b.reliable())));
            for (unsigned m = 0; m <= 3; ++m)
                for (unsigned n = 0; n <= 3; ++n) {
                    const SparseOperator lhs = compose(a, make_matrix_unit_V(m, n, 2, N));
                    const SparseOperator rhs = l == m ? make_matrix_unit_V(k, n, 2, N) : make_zero(2, N);
                    CHECK(equals_on_window(lhs, rhs, std::min(lhs.reliable(), rhs.reliable())));
                }
        }
}

TEST_CASE("Cuntz isometries")
{
    CHECK(make_Sj(0, 2, 4).apply(Ball{0, 0}) == Vec{{Ball{1, 0}, QuadScalar(1)}});
    for (unsigned s : {2u, 3u}) {
        const unsigned N = 5;
        const SparseOperator S = make_shift(ShiftKind::Bernoulli, s, N);
        SparseOperator sum = make_zero(s, N);
        for (unsigned j = 0; j < s; ++j) {
            const SparseOperator Sj = make_Sj(j, s, N);
            const SparseOperator viaS = scalar_mul(QuadScalar::sqrt(s), compose(make_mult(LCFunction::chi(s, j), N), S));
            CHECK(equals_on_window(Sj, viaS, Sj.reliable()));
            for (unsigned k = 0; k < s; ++k) {
                const SparseOperator p = compose(adjoint(Sj), make_Sj(k, s, N));
                CHECK(equals_on_window(p, j == k ? make_identity(s, N) : make_zero(s, N), p.reliable()));
            }
            sum = sum + compose(Sj, adjoint(Sj));
        }
        CHECK(equals_on_window(sum, make_identity(s, N) - make_PV(0, s, N), sum.reliable()));
        // S_(2,x) = S_{x_0} S_{x_1}.
        for (std::uint64_t x = 0; x < ipow(s, 2); ++x) {
            const SparseOperator w = compose(make_Sj(x % s, s, N), make_Sj(x / s, s, N));
            CHECK(equals_on_window(make_S_word(2, x, s, N), w, w.reliable()));
        }
    }
}

TEST_CASE("Serre projections and matrix units")
{
    CHECK(make_calP(0, 2, 4).apply(Ball{0, 0}) == Vec{{Ball{0, 0}, QuadScalar(1)}});
    CHECK(make_matrix_unit(Ball{1, 0}, Ball{1, 1}, 2, 4).apply(Ball{1, 1}) == Vec{{Ball{1, 0}, QuadScalar(1)}});
    const unsigned s = 2, N = 6;
    const SparseOperator W = make_shift(ShiftKind::Serre, s, N);
    const SparseOperator p0 = make_identity(s, N) - compose(W, adjoint(W));
    CHECK(equals_on_window(make_calP(0, s, N), p0, p0.reliable()));
    for (unsigned n = 1; n <= 2; ++n) {
        const SparseOperator c = chain(W, p0, n);
        CHECK(equals_on_window(make_calP(n, s, N), c, c.reliable()));
    }
    for (unsigned n = 0; n <= 2; ++n)
        for (unsigned m = 0; m <= 2; ++m) {
            const SparseOperator p = compose(make_calP(n, s, N), make_calP(m, s, N));
            CHECK(equals_on_window(p, n == m ? make_calP(n, s, N) : make_zero(s, N), p.reliable()));
        }
}

TEST_CASE("Toeplitz special cases")
{
    RandomFunctions rnd(2, 12);
    const unsigned N = 5;
    for (int i = 0; i < 5; ++i) {
        const LCFunction f = rnd.lc(), f0 = rnd.lc();
        const LCSequence same{std::vector<LCFunction>(N, f), f};
        CHECK(equals_on_window(toeplitz_U(same, N), make_mult(f, N), N));
        const LCSequence head{{f0}, LCFunction::constant(2, QuadScalar(0))};
        CHECK(equals_on_window(toeplitz_U(head, N), compose(make_mult(f0, N), make_P(0, 2, N)), N));
        CHECK(equals_on_window(toeplitz_V(f, std::vector<QuadScalar>(N, f(0)), N), make_mult(f, N), N));
        CHECK(equals_on_window(toeplitz_V(f, {}, N), make_mult(f, N), N));
        const LCSequence G{std::vector<LCFunction>(N, f), f};
        CHECK(equals_on_window(toeplitz_W(G, N), make_mult(f, N), N));
    }
    const LCSequence F = rnd.sequence(4);
    const SparseOperator T = toeplitz_U(F, N);
    const TreeSpace sp(2, N);
    for (std::size_t i = 0; i < sp.size(); ++i) {
        const Ball b = sp.key(i);
        CHECK(T.at(b, b) == F[bunce_deddens_index(b, 2)](b.center));
    }
}

TEST_CASE("telescoping identity")
{
    const unsigned s = 2, N = 7;
    const SparseOperator U = make_shift(ShiftKind::BunceDeddens, s, N);
    SparseOperator Um = make_identity(s, N);
    SparseOperator sum = make_zero(s, N);
    for (unsigned m = 1; m <= 3; ++m) {
        sum = sum + make_P(m - 1, s, N);
        Um = compose(U, Um);
        const SparseOperator lhs = make_identity(s, N) - compose(Um, adjoint(Um));
        CHECK(equals_on_window(lhs, sum, lhs.reliable()));
    }
}

TEST_CASE("relation catalog at s = 2")
{
    const auto results = run_catalog(CatalogConfig{2, 6, 1, 20});
    CHECK(results.size() == catalog_families().size());
    for (const auto& r : results) {
        CHECK_MESSAGE(r.passed, r.id << " " << r.error);
        CHECK(r.window >= 0);
        if (!r.expect_equal) CHECK_MESSAGE(r.witness.has_value(), r.id);
    }
}

TEST_CASE("relation catalog at s = 3 and at s = 4, depth 5")
{
    for (const auto& cfg : {CatalogConfig{3, 6, 1, 20}, CatalogConfig{4, 5, 1, 20}})
        for (const auto& r : run_catalog(cfg)) CHECK_MESSAGE(r.passed, "s=" << cfg.s << " " << r.id << " " << r.error);
}

TEST_CASE("catalog rejects bad configurations")
{
    CHECK_THROWS_AS(run_catalog(CatalogConfig{2, 1, 1, 20}), ConfigError);
    CHECK_THROWS_AS(run_catalog(CatalogConfig{1, 6, 1, 20}), ConfigError);
}

TEST_CASE("non-identities are witnessed by level-1 indicators")
{
    const unsigned N = 4;
    for (unsigned s : {2u, 3u, 4u}) {
        const SparseOperator S = make_shift(ShiftKind::Bernoulli, s, N);
        bool found = false;
        for (unsigned j = 0; j < s && !found; ++j) {
            const LCFunction f = LCFunction::chi(s, j);
            const SparseOperator lhs = compose(make_mult(f, N), S);
            const SparseOperator rhs = compose(S, make_mult(transfer_bS(f), N));
            found = !equals_on_window(lhs, rhs, std::min(lhs.reliable(), rhs.reliable()));
        }
        CHECK(found);
    }
}
