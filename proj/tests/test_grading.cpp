#include <doctest.h>

#include "adiclab/altrep.hpp"
#include "adiclab/errors.hpp"
#include "adiclab/grading.hpp"
#include "adiclab/random.hpp"
#include "adiclab/relations.hpp"
#include "adiclab/shifts.hpp"

using namespace adiclab;

namespace {

const unsigned N = 4;

SparseOperator U() { return make_shift(ShiftKind::BunceDeddens, 2, N); }
SparseOperator Mf() { return make_mult(LCFunction(2, 2, {QuadScalar(1), QuadScalar(-2), QuadScalar(3), QuadScalar(5)}), N); }

bool same(const SparseOperator& a, const SparseOperator& b)
{
    return equals_on_window(a, b, std::min(a.reliable(), b.reliable()));
}

}  // namespace

TEST_CASE("expectation examples")
{
    CHECK(same(expectation(U()), make_zero(2, N)));
    CHECK(same(expectation(Mf()), Mf()));
    const SparseOperator UMU = compose(U(), compose(Mf(), adjoint(U())));
    CHECK(same(expectation(UMU + compose(U(), U())), UMU));
}

TEST_CASE("expectation is idempotent and fixes exactly the level-preserving operators")
{
    RandomFunctions rnd(3, 2);
    for (ShiftKind k : kAllShiftKinds) {
        const SparseOperator J = make_shift(k, 3, N);
        const SparseOperator M = make_mult(rnd.lc(), N);
        const SparseOperator x = compose(M, J) + compose(adjoint(J), M) + compose(J, compose(M, adjoint(J)));
        const SparseOperator e = expectation(x);
        CHECK(same(expectation(e), e));
        CHECK(e.is_level_preserving());
        CHECK_FALSE(x.is_level_preserving());
        CHECK_FALSE(same(e, x));
        const SparseOperator y = compose(J, compose(M, adjoint(J)));
        CHECK(y.is_level_preserving());
        CHECK(same(expectation(y), y));
    }
}

TEST_CASE("graded components")
{
    const SparseOperator Ut = adjoint(U());
    const GradedDecomposition g = graded(U() + Ut);
    REQUIRE(g.size() == 2);
    CHECK(same(g.at(1), U()));
    CHECK(same(g.at(-1), Ut));
    const GradedDecomposition gi = graded(make_identity(2, N));
    REQUIRE(gi.size() == 1);
    CHECK(same(gi.at(0), make_identity(2, N)));
    const SparseOperator MU2 = compose(Mf(), compose(U(), U()));
    const GradedDecomposition g2 = graded(MU2);
    REQUIRE(g2.size() == 1);
    CHECK(same(g2.at(2), MU2));
    const SparseOperator x = MU2 + Ut + Mf();
    CHECK(same(regrade(graded(x), x.space()), x));
}

TEST_CASE("Fourier coefficient examples")
{
    const SparseOperator MU = compose(Mf(), U());
    CHECK(same(fourier_coeff(MU, U(), 1), compose(Mf(), compose(U(), adjoint(U())))));
    CHECK(same(fourier_coeff(Mf(), U(), 0), Mf()));
    const SparseOperator UtM = compose(adjoint(U()), Mf());
    CHECK(same(fourier_coeff(UtM, U(), -1), compose(U(), compose(adjoint(U()), Mf()))));
    CHECK_THROWS_AS(fourier_coeff(Mf(), U(), -5), EmptyWindow);
}

TEST_CASE("Fourier round trip for every shift kind")
{
    for (ShiftKind k : kAllShiftKinds) {
        const RelationResult r = check_fourier(k, 2, 8, 3, 10, 3);
        CHECK_MESSAGE(r.passed, r.id << " " << r.error);
        CHECK(r.window == 2);
        const RelationResult r3 = check_fourier(k, 3, 5, 4, 5, 2);
        CHECK_MESSAGE(r3.passed, r3.id << " " << r3.error);
    }
}

TEST_CASE("Fourier negative control: unnormalized coefficients are not recovered")
{
    // a_1 = M_f is not of the form a_1 U U*, so E(x U*) returns M_f U U* instead.
    const SparseOperator x = compose(Mf(), U());
    const SparseOperator a1 = fourier_coeff(x, U(), 1);
    CHECK_FALSE(same(a1, Mf()));
}

TEST_CASE("coefficient algebra generators are gauge invariant")
{
    RandomFunctions rnd(2, 6);
    const LCFunction f = rnd.lc();
    const TreeFunction F = rnd.tree(N + 1);
    for (ShiftKind k : kAllShiftKinds)
        for (const auto& g : coefficient_generators(k, N, f, F)) CHECK(g.is_level_preserving());
}

TEST_CASE("auxiliary representation")
{
    RandomFunctions rnd(2, 1);
    const LCSequence F = rnd.sequence(3);
    const AltrepOperators ops = make_altrep_ops(F, 4, 4);
    const GridOperator UtU = compose(adjoint(ops.shift), ops.shift);
    CHECK(equals_on_window(UtU, GridOperator::identity(ops.shift.space()), UtU.reliable()));
    const GridSpace sp(4, 4);
    for (std::size_t i = 0; i < sp.size(); ++i) {
        const GridPoint p = sp.key(i);
        CHECK(ops.mult.at(p, p) == F[p.l].at(p.k + static_cast<std::int64_t>(p.l)));
    }
    const LCSequence c{{}, LCFunction::constant(2, QuadScalar(7))};
    const GridOperator Mc = make_altrep_mult(c, 4, 4);
    CHECK(equals_on_window(Mc, scalar_mul(QuadScalar(7), GridOperator::identity(sp)), 4));
    const RelationResult r = check_altrep(5, 5, 2, 1, 10);
    CHECK_MESSAGE(r.passed, r.error);
    CHECK(r.bindings >= 10);
}
