#include <doctest.h>

#include <set>

#include "adiclab/random.hpp"
#include "adiclab/sadic.hpp"

using namespace adiclab;

namespace {

LCFunction table(unsigned s, unsigned level, std::vector<long> v)
{
    std::vector<QuadScalar> q(v.begin(), v.end());
    return LCFunction(s, level, std::move(q));
}

// f(x) read straight from the value table.
QuadScalar value(const LCFunction& f, std::int64_t x)
{
    const auto m = static_cast<std::int64_t>(f.values().size());
    return f.values()[static_cast<std::size_t>(((x % m) + m) % m)];
}

}  // namespace

TEST_CASE("ball children")
{
    CHECK(ball_children(Ball{1, 1}, 2) == std::vector<Ball>{{2, 1}, {2, 3}});
    CHECK(ball_children(Ball{0, 0}, 2) == std::vector<Ball>{{1, 0}, {1, 1}});
    CHECK(ball_children(Ball{1, 2}, 3) == std::vector<Ball>{{2, 2}, {2, 5}, {2, 8}});
}

TEST_CASE("children partition the parent")
{
    for (unsigned s : {2u, 3u, 4u}) {
        for (unsigned n = 0; n < 4; ++n) {
            std::set<std::uint64_t> seen;
            for (std::uint64_t x = 0; x < ipow(s, n); ++x) {
                for (const Ball& c : ball_children(Ball{n, x}, s)) {
                    CHECK(c.level == n + 1);
                    CHECK(c.center % ipow(s, n) == x);
                    CHECK(seen.insert(c.center).second);
                }
            }
            CHECK(seen.size() == ipow(s, n + 1));
        }
    }
}

TEST_CASE("ball enumeration")
{
    for (unsigned s : {2u, 3u, 5u}) {
        std::uint64_t expect = 0;
        for (unsigned n = 0; n < 4; ++n) {
            for (std::uint64_t x = 0; x < ipow(s, n); ++x, ++expect) {
                CHECK(ball_index(Ball{n, x}, s) == expect);
                CHECK(ball_at(expect, s) == Ball{n, x});
            }
        }
        CHECK(ball_count(s, 3) == expect);
    }
    CHECK(mod_floor(-1, 4) == 3);
    CHECK(mod_floor(-8, 4) == 0);
    CHECK(mod_floor(9, 4) == 1);
}

TEST_CASE("endomorphism examples")
{
    const QuadScalar a0(5), a1(7);
    CHECK(endo_aU(table(2, 1, {5, 7})) == table(2, 1, {7, 5}));
    CHECK(endo_aU(table(2, 2, {0, 1, 2, 3})).values() == table(2, 2, {3, 0, 1, 2}).values());
    CHECK(endo_aU(LCFunction::constant(3, QuadScalar(4))) == LCFunction::constant(3, QuadScalar(4)));
    CHECK(endo_aV(table(2, 1, {5, 7})).values() == table(2, 2, {5, 0, 7, 0}).values());
    CHECK(endo_bV(table(2, 2, {1, 2, 3, 4})) == table(2, 1, {1, 3}));
    CHECK(endo_aS(table(2, 1, {5, 7})).values() == table(2, 2, {5, 5, 7, 7}).values());
    CHECK(transfer_bS(table(2, 1, {5, 7})) == LCFunction::constant(2, QuadScalar(6)));
    CHECK(endo_aS(LCFunction::constant(3, QuadScalar(2))) == LCFunction::constant(3, QuadScalar(2)));
    CHECK(transfer_bS(LCFunction::constant(3, QuadScalar(2))) == LCFunction::constant(3, QuadScalar(2)));
}

TEST_CASE("tree endomorphism examples")
{
    const TreeFunction one = TreeFunction::constant(2, 2, QuadScalar(1));
    const TreeFunction a = endo_aW(one);
    CHECK(a(Ball{0, 0}) == QuadScalar(0));
    for (unsigned n = 1; n <= 2; ++n)
        for (std::uint64_t x = 0; x < ipow(2, n); ++x) CHECK(a(Ball{n, x}) == QuadScalar(1));
    const TreeFunction c = TreeFunction::constant(3, 3, QuadScalar(Rational(2, 5)));
    const TreeFunction bc = transfer_bW(c);
    for (std::uint64_t i = 0; i < ball_count(3, bc.depth()); ++i) CHECK(bc(ball_at(i, 3)) == QuadScalar(Rational(2, 5)));
    const TreeFunction F(2, 1, {QuadScalar(0), QuadScalar(3), QuadScalar(4)});
    CHECK(transfer_bW(F)(Ball{0, 0}) == QuadScalar(Rational(7, 2)));
}

TEST_CASE("endomorphisms agree with their pointwise definitions")
{
    for (unsigned s : {2u, 3u, 4u}) {
        RandomFunctions rnd(s, 17 + s);
        for (int i = 0; i < 30; ++i) {
            const LCFunction f = rnd.lc();
            const auto top = static_cast<std::int64_t>(ipow(s, f.level() + 2));
            const LCFunction aU = endo_aU(f), bU = endo_bU(f), aV = endo_aV(f), bV = endo_bV(f), aS = endo_aS(f),
                             bS = transfer_bS(f);
            for (std::int64_t x = 0; x < top; ++x) {
                CHECK(value(aU, x) == value(f, x - 1));
                CHECK(value(bU, x) == value(f, x + 1));
                CHECK(value(aV, x) == (x % s == 0 ? value(f, x / s) : QuadScalar(0)));
                CHECK(value(bV, x) == value(f, s * x));
                CHECK(value(aS, x) == value(f, x / s));
                QuadScalar avg(0);
                for (unsigned j = 0; j < s; ++j) avg += value(f, s * x + j);
                CHECK(value(bS, x) == avg * QuadScalar(Rational(1, s)));
            }
        }
    }
}

TEST_CASE("endomorphism identities")
{
    for (unsigned s : {2u, 3u, 4u}) {
        RandomFunctions rnd(s, 40 + s);
        bool bS_not_multiplicative = false;
        const LCFunction one = LCFunction::constant(s, QuadScalar(1));
        for (int i = 0; i < 40; ++i) {
            const LCFunction f = rnd.lc(), g = rnd.lc();
            CHECK(endo_bU(endo_aU(f)) == f);
            CHECK(endo_aU(endo_bU(f)) == f);
            CHECK(endo_bV(endo_aV(f)) == f);
            CHECK(endo_aV(endo_bV(f)) == endo_aV(one) * f);
            CHECK(transfer_bS(endo_aS(f)) == f);
            CHECK(endo_aU(f * g) == endo_aU(f) * endo_aU(g));
            CHECK(endo_bU(f * g) == endo_bU(f) * endo_bU(g));
            CHECK(endo_aV(f * g) == endo_aV(f) * endo_aV(g));
            CHECK(endo_aS(f * g) == endo_aS(f) * endo_aS(g));
            CHECK(transfer_bS(f + QuadScalar(3) * g) == transfer_bS(f) + QuadScalar(3) * transfer_bS(g));
            CHECK(transfer_bS(one) == one);
            if (transfer_bS(f * g) != transfer_bS(f) * transfer_bS(g)) bS_not_multiplicative = true;
        }
        // Level-1 indicators always give a counterexample: bS(chi_0 chi_0) = 1/s, bS(chi_0)^2 = 1/s^2.
        const LCFunction chi = LCFunction::chi(s, 0);
        CHECK(transfer_bS(chi * chi) != transfer_bS(chi) * transfer_bS(chi));
        CHECK(bS_not_multiplicative);
    }
}

TEST_CASE("transfer is positive")
{
    RandomFunctions rnd(3, 9);
    for (int i = 0; i < 50; ++i) {
        const LCFunction f = rnd.lc();
        const LCFunction sq = f * f;
        for (const auto& v : transfer_bS(sq).values()) CHECK(v.rational().sign() >= 0);
    }
}

TEST_CASE("function equality refines to a common level")
{
    const LCFunction c = LCFunction::constant(2, QuadScalar(3));
    CHECK(c == c.refine(3));
    CHECK(table(2, 1, {1, 2}) == table(2, 2, {1, 2, 1, 2}));
    CHECK(table(2, 1, {1, 2}) != table(2, 2, {1, 2, 1, 3}));
    CHECK(LCFunction::indicator(2, Ball{2, 1}).values() == table(2, 2, {0, 1, 0, 0}).values());
}

TEST_CASE("tilde maps on sequences")
{
    RandomFunctions rnd(2, 4);
    const LCSequence F = rnd.sequence(3);
    const LCSequence a = tilde_alpha_U(F), b = tilde_beta_U(F);
    CHECK(a[0] == LCFunction::constant(2, QuadScalar(0)));
    for (std::size_t n = 1; n < 6; ++n) CHECK(a[n] == endo_aU(F[n - 1]));
    for (std::size_t n = 0; n < 6; ++n) CHECK(b[n] == endo_bU(F[n + 1]));
}
