#include <doctest.h>

#include <random>

#include "adiclab/errors.hpp"
#include "adiclab/scalar.hpp"

using namespace adiclab;

namespace {

// a + b sqrt(r) as a pair of GMP rationals.
struct Pair {
    mpq_class a, b;
};

Pair mul(const Pair& x, const Pair& y, unsigned r) { return {x.a * y.a + x.b * y.b * r, x.a * y.b + x.b * y.a}; }

Pair as_pair(const QuadScalar& q, unsigned r)
{
    if (q.radicand() == 0 || q.is_rational()) return {q.rational().to_mpq(), 0};
    REQUIRE(q.radicand() == r);
    return {q.rational().to_mpq(), q.irrational().to_mpq()};
}

long draw(std::mt19937_64& g)
{
    long n = static_cast<long>(g() >> (g() % 64));
    return g() % 2 ? -n : n;
}

QuadScalar random_quad(std::mt19937_64& g, unsigned r)
{
    auto small = [&] { return static_cast<long>(g() % 13) - 6; };
    auto den = [&] { return static_cast<long>(g() % 6) + 1; };
    return QuadScalar(Rational(small(), den()), Rational(small(), den()), r);
}

}  // namespace

TEST_CASE("rational matches GMP on random operands, including overflow into the big path")
{
    std::mt19937_64 g(5);
    for (int it = 0; it < 100000; ++it) {
        const long a = draw(g), c = draw(g);
        const long b = static_cast<long>((g() >> (g() % 64)) | 1), d = static_cast<long>((g() >> (g() % 64)) | 1);
        const Rational x(a, b), y(c, d);
        mpq_class X(a, b), Y(c, d);
        X.canonicalize();
        Y.canonicalize();
        Rational r;
        mpq_class R;
        switch (it % 4) {
        case 0: r = x + y; R = X + Y; break;
        case 1: r = x - y; R = X - Y; break;
        case 2: r = x * y; R = X * Y; break;
        default:
            if (c == 0) continue;
            r = x / y;
            R = X / Y;
        }
        const Rational r2 = r * r + x;
        const mpq_class R2 = R * R + X;
        REQUIRE(r.to_mpq() == R);
        REQUIRE(r2.to_mpq() == R2);
        REQUIRE(Rational(R2) == r2);
        REQUIRE(r.sign() == sgn(R));
    }
}

TEST_CASE("rational canonical form and errors")
{
    CHECK(Rational(6, -4) == Rational(-3, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(6, -4).str() == "-3/2");
    CHECK_THROWS_AS(Rational(1, 0), DivisionByZero);
    CHECK_THROWS_AS(Rational(1) / Rational(0), DivisionByZero);
    const Rational big = Rational(mpq_class("123456789012345678901234567890/7"));
    CHECK((big - big) == Rational(0));
    CHECK(((big * Rational(7)) / big) == Rational(7));
}

TEST_CASE("quadratic scalar examples")
{
    const QuadScalar h = QuadScalar(Rational(0), Rational(1, 2), 2);
    CHECK(h * h == QuadScalar(Rational(1, 2)));
    CHECK((QuadScalar(Rational(1), Rational(1), 3) + QuadScalar(Rational(2), Rational(-1), 3)) == QuadScalar(3));
    CHECK(QuadScalar::inv_sqrt(2) == QuadScalar(Rational(0), Rational(1, 2), 2));
    CHECK(QuadScalar::inv_sqrt(9) == QuadScalar(Rational(1, 3)));
    CHECK(QuadScalar::inv_sqrt(3) == QuadScalar(Rational(0), Rational(1, 3), 3));
    CHECK(QuadScalar::inv_sqrt(3) * QuadScalar::inv_sqrt(3) == QuadScalar(Rational(1, 3)));
    CHECK(QuadScalar::sqrt(4) == QuadScalar(2));
    CHECK(QuadScalar(Rational(1), Rational(1), 4).is_rational());
    CHECK(QuadScalar(Rational(1), Rational(1), 4) == QuadScalar(3));
    CHECK_THROWS_AS(QuadScalar(0).inverse(), DivisionByZero);
}

TEST_CASE("string form round-trips through the parser")
{
    CHECK(QuadScalar::inv_sqrt(2).str() == "1/2√2");
    CHECK(QuadScalar(Rational(1, 2)).str() == "1/2");
    CHECK(QuadScalar(0).str() == "0");
    CHECK(QuadScalar(Rational(1), Rational(-1, 2), 3).str() == "1-1/2√3");
    std::mt19937_64 g(11);
    for (unsigned r : {2u, 3u, 5u}) {
        for (int i = 0; i < 300; ++i) {
            const QuadScalar x = random_quad(g, r);
            CHECK(QuadScalar::parse(x.str(), r) == x);
        }
    }
    CHECK(QuadScalar::parse("√2", 2) == QuadScalar::sqrt(2));
    CHECK_THROWS(QuadScalar::parse("1/2√3", 2));
    CHECK_THROWS(QuadScalar::parse("1/", 2));
}

TEST_CASE("field axioms against pair arithmetic")
{
    std::mt19937_64 g(3);
    for (unsigned r : {2u, 3u, 4u, 5u, 9u}) {
        for (int i = 0; i < 400; ++i) {
            const QuadScalar x = random_quad(g, r), y = random_quad(g, r), z = random_quad(g, r);
            CHECK((x + y) + z == x + (y + z));
            CHECK((x * y) * z == x * (y * z));
            CHECK(x * (y + z) == x * y + x * z);
            CHECK(x + y == y + x);
            CHECK(x * y == y * x);
            CHECK(x - x == QuadScalar(0));
            if (!x.is_zero()) CHECK(x * x.inverse() == QuadScalar(1));

            const unsigned rr = exact_isqrt(r) ? 0 : r;
            if (rr != 0) {
                const Pair p = mul(as_pair(x, r), as_pair(y, r), r);
                const Pair q = as_pair(x * y, r);
                CHECK(p.a == q.a);
                CHECK(p.b == q.b);
            }
        }
        CHECK(QuadScalar::inv_sqrt(r) * QuadScalar::inv_sqrt(r) * QuadScalar(static_cast<long>(r)) == QuadScalar(1));
    }
}

TEST_CASE("normalization is idempotent")
{
    std::mt19937_64 g(8);
    for (unsigned r : {2u, 4u, 7u}) {
        for (int i = 0; i < 200; ++i) {
            const QuadScalar x = random_quad(g, r);
            const QuadScalar again(x.rational(), x.irrational(), x.radicand() ? x.radicand() : r);
            CHECK(again == x);
            CHECK(again.str() == x.str());
        }
    }
}

TEST_CASE("mixing radicands is rejected")
{
    const QuadScalar a = QuadScalar::sqrt(2), b = QuadScalar::sqrt(3);
    CHECK_THROWS(a + b);
    CHECK(a + QuadScalar(1) == QuadScalar(Rational(1), Rational(1), 2));
}
