#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

namespace adiclab {

// Exact rational. Values whose reduced numerator and denominator fit in 64
// bits are stored inline; larger ones fall back to GMP. The representation
// is canonical, so equality is structural.
class Rational {
public:
    Rational() = default;
    Rational(long v) : num_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(long num, long den);
    Rational(const mpq_class& q);  // NOLINT(google-explicit-constructor)
    Rational(const Rational& o) : num_(o.num_), den_(o.den_), big_(o.big_ ? new mpq_class(*o.big_) : nullptr) {}
    Rational(Rational&&) noexcept = default;
    Rational& operator=(const Rational& o)
    {
        if (this != &o) *this = Rational(o);
        return *this;
    }
    Rational& operator=(Rational&&) noexcept = default;

    int sign() const { return big_ ? sgn(*big_) : (num_ > 0) - (num_ < 0); }
    mpq_class to_mpq() const;
    double to_double() const;
    std::string str() const;

    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);
    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const;

    friend bool operator==(const Rational& a, const Rational& b)
    {
        if (a.big_ || b.big_) return a.big_ && b.big_ && *a.big_ == *b.big_;
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    void assign(const mpq_class& q);
    void assign(__int128 num, __int128 den);

    long num_ = 0;
    long den_ = 1;
    std::unique_ptr<mpq_class> big_;
};

// Exact element a + b*sqrt(r) of Q(sqrt(r)).
//
// The radicand r is carried by the value. Pure rationals have r == 0 and
// mix freely with any radicand; two values with nonzero irrational parts
// must share r. When r is a perfect square the irrational part is folded
// into the rational one at construction, so equality is component-wise.
class QuadScalar {
public:
    QuadScalar() = default;
    QuadScalar(long v) : rat_(v) {}  // NOLINT(google-explicit-constructor)
    QuadScalar(Rational rat) : rat_(std::move(rat)) {}  // NOLINT(google-explicit-constructor)
    QuadScalar(const mpq_class& rat) : rat_(rat) {}     // NOLINT(google-explicit-constructor)
    QuadScalar(Rational rat, Rational irr, unsigned radicand);

    // 1/sqrt(s), exact; s >= 2.
    static QuadScalar inv_sqrt(unsigned s);
    static QuadScalar sqrt(unsigned s);

    // Parses the canonical form written by str(): "0", "-3/4", "1/2√2",
    // "1+1/2√3", "√2". A bare "√" coefficient means 1. The radicand written
    // after √ must equal `s` unless it is a perfect square.
    static QuadScalar parse(std::string_view text, unsigned s);

    const Rational& rational() const { return rat_; }
    const Rational& irrational() const { return irr_; }
    unsigned radicand() const { return radicand_; }

    bool is_zero() const { return rat_.sign() == 0 && irr_.sign() == 0; }
    bool is_rational() const { return irr_.sign() == 0; }

    QuadScalar inverse() const;

    QuadScalar& operator+=(const QuadScalar& o);
    QuadScalar& operator-=(const QuadScalar& o);
    QuadScalar& operator*=(const QuadScalar& o);
    QuadScalar& operator/=(const QuadScalar& o) { return *this *= o.inverse(); }

    friend QuadScalar operator+(QuadScalar a, const QuadScalar& b) { return a += b; }
    friend QuadScalar operator-(QuadScalar a, const QuadScalar& b) { return a -= b; }
    friend QuadScalar operator*(QuadScalar a, const QuadScalar& b) { return a *= b; }
    friend QuadScalar operator/(QuadScalar a, const QuadScalar& b) { return a /= b; }
    QuadScalar operator-() const;

    friend bool operator==(const QuadScalar& a, const QuadScalar& b);

    // Lossy, export only.
    double to_double() const;
    std::string str() const;

private:
    void normalize();
    unsigned merged_radicand(const QuadScalar& o) const;

    Rational rat_;
    Rational irr_;
    unsigned radicand_{0};
};

std::ostream& operator<<(std::ostream& os, const QuadScalar& q);

// Integer square root if n is a perfect square, else 0 (n > 0).
unsigned exact_isqrt(unsigned n);

}  // namespace adiclab
