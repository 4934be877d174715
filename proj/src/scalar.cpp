#include "adiclab/scalar.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "adiclab/errors.hpp"

namespace adiclab {

namespace {

const std::string_view kRadical = "\xE2\x88\x9A";  // U+221A

mpq_class parse_rational(std::string_view text)
{
    std::string t(text);
    if (t.empty()) throw std::invalid_argument("empty rational");
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw std::invalid_argument("bad rational '" + t + "'");
    bool slash = false;
    for (std::size_t k = i; k < t.size(); ++k) {
        if (t[k] == '/') {
            if (slash || k == i || k + 1 == t.size()) throw std::invalid_argument("bad rational '" + t + "'");
            slash = true;
        } else if (t[k] < '0' || t[k] > '9') {
            throw std::invalid_argument("bad rational '" + t + "'");
        }
    }
    if (t[0] == '+') t.erase(0, 1);
    mpq_class q(t, 10);
    if (sgn(q.get_den()) == 0) throw DivisionByZero("zero denominator in '" + t + "'");
    q.canonicalize();
    return q;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

unsigned exact_isqrt(unsigned n)
{
    auto r = static_cast<unsigned>(std::llround(std::sqrt(static_cast<double>(n))));
    for (unsigned c : {r == 0 ? 0u : r - 1, r, r + 1})
        if (static_cast<unsigned long long>(c) * c == n) return c;
    return 0;
}

namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b)
{
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Binary gcd for operands that fit in 64 bits.
std::uint64_t gcd64(i128 a, i128 b)
{
    std::uint64_t u = static_cast<std::uint64_t>(a < 0 ? -a : a);
    std::uint64_t v = static_cast<std::uint64_t>(b < 0 ? -b : b);
    if (u == 0) return v;
    if (v == 0) return u;
    const int shift = __builtin_ctzll(u | v);
    u >>= __builtin_ctzll(u);
    do {
        v >>= __builtin_ctzll(v);
        if (u > v) std::swap(u, v);
        v -= u;
    } while (v != 0);
    return u << shift;
}

constexpr i128 kLongMax = std::numeric_limits<long>::max();

bool fits(i128 v) { return v <= kLongMax && v >= -kLongMax; }

mpz_class to_mpz(i128 v)
{
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    mpz_class hi(static_cast<unsigned long>(u >> 64));
    mpz_class out = (hi << 64) + mpz_class(static_cast<unsigned long>(u & ~0UL));
    return neg ? mpz_class(-out) : out;
}

}  // namespace

Rational::Rational(long num, long den)
{
    if (den == 0) throw DivisionByZero("zero denominator");
    assign(i128(num), i128(den));
}

Rational::Rational(const mpq_class& q)
{
    mpq_class c = q;
    c.canonicalize();
    assign(c);
}

void Rational::assign(const mpq_class& q)
{
    if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p() &&
        q.get_num() != std::numeric_limits<long>::min()) {
        num_ = q.get_num().get_si();
        den_ = q.get_den().get_si();
        big_.reset();
    } else {
        big_ = std::make_unique<mpq_class>(q);
        num_ = 0;
        den_ = 1;
    }
}

void Rational::assign(i128 num, i128 den)
{
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num == 0) {
        num_ = 0;
        den_ = 1;
        big_.reset();
        return;
    }
    const i128 g = den == 1 ? i128(1) : (fits(num) && den <= kLongMax) ? i128(gcd64(num, den)) : gcd128(num, den);
    if (g != 1) {
        num /= g;
        den /= g;
    }
    if (fits(num) && den <= kLongMax) {
        num_ = static_cast<long>(num);
        den_ = static_cast<long>(den);
        big_.reset();
        return;
    }
    mpq_class q;
    q.get_num() = to_mpz(num);
    q.get_den() = to_mpz(den);
    big_ = std::make_unique<mpq_class>(std::move(q));
    num_ = 0;
    den_ = 1;
}

mpq_class Rational::to_mpq() const { return big_ ? *big_ : mpq_class(num_, den_); }

double Rational::to_double() const
{
    return big_ ? big_->get_d() : static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const
{
    if (big_) return big_->get_str();
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational& Rational::operator+=(const Rational& o)
{
    if (!big_ && !o.big_) {
        long n = 0;
        if (o.num_ == 0) return *this;
        if (num_ == 0) return *this = o;
        if (den_ == o.den_ && !__builtin_add_overflow(num_, o.num_, &n) && n != std::numeric_limits<long>::min()) {
            if (den_ == 1 || n == 0) {
                num_ = n;
                den_ = n == 0 ? 1 : den_;
                return *this;
            }
            const auto g = static_cast<long>(gcd64(n, den_));
            num_ = n / g;
            den_ /= g;
            return *this;
        }
    }
    if (big_ || o.big_) {
        assign(to_mpq() + o.to_mpq());
    } else if (den_ == o.den_) {
        assign(i128(num_) + o.num_, i128(den_));
    } else {
        assign(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
    }
    return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o)
{
    if (!big_ && !o.big_) {
        if (num_ == 0) return *this;
        if (o.num_ == 0) return *this = Rational();
        long n = 0, d = 0;
        if (!__builtin_mul_overflow(num_, o.num_, &n) && !__builtin_mul_overflow(den_, o.den_, &d) &&
            n != std::numeric_limits<long>::min()) {
            if (d == 1) {
                num_ = n;
                return *this;
            }
            const auto g = static_cast<long>(gcd64(n, d));
            num_ = n / g;
            den_ = d / g;
            return *this;
        }
    }
    if (big_ || o.big_) {
        assign(to_mpq() * o.to_mpq());
    } else if (o.den_ == 1 && den_ == 1) {
        assign(i128(num_) * o.num_, i128(1));
    } else {
        assign(i128(num_) * o.num_, i128(den_) * o.den_);
    }
    return *this;
}

Rational& Rational::operator/=(const Rational& o)
{
    if (o.sign() == 0) throw DivisionByZero("division by exact zero");
    if (big_ || o.big_)
        assign(to_mpq() / o.to_mpq());
    else
        assign(i128(num_) * o.den_, i128(den_) * o.num_);
    return *this;
}

Rational Rational::operator-() const
{
    Rational out = *this;
    if (out.big_)
        *out.big_ = -*out.big_;
    else
        out.num_ = -out.num_;
    return out;
}

QuadScalar::QuadScalar(Rational rat, Rational irr, unsigned radicand)
    : rat_(std::move(rat)), irr_(std::move(irr)), radicand_(radicand)
{
    normalize();
}

void QuadScalar::normalize()
{
    if (irr_.sign() == 0) return;
    if (radicand_ == 0) throw std::invalid_argument("irrational part without radicand");
    if (unsigned r = exact_isqrt(radicand_); r != 0) {
        rat_ += irr_ * Rational(static_cast<long>(r));
        irr_ = Rational();
    }
}

QuadScalar QuadScalar::inv_sqrt(unsigned s)
{
    if (s < 2) throw std::invalid_argument("inv_sqrt needs s >= 2");
    // 1/sqrt(s) = (1/s) sqrt(s)
    return QuadScalar(Rational(), Rational(1, static_cast<long>(s)), s);
}

QuadScalar QuadScalar::sqrt(unsigned s) { return QuadScalar(Rational(), Rational(1), s); }

unsigned QuadScalar::merged_radicand(const QuadScalar& o) const
{
    if (irr_.sign() == 0) return o.radicand_ != 0 ? o.radicand_ : radicand_;
    if (o.irr_.sign() == 0) return radicand_;
    if (radicand_ != o.radicand_)
        throw std::invalid_argument("mixing sqrt(" + std::to_string(radicand_) + ") and sqrt(" +
                                    std::to_string(o.radicand_) + ")");
    return radicand_;
}

QuadScalar& QuadScalar::operator+=(const QuadScalar& o)
{
    radicand_ = merged_radicand(o);
    rat_ += o.rat_;
    if (o.irr_.sign() != 0) irr_ += o.irr_;
    return *this;
}

QuadScalar& QuadScalar::operator-=(const QuadScalar& o)
{
    radicand_ = merged_radicand(o);
    rat_ -= o.rat_;
    if (o.irr_.sign() != 0) irr_ -= o.irr_;
    return *this;
}

QuadScalar& QuadScalar::operator*=(const QuadScalar& o)
{
    if (&o == this) return *this *= QuadScalar(o);
    const unsigned r = merged_radicand(o);
    const bool lhs_rat = irr_.sign() == 0;
    const bool rhs_rat = o.irr_.sign() == 0;
    if (lhs_rat && rhs_rat) {
        rat_ *= o.rat_;
    } else if (rhs_rat) {
        rat_ *= o.rat_;
        irr_ *= o.rat_;
    } else if (lhs_rat) {
        irr_ = rat_ * o.irr_;
        rat_ *= o.rat_;
    } else {
        // (a + b√r)(c + d√r) = (ac + bdr) + (ad + bc)√r
        const Rational a = rat_;
        rat_ = a * o.rat_ + irr_ * o.irr_ * Rational(static_cast<long>(r));
        irr_ = a * o.irr_ + irr_ * o.rat_;
    }
    radicand_ = r;
    return *this;
}

QuadScalar QuadScalar::operator-() const
{
    QuadScalar out = *this;
    out.rat_ = -out.rat_;
    out.irr_ = -out.irr_;
    return out;
}

QuadScalar QuadScalar::inverse() const
{
    if (is_zero()) throw DivisionByZero("inverse of exact zero");
    if (is_rational()) return QuadScalar(Rational(1) / rat_);
    // (a - b√r) / (a^2 - r b^2); the norm is nonzero because r is not a square.
    const Rational norm = rat_ * rat_ - irr_ * irr_ * Rational(static_cast<long>(radicand_));
    return QuadScalar(rat_ / norm, -irr_ / norm, radicand_);
}

bool operator==(const QuadScalar& a, const QuadScalar& b)
{
    if (!(a.rat_ == b.rat_) || !(a.irr_ == b.irr_)) return false;
    return a.irr_.sign() == 0 || a.radicand_ == b.radicand_;
}

double QuadScalar::to_double() const
{
    double v = rat_.to_double();
    if (irr_.sign() != 0) v += irr_.to_double() * std::sqrt(static_cast<double>(radicand_));
    return v;
}

std::string QuadScalar::str() const
{
    if (is_zero()) return "0";
    std::string out;
    if (rat_.sign() != 0) out = rat_.str();
    if (irr_.sign() != 0) {
        std::string c = irr_.str();
        if (!out.empty() && irr_.sign() > 0) out += '+';
        out += c;
        out += kRadical;
        out += std::to_string(radicand_);
    }
    return out;
}

QuadScalar QuadScalar::parse(std::string_view text, unsigned s)
{
    text = trim(text);
    const auto pos = text.find(kRadical);
    if (pos == std::string_view::npos) return QuadScalar(parse_rational(text));

    std::string_view rad_text = trim(text.substr(pos + kRadical.size()));
    unsigned radicand = 0;
    if (rad_text == "s") {
        radicand = s;
    } else {
        if (rad_text.empty() || rad_text.find_first_not_of("0123456789") != std::string_view::npos)
            throw std::invalid_argument("bad radicand in '" + std::string(text) + "'");
        radicand = static_cast<unsigned>(std::stoul(std::string(rad_text)));
    }
    if (radicand == 0) throw std::invalid_argument("zero radicand");
    if (radicand != s && exact_isqrt(radicand) == 0)
        throw std::invalid_argument("radicand " + std::to_string(radicand) + " does not match s=" + std::to_string(s));

    std::string_view before = trim(text.substr(0, pos));
    // Split "a+c" / "a-c" at the last sign that is not leading.
    std::size_t split = std::string_view::npos;
    for (std::size_t i = before.size(); i-- > 1;) {
        if (before[i] == '+' || before[i] == '-') {
            split = i;
            break;
        }
    }
    mpq_class rat(0);
    std::string_view coef = before;
    if (split != std::string_view::npos) {
        rat = parse_rational(trim(before.substr(0, split)));
        coef = trim(before.substr(split));
    }
    mpq_class irr;
    if (coef.empty() || coef == "+")
        irr = 1;
    else if (coef == "-")
        irr = -1;
    else
        irr = parse_rational(coef);
    return QuadScalar(rat, irr, radicand);
}

std::ostream& operator<<(std::ostream& os, const QuadScalar& q) { return os << q.str(); }

}  // namespace adiclab
