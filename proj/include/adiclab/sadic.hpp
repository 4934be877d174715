#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "adiclab/scalar.hpp"

namespace adiclab {

// s^n with overflow check.
std::uint64_t ipow(unsigned s, unsigned n);

// Vertex (n, x) of the s-adic tree: the ball of radius s^-n around x,
// with 0 <= x < s^n. Ordered level-major, center-ascending.
struct Ball {
    unsigned level = 0;
    std::uint64_t center = 0;

    friend auto operator<=>(const Ball&, const Ball&) = default;
    std::string str() const;
};

bool is_valid(const Ball& b, unsigned s);

// Position of b in the level-major enumeration: (s^n - 1)/(s - 1) + x.
std::uint64_t ball_index(const Ball& b, unsigned s);
Ball ball_at(std::uint64_t index, unsigned s);
// Number of balls of level <= depth.
std::uint64_t ball_count(unsigned s, unsigned depth);

// The s balls (n+1, x + l s^n), l = 0..s-1, that partition b.
std::vector<Ball> ball_children(const Ball& b, unsigned s);

// Least non-negative residue of x mod m, for any signed x.
std::uint64_t mod_floor(std::int64_t x, std::uint64_t m);

// Locally constant function on Z_s that only reads x mod s^level.
class LCFunction {
public:
    LCFunction() = default;
    LCFunction(unsigned s, unsigned level, std::vector<QuadScalar> values);

    static LCFunction constant(unsigned s, const QuadScalar& c);
    // Indicator of the ball (n, x).
    static LCFunction indicator(unsigned s, const Ball& b);
    // chi_j: indicator of x mod s == j.
    static LCFunction chi(unsigned s, unsigned j) { return indicator(s, Ball{1, j}); }

    unsigned s() const { return s_; }
    unsigned level() const { return level_; }
    const std::vector<QuadScalar>& values() const { return values_; }

    const QuadScalar& operator()(std::uint64_t x) const { return values_[x % values_.size()]; }
    const QuadScalar& at(std::int64_t x) const { return values_[mod_floor(x, values_.size())]; }

    // Same function tabulated at a finer level (level >= this->level()).
    LCFunction refine(unsigned level) const;

    friend LCFunction operator+(const LCFunction& a, const LCFunction& b);
    friend LCFunction operator-(const LCFunction& a, const LCFunction& b);
    friend LCFunction operator*(const LCFunction& a, const LCFunction& b);
    friend LCFunction operator*(const QuadScalar& c, const LCFunction& f);
    friend bool operator==(const LCFunction& a, const LCFunction& b);

private:
    template <class Op>
    static LCFunction pointwise(const LCFunction& a, const LCFunction& b, Op op);

    unsigned s_ = 2;
    unsigned level_ = 0;
    std::vector<QuadScalar> values_{QuadScalar(0)};
};

// Translation by one: (aU f)(x) = f(x - 1), (bU f)(x) = f(x + 1).
LCFunction endo_aU(const LCFunction& f);
LCFunction endo_bU(const LCFunction& f);
// (aV f)(x) = f(x/s) when s | x, else 0.  (bV f)(x) = f(s x).
LCFunction endo_aV(const LCFunction& f);
LCFunction endo_bV(const LCFunction& f);
// (aS f)(x) = f(floor(x/s)).  (bS f)(x) = (1/s) sum_j f(s x + j).
LCFunction endo_aS(const LCFunction& f);
LCFunction transfer_bS(const LCFunction& f);

// Function on the balls of level <= depth.
class TreeFunction {
public:
    TreeFunction() = default;
    TreeFunction(unsigned s, unsigned depth, std::vector<QuadScalar> values);

    static TreeFunction constant(unsigned s, unsigned depth, const QuadScalar& c);
    // F(n, x) = f(x).
    static TreeFunction lift(const LCFunction& f, unsigned depth);

    unsigned s() const { return s_; }
    unsigned depth() const { return depth_; }
    const std::vector<QuadScalar>& values() const { return values_; }
    const QuadScalar& operator()(const Ball& b) const;

    TreeFunction truncate(unsigned depth) const;
    friend bool operator==(const TreeFunction&, const TreeFunction&) = default;

private:
    unsigned s_ = 2;
    unsigned depth_ = 0;
    std::vector<QuadScalar> values_{QuadScalar(0)};
};

// (aW F)(n, x) = F(n-1, x mod s^(n-1)) for n >= 1 and 0 at the root.
// The result is one level deeper than F.
TreeFunction endo_aW(const TreeFunction& F);
// (bW F)(n, x) = (1/s) sum_j F(n+1, x + j s^n); one level shallower.
TreeFunction transfer_bW(const TreeFunction& F);

// A sequence (f_0, f_1, ...) that equals `limit` from index terms.size() on.
struct LCSequence {
    std::vector<LCFunction> terms;
    LCFunction limit;

    const LCFunction& operator[](std::size_t n) const { return n < terms.size() ? terms[n] : limit; }
};

// (alpha~ F)_n = aU f_{n-1} with a zero first term; (beta~ F)_n = bU f_{n+1}.
LCSequence tilde_alpha_U(const LCSequence& F);
LCSequence tilde_beta_U(const LCSequence& F);

}  // namespace adiclab
