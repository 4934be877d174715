#include "adiclab/sadic.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace adiclab {

std::uint64_t ipow(unsigned s, unsigned n)
{
    std::uint64_t r = 1;
    for (unsigned i = 0; i < n; ++i) {
        if (r > std::numeric_limits<std::uint64_t>::max() / s) throw std::overflow_error("s^n overflows 64 bits");
        r *= s;
    }
    return r;
}

std::string Ball::str() const { return "(" + std::to_string(level) + "," + std::to_string(center) + ")"; }

bool is_valid(const Ball& b, unsigned s) { return s >= 2 && b.center < ipow(s, b.level); }

std::uint64_t ball_count(unsigned s, unsigned depth) { return (ipow(s, depth + 1) - 1) / (s - 1); }

std::uint64_t ball_index(const Ball& b, unsigned s) { return (ipow(s, b.level) - 1) / (s - 1) + b.center; }

Ball ball_at(std::uint64_t index, unsigned s)
{
    unsigned n = 0;
    std::uint64_t width = 1;
    while (index >= width) {
        index -= width;
        width *= s;
        ++n;
    }
    return Ball{n, index};
}

std::vector<Ball> ball_children(const Ball& b, unsigned s)
{
    if (!is_valid(b, s)) throw std::invalid_argument("invalid ball " + b.str());
    const std::uint64_t step = ipow(s, b.level);
    std::vector<Ball> out;
    out.reserve(s);
    for (unsigned l = 0; l < s; ++l) out.push_back(Ball{b.level + 1, b.center + l * step});
    return out;
}

std::uint64_t mod_floor(std::int64_t x, std::uint64_t m)
{
    const auto mm = static_cast<std::int64_t>(m);
    std::int64_t r = x % mm;
    if (r < 0) r += mm;
    return static_cast<std::uint64_t>(r);
}

// --- LCFunction -----------------------------------------------------------

LCFunction::LCFunction(unsigned s, unsigned level, std::vector<QuadScalar> values)
    : s_(s), level_(level), values_(std::move(values))
{
    if (s < 2) throw std::invalid_argument("s must be >= 2");
    if (values_.size() != ipow(s, level))
        throw std::invalid_argument("LCFunction of level " + std::to_string(level) + " needs " +
                                    std::to_string(ipow(s, level)) + " values");
}

LCFunction LCFunction::constant(unsigned s, const QuadScalar& c) { return LCFunction(s, 0, {c}); }

LCFunction LCFunction::indicator(unsigned s, const Ball& b)
{
    if (!is_valid(b, s)) throw std::invalid_argument("invalid ball " + b.str());
    std::vector<QuadScalar> v(ipow(s, b.level), QuadScalar(0));
    v[b.center] = QuadScalar(1);
    return LCFunction(s, b.level, std::move(v));
}

LCFunction LCFunction::refine(unsigned level) const
{
    if (level < level_) throw std::invalid_argument("refine cannot coarsen");
    if (level == level_) return *this;
    const std::uint64_t n = ipow(s_, level);
    std::vector<QuadScalar> v;
    v.reserve(n);
    for (std::uint64_t x = 0; x < n; ++x) v.push_back((*this)(x));
    return LCFunction(s_, level, std::move(v));
}

template <class Op>
LCFunction LCFunction::pointwise(const LCFunction& a, const LCFunction& b, Op op)
{
    if (a.s_ != b.s_) throw std::invalid_argument("LCFunctions over different s");
    const unsigned level = std::max(a.level_, b.level_);
    const std::uint64_t n = ipow(a.s_, level);
    std::vector<QuadScalar> v;
    v.reserve(n);
    for (std::uint64_t x = 0; x < n; ++x) v.push_back(op(a(x), b(x)));
    return LCFunction(a.s_, level, std::move(v));
}

LCFunction operator+(const LCFunction& a, const LCFunction& b)
{
    return LCFunction::pointwise(a, b, [](const QuadScalar& x, const QuadScalar& y) { return x + y; });
}

LCFunction operator-(const LCFunction& a, const LCFunction& b)
{
    return LCFunction::pointwise(a, b, [](const QuadScalar& x, const QuadScalar& y) { return x - y; });
}

LCFunction operator*(const LCFunction& a, const LCFunction& b)
{
    return LCFunction::pointwise(a, b, [](const QuadScalar& x, const QuadScalar& y) { return x * y; });
}

LCFunction operator*(const QuadScalar& c, const LCFunction& f)
{
    std::vector<QuadScalar> v = f.values_;
    for (auto& x : v) x *= c;
    return LCFunction(f.s_, f.level_, std::move(v));
}

bool operator==(const LCFunction& a, const LCFunction& b)
{
    if (a.s_ != b.s_) return false;
    const unsigned level = std::max(a.level_, b.level_);
    const std::uint64_t n = ipow(a.s_, level);
    for (std::uint64_t x = 0; x < n; ++x)
        if (!(a(x) == b(x))) return false;
    return true;
}

// --- endomorphisms and transfers --------------------------------------------

LCFunction endo_aU(const LCFunction& f)
{
    const std::uint64_t n = f.values().size();
    std::vector<QuadScalar> v;
    v.reserve(n);
    for (std::uint64_t x = 0; x < n; ++x) v.push_back(f((x + n - 1) % n));
    return LCFunction(f.s(), f.level(), std::move(v));
}

LCFunction endo_bU(const LCFunction& f)
{
    const std::uint64_t n = f.values().size();
    std::vector<QuadScalar> v;
    v.reserve(n);
    for (std::uint64_t x = 0; x < n; ++x) v.push_back(f((x + 1) % n));
    return LCFunction(f.s(), f.level(), std::move(v));
}

LCFunction endo_aV(const LCFunction& f)
{
    const unsigned s = f.s();
    const std::uint64_t n = ipow(s, f.level() + 1);
    std::vector<QuadScalar> v;
    v.reserve(n);
    for (std::uint64_t x = 0; x < n; ++x) v.push_back(x % s == 0 ? f(x / s) : QuadScalar(0));
    return LCFunction(s, f.level() + 1, std::move(v));
}

LCFunction endo_bV(const LCFunction& f)
{
    const LCFunction g = f.level() == 0 ? f.refine(1) : f;
    const unsigned s = g.s();
    const std::uint64_t n = ipow(s, g.level() - 1);
    std::vector<QuadScalar> v;
    v.reserve(n);
    for (std::uint64_t x = 0; x < n; ++x) v.push_back(g(s * x));
    return LCFunction(s, g.level() - 1, std::move(v));
}

LCFunction endo_aS(const LCFunction& f)
{
    const unsigned s = f.s();
    const std::uint64_t n = ipow(s, f.level() + 1);
    std::vector<QuadScalar> v;
    v.reserve(n);
    for (std::uint64_t x = 0; x < n; ++x) v.push_back(f(x / s));
    return LCFunction(s, f.level() + 1, std::move(v));
}

LCFunction transfer_bS(const LCFunction& f)
{
    if (f.level() == 0) return f;
    const unsigned s = f.s();
    const std::uint64_t n = ipow(s, f.level() - 1);
    const QuadScalar w(mpq_class(1, s));
    std::vector<QuadScalar> v;
    v.reserve(n);
    for (std::uint64_t x = 0; x < n; ++x) {
        QuadScalar acc;
        for (unsigned j = 0; j < s; ++j) acc += f(s * x + j);
        v.push_back(acc * w);
    }
    return LCFunction(s, f.level() - 1, std::move(v));
}

// --- TreeFunction -------------------------------------------------------------

TreeFunction::TreeFunction(unsigned s, unsigned depth, std::vector<QuadScalar> values)
    : s_(s), depth_(depth), values_(std::move(values))
{
    if (s < 2) throw std::invalid_argument("s must be >= 2");
    if (values_.size() != ball_count(s, depth))
        throw std::invalid_argument("TreeFunction of depth " + std::to_string(depth) + " needs " +
                                    std::to_string(ball_count(s, depth)) + " values");
}

TreeFunction TreeFunction::constant(unsigned s, unsigned depth, const QuadScalar& c)
{
    return TreeFunction(s, depth, std::vector<QuadScalar>(ball_count(s, depth), c));
}

TreeFunction TreeFunction::lift(const LCFunction& f, unsigned depth)
{
    const std::uint64_t n = ball_count(f.s(), depth);
    std::vector<QuadScalar> v;
    v.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) v.push_back(f(ball_at(i, f.s()).center));
    return TreeFunction(f.s(), depth, std::move(v));
}

const QuadScalar& TreeFunction::operator()(const Ball& b) const
{
    if (b.level > depth_) throw std::out_of_range("ball " + b.str() + " below tree function depth");
    return values_[ball_index(b, s_)];
}

TreeFunction TreeFunction::truncate(unsigned depth) const
{
    if (depth > depth_) throw std::invalid_argument("truncate cannot deepen");
    return TreeFunction(s_, depth, std::vector<QuadScalar>(values_.begin(), values_.begin() + ball_count(s_, depth)));
}

TreeFunction endo_aW(const TreeFunction& F)
{
    const unsigned s = F.s();
    const unsigned depth = F.depth() + 1;
    const std::uint64_t n = ball_count(s, depth);
    std::vector<QuadScalar> v;
    v.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const Ball b = ball_at(i, s);
        if (b.level == 0)
            v.emplace_back(0);
        else
            v.push_back(F(Ball{b.level - 1, b.center % ipow(s, b.level - 1)}));
    }
    return TreeFunction(s, depth, std::move(v));
}

TreeFunction transfer_bW(const TreeFunction& F)
{
    if (F.depth() == 0) throw std::invalid_argument("transfer_bW needs depth >= 1");
    const unsigned s = F.s();
    const unsigned depth = F.depth() - 1;
    const std::uint64_t n = ball_count(s, depth);
    const QuadScalar w(mpq_class(1, s));
    std::vector<QuadScalar> v;
    v.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const Ball b = ball_at(i, s);
        const std::uint64_t step = ipow(s, b.level);
        QuadScalar acc;
        for (unsigned j = 0; j < s; ++j) acc += F(Ball{b.level + 1, b.center + j * step});
        v.push_back(acc * w);
    }
    return TreeFunction(s, depth, std::move(v));
}

LCSequence tilde_alpha_U(const LCSequence& F)
{
    LCSequence out;
    out.terms.push_back(LCFunction::constant(F.limit.s(), QuadScalar(0)));
    for (const auto& f : F.terms) out.terms.push_back(endo_aU(f));
    out.limit = endo_aU(F.limit);
    return out;
}

LCSequence tilde_beta_U(const LCSequence& F)
{
    LCSequence out;
    for (std::size_t n = 1; n < F.terms.size(); ++n) out.terms.push_back(endo_bU(F.terms[n]));
    out.limit = endo_bU(F.limit);
    return out;
}

}  // namespace adiclab
