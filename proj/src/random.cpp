#include "adiclab/random.hpp"

namespace adiclab {

long RandomFunctions::integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

LCFunction RandomFunctions::lc()
{
    const auto level = static_cast<unsigned>(integer(0, 2));
    std::vector<QuadScalar> v;
    for (std::uint64_t i = 0; i < ipow(s_, level); ++i) v.emplace_back(integer(-3, 3));
    return LCFunction(s_, level, std::move(v));
}

TreeFunction RandomFunctions::tree(unsigned depth)
{
    std::vector<QuadScalar> v;
    for (std::uint64_t i = 0; i < ball_count(s_, depth); ++i) v.emplace_back(integer(-3, 3));
    return TreeFunction(s_, depth, std::move(v));
}

LCSequence RandomFunctions::sequence(std::size_t len)
{
    LCSequence F;
    for (std::size_t i = 0; i < len; ++i) F.terms.push_back(lc());
    F.limit = lc();
    return F;
}

std::vector<LCFunction> random_lc_functions(unsigned s, std::uint64_t seed, std::size_t count)
{
    RandomFunctions r(s, seed);
    std::vector<LCFunction> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(r.lc());
    return out;
}

}  // namespace adiclab
