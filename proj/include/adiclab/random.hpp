#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "adiclab/sadic.hpp"

namespace adiclab {

// Seeded generator for test data: levels uniform in {0,1,2}, values uniform
// integers in [-3,3].
class RandomFunctions {
public:
    RandomFunctions(unsigned s, std::uint64_t seed) : s_(s), rng_(seed) {}

    LCFunction lc();
    // Independent value per ball up to `depth`.
    TreeFunction tree(unsigned depth);
    // LCSequence with `len` explicit terms and a random limit.
    LCSequence sequence(std::size_t len);
    long integer(long lo, long hi);

private:
    unsigned s_;
    std::mt19937_64 rng_;
};

// The i-th function of the stream for `seed`.
std::vector<LCFunction> random_lc_functions(unsigned s, std::uint64_t seed, std::size_t count);

}  // namespace adiclab
