#pragma once

#include <cstddef>
#include "bcns/bits.hpp"
#include "bcns/rng.hpp"

namespace bcns {

// Seed of a Toeplitz hash T: {0,1}^n -> {0,1}^l. bits holds the n+l-1
// diagonal values; T[i][j] = bits[i - j + n - 1]. The family is exactly
// 2-universal.
struct HashSeed {
    std::size_t n = 0;
    std::size_t l = 0;
    BitVec bits;
};

HashSeed sample_hash_seed(std::size_t n, std::size_t l, Rng& rng);

// D = T(seed) * x over GF(2). Linear in x for a fixed seed.
BitVec extract(const BitVec& x, const HashSeed& seed);

// Bitwise XOR of equal-length strings; involution.
BitVec one_time_pad(const BitVec& c, const BitVec& d);

} // namespace bcns
