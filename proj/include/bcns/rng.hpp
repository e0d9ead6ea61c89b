#pragma once

#include <cstdint>
#include <cmath>
#include <random>
#include <stdexcept>
#include "bcns/bits.hpp"

namespace bcns {

// Seedable RNG used everywhere. All derived draws (doubles, bernoulli,
// exponential gaps) are defined on top of raw u64 output with fixed
// arithmetic, so a seed produces the same stream on every platform and in
// both in-process and networked runs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t u64() { return eng_(); }

    // uniform in [0,1), 53 bits
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // unbiased integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below(0)");
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do { v = eng_(); } while (v >= limit);
        return v % n;
    }

    // exponential interarrival gap for a Poisson process of the given rate
    double exponential(double rate) {
        if (rate <= 0) throw std::invalid_argument("Rng::exponential: rate must be positive");
        return -std::log1p(-uniform()) / rate;
    }

    BitVec bits(std::size_t n) {
        BitVec v(n);
        for (std::size_t i = 0; i < v.word_count(); ++i) v.words()[i] = eng_();
        v.mask_tail();
        return v;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace bcns
