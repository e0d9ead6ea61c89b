#pragma once

#include <cstddef>
#include <string>
#include <vector>
#include "bcns/bits.hpp"
#include "bcns/rng.hpp"

namespace bcns {

// Random binary linear code, stored as its parity-check matrix with one
// BitVec per check (n-k rows of n columns). The reference description is
// x * H with H of shape n x (n-k); we keep the transpose so a syndrome bit
// is a row parity. Same bits either way.
struct LinearCode {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<BitVec> rows;   // n-k rows

    double rate() const { return double(k) / double(n); }
    std::size_t checks() const { return n - k; }
};

LinearCode generate_parity_check(std::size_t n, std::size_t k, Rng& rng);

BitVec syndrome(const LinearCode& code, const BitVec& x);

// Exhaustive minimum distance for n <= 28: enumerate the null space of H.
// Returns n+1 if the only codeword is zero.
std::size_t min_distance_bruteforce(const LinearCode& code);

double binary_entropy(double x);

// Probability bound that a random code of rate R has relative distance
// below delta: 2^((R - (1 - h(delta))) * n), clamped to 1.
double gv_failure_bound(double R, double delta, std::size_t n);

struct CodeParams {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t d_min = 0;   // lower bound
    double rate() const { return double(k) / double(n); }
};

// Concatenation of an outer [n1, R1*n1, d1] code with an inner
// [n2, R2*n2, d2] code.
CodeParams concatenated_params(std::size_t n1, double R1, std::size_t d1,
                               std::size_t n2, double R2, std::size_t d2);

// Code file format: "BCNSCODE", version byte 1, u32 BE n, u32 BE k, packed
// rows (each (n+7)/8 bytes, LSB-first).
void save_code(const std::string& path, const LinearCode& code);
LinearCode load_code(const std::string& path);

// FNV-1a over the serialized form; used in HELLO parameter digests.
std::uint64_t code_digest(const LinearCode& code);

} // namespace bcns
