#include "bcns/hashing.hpp"

#include <bit>
#include <stdexcept>

namespace bcns {

HashSeed sample_hash_seed(std::size_t n, std::size_t l, Rng& rng) {
    if (l < 1) throw std::invalid_argument("sample_hash_seed: l must be >= 1");
    if (l > n) throw std::invalid_argument("sample_hash_seed: l > n");
    HashSeed s;
    s.n = n;
    s.l = l;
    s.bits = rng.bits(n + l - 1);
    return s;
}

BitVec extract(const BitVec& x, const HashSeed& seed) {
    if (x.size() != seed.n)
        throw std::invalid_argument("extract: input length != seed.n");
    if (seed.bits.size() != seed.n + seed.l - 1)
        throw std::invalid_argument("extract: seed bit count inconsistent");

    // Row i of T is seed.bits[n-1+i], seed.bits[n-2+i], ..., seed.bits[i].
    // In the reversed seed u (u[p] = bits[n+l-2-p]) that row is the
    // contiguous window starting at l-1-i, so each output bit is a dot
    // product of x with a shifted window of u, done word by word.
    const std::size_t n = seed.n, l = seed.l;
    BitVec u(n + l - 1);
    for (std::size_t p = 0; p < n + l - 1; ++p)
        u.set(p, seed.bits.get(n + l - 2 - p));
    // padded word array so window reads never run off the end
    std::vector<std::uint64_t> uw(u.words(), u.words() + u.word_count());
    uw.push_back(0);

    const std::uint64_t* xw = x.words();
    const std::size_t nw = x.word_count();
    BitVec out(l);
    for (std::size_t i = 0; i < l; ++i) {
        const std::size_t off = l - 1 - i;
        const std::size_t q = off >> 6, r = off & 63;
        std::uint64_t acc = 0;
        if (r == 0) {
            for (std::size_t wi = 0; wi < nw; ++wi) acc ^= xw[wi] & uw[q + wi];
        } else {
            for (std::size_t wi = 0; wi < nw; ++wi)
                acc ^= xw[wi] & ((uw[q + wi] >> r) | (uw[q + wi + 1] << (64 - r)));
        }
        // the last x word is already tail-masked, so no overhang correction
        out.set(i, std::popcount(acc) & 1);
    }
    return out;
}

BitVec one_time_pad(const BitVec& c, const BitVec& d) {
    if (c.size() != d.size())
        throw std::invalid_argument("one_time_pad: length mismatch");
    return c ^ d;
}

} // namespace bcns
