#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>
#include <string>
#include <stdexcept>
#include <bit>

namespace bcns {

// Packed bit string. Bit i lives at word i/64, position i%64; when exported
// to bytes, bit i maps to byte i/8, position i%8 (LSB-first), which is the
// wire and file convention everywhere in this project.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    static BitVec from_bytes(const std::uint8_t* data, std::size_t nbits) {
        BitVec v(nbits);
        for (std::size_t i = 0; i < (nbits + 7) / 8; ++i)
            v.w_[i / 8] |= std::uint64_t(data[i]) << (8 * (i % 8));
        v.mask_tail();
        return v;
    }

    std::size_t size() const { return n_; }
    std::size_t word_count() const { return w_.size(); }
    const std::uint64_t* words() const { return w_.data(); }
    std::uint64_t* words() { return w_.data(); }

    bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(std::size_t i, bool b) {
        std::uint64_t m = std::uint64_t(1) << (i & 63);
        if (b) w_[i >> 6] |= m; else w_[i >> 6] &= ~m;
    }
    void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto w : w_) c += std::popcount(w);
        return c;
    }

    BitVec& operator^=(const BitVec& o) {
        if (o.n_ != n_) throw std::invalid_argument("BitVec xor: length mismatch");
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { a ^= b; return a; }

    bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const BitVec& o) const { return !(*this == o); }

    // parity of the AND with another vector (GF(2) inner product)
    bool dot(const BitVec& o) const {
        if (o.n_ != n_) throw std::invalid_argument("BitVec dot: length mismatch");
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < w_.size(); ++i) acc ^= w_[i] & o.w_[i];
        return std::popcount(acc) & 1;
    }

    bool any() const {
        for (auto w : w_) if (w) return true;
        return false;
    }

    std::vector<std::uint8_t> to_bytes() const {
        std::vector<std::uint8_t> out((n_ + 7) / 8, 0);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = std::uint8_t(w_[i / 8] >> (8 * (i % 8)));
        return out;
    }

    std::string to_string() const {
        std::string s(n_, '0');
        for (std::size_t i = 0; i < n_; ++i) if (get(i)) s[i] = '1';
        return s;
    }

    static BitVec parse(const std::string& s) {
        BitVec v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') v.set(i, true);
            else if (s[i] != '0') throw std::invalid_argument("BitVec parse: not a 01 string");
        }
        return v;
    }

    // keeps bits past size() zero so popcount/dot stay honest
    void mask_tail() {
        if (n_ % 64 && !w_.empty())
            w_.back() &= (std::uint64_t(1) << (n_ % 64)) - 1;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

} // namespace bcns
