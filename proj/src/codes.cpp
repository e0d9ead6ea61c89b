#include "bcns/codes.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace bcns {

LinearCode generate_parity_check(std::size_t n, std::size_t k, Rng& rng) {
    if (k == 0 || k >= n)
        throw std::invalid_argument("generate_parity_check: need 0 < k < n");
    LinearCode c;
    c.n = n;
    c.k = k;
    c.rows.reserve(n - k);
    for (std::size_t i = 0; i < n - k; ++i) c.rows.push_back(rng.bits(n));
    return c;
}

BitVec syndrome(const LinearCode& code, const BitVec& x) {
    if (x.size() != code.n)
        throw std::invalid_argument("syndrome: input length != code.n");
    BitVec w(code.rows.size());
    for (std::size_t j = 0; j < code.rows.size(); ++j)
        w.set(j, code.rows[j].dot(x));
    return w;
}

std::size_t min_distance_bruteforce(const LinearCode& code) {
    if (code.n > 28)
        throw std::invalid_argument("min_distance_bruteforce: n > 28");
    const std::size_t n = code.n;

    // Gaussian elimination on H packed into one word per row.
    std::vector<std::uint32_t> rows;
    for (const auto& r : code.rows) {
        std::uint32_t w = std::uint32_t(r.words()[0] & ((std::uint64_t(1) << n) - 1));
        if (w) rows.push_back(w);
    }
    std::vector<int> pivot_of_row;
    std::vector<bool> is_pivot(n, false);
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
        std::size_t sel = r;
        while (sel < rows.size() && !((rows[sel] >> col) & 1)) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != r && ((rows[i] >> col) & 1)) rows[i] ^= rows[r];
        pivot_of_row.push_back(int(col));
        is_pivot[col] = true;
        ++r;
    }
    rows.resize(r);

    // Null-space basis: one vector per free column.
    std::vector<std::uint32_t> basis;
    for (std::size_t col = 0; col < n; ++col) {
        if (is_pivot[col]) continue;
        std::uint32_t v = std::uint32_t(1) << col;
        for (std::size_t i = 0; i < r; ++i)
            if ((rows[i] >> col) & 1) v |= std::uint32_t(1) << pivot_of_row[i];
        basis.push_back(v);
    }
    if (basis.empty()) return n + 1;
    if (basis.size() > 28)
        throw std::invalid_argument("min_distance_bruteforce: null space too large");

    // Walk the span in Gray-code order.
    std::uint32_t cur = 0;
    std::size_t best = n + 1;
    const std::uint64_t total = std::uint64_t(1) << basis.size();
    for (std::uint64_t i = 1; i < total; ++i) {
        cur ^= basis[std::countr_zero(i)];
        std::size_t w = std::size_t(std::popcount(cur));
        if (w < best) best = w;
    }
    return best;
}

double binary_entropy(double x) {
    if (x < 0.0 || x > 1.0)
        throw std::invalid_argument("binary_entropy: argument outside [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double gv_failure_bound(double R, double delta, std::size_t n) {
    if (delta < 0.0 || delta > 1.0 || R <= 0.0 || R >= 1.0)
        throw std::invalid_argument("gv_failure_bound: bad R or delta");
    double exponent = (R - (1.0 - binary_entropy(delta))) * double(n);
    double v = std::exp2(exponent);
    return v > 1.0 ? 1.0 : v;
}

CodeParams concatenated_params(std::size_t n1, double R1, std::size_t d1,
                               std::size_t n2, double R2, std::size_t d2) {
    if (n1 == 0 || n2 == 0 || R1 <= 0 || R2 <= 0 || R1 > 1 || R2 > 1)
        throw std::invalid_argument("concatenated_params: bad component parameters");
    CodeParams out;
    out.n = n1 * n2;
    out.k = std::size_t(std::llround(R1 * R2 * double(n1) * double(n2)));
    out.d_min = d1 * d2;
    return out;
}

static void put_u32_be(std::vector<std::uint8_t>& buf, std::uint32_t v) {
    buf.push_back(std::uint8_t(v >> 24));
    buf.push_back(std::uint8_t(v >> 16));
    buf.push_back(std::uint8_t(v >> 8));
    buf.push_back(std::uint8_t(v));
}

static std::uint32_t get_u32_be(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

static std::vector<std::uint8_t> code_bytes(const LinearCode& code) {
    std::vector<std::uint8_t> buf;
    const char magic[] = "BCNSCODE";
    buf.insert(buf.end(), magic, magic + 8);
    buf.push_back(1);
    put_u32_be(buf, std::uint32_t(code.n));
    put_u32_be(buf, std::uint32_t(code.k));
    for (const auto& r : code.rows) {
        auto b = r.to_bytes();
        buf.insert(buf.end(), b.begin(), b.end());
    }
    return buf;
}

void save_code(const std::string& path, const LinearCode& code) {
    auto buf = code_bytes(code);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("save_code: cannot open " + path);
    f.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
    if (!f) throw std::runtime_error("save_code: write failed on " + path);
}

LinearCode load_code(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_code: cannot open " + path);
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
    if (buf.size() < 17 || std::memcmp(buf.data(), "BCNSCODE", 8) != 0)
        throw std::runtime_error("load_code: bad header in " + path);
    if (buf[8] != 1)
        throw std::runtime_error("load_code: unsupported version");
    LinearCode c;
    c.n = get_u32_be(buf.data() + 9);
    c.k = get_u32_be(buf.data() + 13);
    if (c.k == 0 || c.k >= c.n)
        throw std::runtime_error("load_code: invalid (n, k)");
    std::size_t row_bytes = (c.n + 7) / 8;
    if (buf.size() != 17 + row_bytes * (c.n - c.k))
        throw std::runtime_error("load_code: truncated file");
    for (std::size_t i = 0; i < c.n - c.k; ++i)
        c.rows.push_back(BitVec::from_bytes(buf.data() + 17 + i * row_bytes, c.n));
    return c;
}

std::uint64_t code_digest(const LinearCode& code) {
    auto buf = code_bytes(code);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto b : buf) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace bcns
