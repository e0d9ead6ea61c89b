#include "doctest.h"

#include "bcns/codes.hpp"
#include "bcns/rng.hpp"

#include <bit>
#include <stdexcept>
#include <cstdio>
#include <string>
#include <vector>

using namespace bcns;

namespace {

// Independent distance oracle: walk all 2^n vectors and test H*v = 0 with
// per-row parities read straight off the stored rows. No elimination, no
// shared code with the implementation.
std::size_t oracle_min_distance(const LinearCode& code) {
    REQUIRE(code.n <= 20);
    std::vector<std::uint32_t> row_masks;
    for (const auto& r : code.rows) {
        std::uint32_t m = 0;
        for (std::size_t j = 0; j < code.n; ++j)
            if (r.get(j)) m |= std::uint32_t(1) << j;
        row_masks.push_back(m);
    }
    std::size_t best = code.n + 1;
    for (std::uint32_t v = 1; v < (std::uint32_t(1) << code.n); ++v) {
        bool in_null = true;
        for (auto m : row_masks)
            if (std::popcount(v & m) & 1) { in_null = false; break; }
        if (in_null) {
            auto w = std::size_t(std::popcount(v));
            if (w < best) best = w;
        }
    }
    return best;
}

} // namespace

TEST_CASE("brute-force distance agrees with exhaustive enumeration") {
    Rng rng(314159);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 6 + rng.below(11);           // 6..16
        std::size_t k = 1 + rng.below(n - 1);        // 1..n-1
        LinearCode c = generate_parity_check(n, k, rng);
        CHECK(min_distance_bruteforce(c) == oracle_min_distance(c));
    }
}

TEST_CASE("distance of a full-rank square check matrix is the empty sentinel") {
    // k = 0 cannot come out of the generator, but the struct admits it and
    // the null space is then trivial
    LinearCode c;
    c.n = 5;
    c.k = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        BitVec row(5);
        row.set(i, true);
        c.rows.push_back(row);
    }
    CHECK(min_distance_bruteforce(c) == 6);
    CHECK(oracle_min_distance(c) == 6);
}

TEST_CASE("distance brute force refuses large n") {
    LinearCode c;
    c.n = 29;
    c.k = 1;
    CHECK_THROWS_AS(min_distance_bruteforce(c), std::invalid_argument);
}

TEST_CASE("syndrome is linear and sized by the check count") {
    Rng rng(99);
    LinearCode c = generate_parity_check(40, 17, rng);
    CHECK(c.checks() == 23);
    CHECK(c.rate() == doctest::Approx(17.0 / 40.0));
    for (int i = 0; i < 20; ++i) {
        BitVec x = rng.bits(40), y = rng.bits(40);
        BitVec sx = syndrome(c, x), sy = syndrome(c, y);
        CHECK(syndrome(c, x ^ y) == (sx ^ sy));
        CHECK(sx.size() == 23);
    }
    BitVec wrong(39);
    CHECK_THROWS_AS(syndrome(c, wrong), std::invalid_argument);
}

TEST_CASE("generator rejects degenerate dimensions") {
    Rng rng(1);
    CHECK_THROWS_AS(generate_parity_check(10, 0, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_parity_check(10, 10, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_parity_check(10, 11, rng), std::invalid_argument);
}

TEST_CASE("binary entropy endpoints and symmetry") {
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_entropy(0.11) == doctest::Approx(binary_entropy(0.89)).epsilon(1e-13));
    CHECK(binary_entropy(0.125) == doctest::Approx(0.5435644431995964).epsilon(1e-12));
    CHECK_THROWS_AS(binary_entropy(-0.01), std::invalid_argument);
    CHECK_THROWS_AS(binary_entropy(1.01), std::invalid_argument);
}

TEST_CASE("random-code failure bound value and clamp") {
    // (0.25 - (1 - h(0.05))) * 100 = -46.36... so the bound is about 1.16e-14
    CHECK(gv_failure_bound(0.25, 0.05, 100) == doctest::Approx(1.157e-14).epsilon(1e-3));
    // positive exponent clamps to one
    CHECK(gv_failure_bound(0.5, 0.125, 16) == 1.0);
    CHECK(gv_failure_bound(0.9, 0.4, 50) == 1.0);
    CHECK_THROWS_AS(gv_failure_bound(0.0, 0.1, 10), std::invalid_argument);
    CHECK_THROWS_AS(gv_failure_bound(0.5, 1.1, 10), std::invalid_argument);
}

TEST_CASE("observed fraction of low-distance codes stays under the bound") {
    // n = 18, k = 6: a weight-1 codeword needs a zero column in the checks,
    // which happens for a fraction well below gv_failure_bound(1/3, 1/18, 18)
    const std::size_t n = 18, k = 6;
    const double bound = gv_failure_bound(double(k) / n, 1.0 / 18.0, n);
    CHECK(bound == doctest::Approx(0.0116).epsilon(0.02));
    Rng rng(271828);
    const int seeds = 4000;
    int low = 0;
    for (int i = 0; i < seeds; ++i) {
        LinearCode c = generate_parity_check(n, k, rng);
        if (min_distance_bruteforce(c) <= 1) ++low;
    }
    CHECK(double(low) / seeds <= bound);
}

TEST_CASE("concatenated parameters multiply through") {
    // [7,4,3] outer with [3,1,3] inner gives [21,4,9]
    CodeParams p = concatenated_params(7, 4.0 / 7.0, 3, 3, 1.0 / 3.0, 3);
    CHECK(p.n == 21);
    CHECK(p.k == 4);
    CHECK(p.d_min == 9);
    CHECK(p.rate() == doctest::Approx(4.0 / 21.0).epsilon(1e-12));

    CodeParams q = concatenated_params(255, 223.0 / 255.0, 33, 8, 0.5, 4);
    CHECK(q.n == 2040);
    CHECK(q.k == 892);
    CHECK(q.d_min == 132);

    CHECK_THROWS_AS(concatenated_params(0, 0.5, 1, 4, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(concatenated_params(4, 1.5, 1, 4, 0.5, 1), std::invalid_argument);
}

TEST_CASE("code files round-trip and digest is content-sensitive") {
    Rng rng(5150);
    LinearCode c = generate_parity_check(37, 20, rng);
    const std::string path = "test_code_roundtrip.bcnscode";
    save_code(path, c);
    LinearCode back = load_code(path);
    CHECK(back.n == c.n);
    CHECK(back.k == c.k);
    REQUIRE(back.rows.size() == c.rows.size());
    for (std::size_t i = 0; i < c.rows.size(); ++i)
        CHECK(back.rows[i] == c.rows[i]);
    CHECK(code_digest(back) == code_digest(c));

    LinearCode other = generate_parity_check(37, 20, rng);
    CHECK(code_digest(other) != code_digest(c));
    std::remove(path.c_str());
}

TEST_CASE("code loader rejects damaged files") {
    const std::string path = "test_code_damaged.bcnscode";

    auto write_file = [&](const std::vector<std::uint8_t>& bytes) {
        std::FILE* f = std::fopen(path.c_str(), "wb");
        REQUIRE(f != nullptr);
        std::fwrite(bytes.data(), 1, bytes.size(), f);
        std::fclose(f);
    };

    write_file({'N', 'O', 'P', 'E'});
    CHECK_THROWS_AS(load_code(path), std::runtime_error);

    Rng rng(8);
    LinearCode c = generate_parity_check(16, 8, rng);
    save_code(path, c);
    {
        std::FILE* f = std::fopen(path.c_str(), "rb");
        REQUIRE(f != nullptr);
        std::fseek(f, 0, SEEK_END);
        long sz = std::ftell(f);
        std::fseek(f, 0, SEEK_SET);
        std::vector<std::uint8_t> bytes(static_cast<std::size_t>(sz));
        REQUIRE(std::fread(bytes.data(), 1, bytes.size(), f) == bytes.size());
        std::fclose(f);

        std::vector<std::uint8_t> truncated(bytes.begin(), bytes.end() - 3);
        write_file(truncated);
        CHECK_THROWS_AS(load_code(path), std::runtime_error);

        bytes[8] = 2;   // unsupported version
        write_file(bytes);
        CHECK_THROWS_AS(load_code(path), std::runtime_error);
    }
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_code("no_such_file.bcnscode"), std::runtime_error);
}
