#include "doctest.h"

#include "bcns/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace bcns;

namespace {

SecurityParams noisy_sp() {
    SecurityParams sp = derive_params_for_n(1e-3, 500, 0.3);
    sp.p_sent_1 = 0.125;
    sp.p_noclick_d = 0.875;
    sp.p_err = 0.03;
    return sp;
}

ExperimentalParams channel_params(double p_noclick, double p_err) {
    ExperimentalParams p;
    p.p_sent_0 = p_noclick;
    p.p_sent_1 = 1.0 - p_noclick;
    p.p_sent_multi = 0.0;
    p.p_noclick_h = p_noclick;
    p.p_noclick_d = p_noclick;
    p.p_err = p_err;
    return p;
}

SessionConfig session_config(const SecurityParams& sp, Rng& code_rng) {
    SessionConfig cfg;
    cfg.wsee.sp = sp;
    auto n = static_cast<std::size_t>(std::llround(sp.n));
    cfg.code = generate_parity_check(n, n / 2, code_rng);
    cfg.l = 16;
    cfg.commit_value = BitVec::parse("1010110011110001");
    return cfg;
}

} // namespace

TEST_CASE("interval endpoints widen outward and clamp") {
    SecurityParams sp;
    sp.p_noclick_h = 0.3125;
    sp.zeta = 0.0625;
    CHECK(missing_lower(sp, 1000) == 250);
    CHECK(missing_upper(sp, 1000) == 375);
    sp.p_noclick_h = 0.05;
    CHECK(missing_lower(sp, 1000) == 0);
    sp.p_noclick_h = 0.95;
    CHECK(missing_upper(sp, 1000) == 1000);

    CHECK(errors_lower(0.1, 0.03, 100) == 7);
    CHECK(errors_upper(0.1, 0.03, 100) == 13);
    CHECK(errors_lower(0.1, 0.3, 100) == 0);
    CHECK(errors_upper(0.9, 0.3, 100) == 100);
    // fractional bounds round away from the interval
    CHECK(errors_lower(0.15, 0.025, 97) == 12);   // 12.125 -> 12
    CHECK(errors_upper(0.15, 0.025, 97) == 17);   // 16.975 -> 17
}

TEST_CASE("uniform truncation keeps a sorted uniform subset") {
    Rng rng(55001);
    std::vector<int> hits(10, 0);
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
        std::vector<std::uint32_t> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
        uniform_truncate(v, 4, rng);
        REQUIRE(v.size() == 4);
        CHECK(std::is_sorted(v.begin(), v.end()));
        for (auto x : v) ++hits[x];
    }
    double expect = 0.4 * trials;
    double sigma = std::sqrt(trials * 0.4 * 0.6);
    for (int i = 0; i < 10; ++i)
        CHECK(std::fabs(hits[i] - expect) < 4.5 * sigma);

    std::vector<std::uint32_t> v{3, 1};
    CHECK_THROWS_AS(uniform_truncate(v, 3, rng), std::invalid_argument);
    std::vector<std::uint32_t> w{5, 2, 8};
    uniform_truncate(w, 3, rng);
    CHECK(w == std::vector<std::uint32_t>({2, 5, 8}));
    uniform_truncate(w, 0, rng);
    CHECK(w.empty());
}

TEST_CASE("truncation consumes one index draw per kept slot") {
    std::vector<std::uint32_t> v;
    for (std::uint32_t i = 0; i < 57; ++i) v.push_back(i);
    Rng r1(909), r2(909);
    std::vector<std::uint32_t> a = v;
    uniform_truncate(a, 12, r1);
    std::vector<std::uint32_t> b = v;
    for (std::size_t i = 0; i < 12; ++i) {
        std::size_t j = i + static_cast<std::size_t>(r2.below(b.size() - i));
        std::swap(b[i], b[j]);
    }
    b.resize(12);
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    CHECK(r1.u64() == r2.u64());
}

TEST_CASE("basis overlap collects matched rounds in order") {
    WseeBob bob;
    bob.theta_tilde = {0, 0, 1, 1};
    bob.x_tilde = BitVec::parse("1010");
    std::vector<std::uint8_t> theta = {0, 1, 1, 0};
    std::vector<std::uint32_t> I;
    BitVec z;
    basis_overlap(bob, theta, I, z);
    CHECK(I == std::vector<std::uint32_t>({0, 2}));
    REQUIRE(z.size() == 2);
    CHECK(z.get(0) == bob.x_tilde.get(0));
    CHECK(z.get(1) == bob.x_tilde.get(2));

    theta.pop_back();
    CHECK_THROWS_AS(basis_overlap(bob, theta, I, z), std::invalid_argument);
}

TEST_CASE("precheck needs enough matched rounds") {
    Rng rng(11);
    std::vector<std::uint32_t> I{4, 9, 13, 20, 31};
    Precheck pc = bob_precheck(I, 6, rng);
    CHECK_FALSE(pc.ok);
    pc = bob_precheck(I, 5, rng);
    CHECK(pc.ok);
    CHECK(pc.I == I);
    pc = bob_precheck(I, 3, rng);
    CHECK(pc.ok);
    REQUIRE(pc.I.size() == 3);
    CHECK(std::is_sorted(pc.I.begin(), pc.I.end()));
    for (auto x : pc.I)
        CHECK(std::find(I.begin(), I.end(), x) != I.end());
}

TEST_CASE("commitment pieces"){
    Rng rng(808);
    LinearCode code = generate_parity_check(40, 20, rng);
    BitVec x = rng.bits(40);
    BitVec c = BitVec::parse("110010");
    Commitment com = bc_commit(x, code, 6, c, rng);
    CHECK(com.w == syndrome(code, x));
    CHECK(one_time_pad(com.e, extract(x, com.seed)) == c);
    CHECK(com.seed.n == 40);
    CHECK(com.seed.l == 6);

    BitVec short_x = rng.bits(39);
    CHECK_THROWS_AS(bc_commit(short_x, code, 6, c, rng), std::invalid_argument);
    CHECK_THROWS_AS(bc_commit(x, code, 5, c, rng), std::invalid_argument);
}

TEST_CASE("verifier decision table on a toy instance") {
    Rng rng(660);
    LinearCode code = generate_parity_check(24, 12, rng);
    BitVec x = rng.bits(24);
    BitVec c = BitVec::parse("01");
    Commitment com = bc_commit(x, code, 2, c, rng);

    std::vector<std::uint32_t> I{0, 3, 5, 11, 17, 22};
    BitVec z(I.size());
    for (std::size_t k = 0; k < I.size(); ++k) z.set(k, x.get(I[k]));

    Verdict v = bob_verify(x, com, code, z, I, 0.0, 0.0);
    CHECK(v.accepted);
    CHECK(v.reason == VerdictReason::ok);
    CHECK(v.opened == c);

    // one bad tested bit exceeds the zero-width interval
    BitVec z_bad = z;
    z_bad.flip(2);
    v = bob_verify(x, com, code, z_bad, I, 0.0, 0.0);
    CHECK_FALSE(v.accepted);
    CHECK(v.reason == VerdictReason::error_count_out_of_interval);
    CHECK(v.opened.size() == 0);

    // a flipped position the syndrome can see
    std::uint32_t probe = 0;
    bool found = false;
    for (std::uint32_t i = 0; i < 24 && !found; ++i) {
        BitVec unit(24);
        unit.set(i, true);
        if (syndrome(code, unit).any()) { probe = i; found = true; }
    }
    REQUIRE(found);
    v = bob_verify(cheating_alice_open(x, {probe}), com, code, z, I, 0.0, 0.0);
    CHECK_FALSE(v.accepted);
    CHECK(v.reason == VerdictReason::syndrome_mismatch);

    CHECK_THROWS_AS(bob_verify(rng.bits(23), com, code, z, I, 0.0, 0.0), std::invalid_argument);
    BitVec z_short(I.size() - 1);
    CHECK_THROWS_AS(bob_verify(x, com, code, z_short, I, 0.0, 0.0), std::invalid_argument);

    CHECK_THROWS_AS(cheating_alice_open(x, {24}), std::invalid_argument);
    BitVec y = cheating_alice_open(x, {1, 2});
    CHECK(y.get(1) != x.get(1));
    CHECK(y.get(2) != x.get(2));
    CHECK(y.get(0) == x.get(0));
}

TEST_CASE("verdict reasons have names") {
    CHECK(std::string(to_string(VerdictReason::ok)) == "ok");
    CHECK(std::string(to_string(VerdictReason::syndrome_mismatch)) == "syndrome_mismatch");
    CHECK(std::string(to_string(VerdictReason::error_count_out_of_interval)) ==
          "error_count_out_of_interval");
    CHECK(std::string(to_string(VerdictReason::too_few_bits)) == "too_few_bits");
    CHECK(std::string(to_string(VerdictReason::missing_rounds_out_of_interval)) ==
          "missing_rounds_out_of_interval");
}

TEST_CASE("erasure stage guard rejects inconsistent parameters") {
    SecurityParams sp;
    sp.epsilon = 1e-3;
    sp.M = 100;
    sp.n = 90;
    sp.zeta = 0.05;
    sp.p_noclick_h = 0.2;
    WseeParams wp;
    wp.sp = sp;
    Rng a(1), b(2), ch(3);
    auto channel = make_experimental_channel(channel_params(0.2, 0.0), ch);
    CHECK_THROWS_AS(wsee_run(wp, channel, a, b), std::logic_error);
}

TEST_CASE("noiseless session opens the committed value and is reproducible") {
    SecurityParams sp = derive_params_for_n(1e-3, 400, 0.0);
    sp.p_err = 0.0;
    Rng code_rng(4242);
    SessionConfig cfg;
    cfg.wsee.sp = sp;
    cfg.code = generate_parity_check(400, 200, code_rng);
    cfg.l = 16;
    cfg.commit_value = BitVec::parse("0011010111100101");

    auto once = [&](SessionResult& out) {
        Rng a(101), b(202), ch(303);
        auto channel = make_experimental_channel(channel_params(0.0, 0.0), ch);
        out = run_session(cfg, channel, a, b);
    };
    SessionResult r1, r2;
    once(r1);
    once(r2);

    CHECK(r1.verdict.accepted);
    CHECK(r1.verdict.reason == VerdictReason::ok);
    CHECK(r1.verdict.opened == cfg.commit_value);
    CHECK(r1.missing == 0);
    CHECK_FALSE(r1.wsee_aborted);
    CHECK_FALSE(r1.precheck_failed);

    CHECK(r2.verdict.accepted == r1.verdict.accepted);
    CHECK(r2.verdict.opened == r1.verdict.opened);
    CHECK(r2.I == r1.I);
    CHECK(r2.z == r1.z);
    CHECK(r2.commitment.w == r1.commitment.w);
    CHECK(r2.commitment.e == r1.commitment.e);
    CHECK(r2.commitment.seed.bits == r1.commitment.seed.bits);
    CHECK(r2.missing == r1.missing);
}

TEST_CASE("honest noisy sessions accept") {
    SecurityParams sp = noisy_sp();
    Rng code_rng(9090);
    SessionConfig cfg = session_config(sp, code_rng);
    int accepted = 0;
    for (int k = 0; k < 10; ++k) {
        Rng a(1000 + k), b(2000 + k), ch(3000 + k);
        auto channel = make_experimental_channel(channel_params(0.3, 0.03), ch);
        SessionResult res = run_session(cfg, channel, a, b);
        if (res.verdict.accepted) {
            ++accepted;
            CHECK(res.verdict.opened == cfg.commit_value);
            CHECK(res.I.size() == static_cast<std::size_t>(std::llround(sp.m)));
        }
    }
    CHECK(accepted == 10);
}

TEST_CASE("a flipped opening is caught by the syndrome") {
    SecurityParams sp = noisy_sp();
    Rng code_rng(9090);
    SessionConfig cfg = session_config(sp, code_rng);
    Rng a(1000), b(2000), ch(3000);
    auto channel = make_experimental_channel(channel_params(0.3, 0.03), ch);
    std::vector<std::uint32_t> flips{7};
    SessionResult res = run_session(cfg, channel, a, b, &flips);
    CHECK_FALSE(res.verdict.accepted);
    CHECK(res.verdict.reason == VerdictReason::syndrome_mismatch);
}

TEST_CASE("channel noisier than declared fails the error test") {
    SecurityParams sp = noisy_sp();
    Rng code_rng(9090);
    SessionConfig cfg = session_config(sp, code_rng);
    Rng a(51), b(52), ch(53);
    auto channel = make_experimental_channel(channel_params(0.3, 0.35), ch);
    SessionResult res = run_session(cfg, channel, a, b);
    CHECK_FALSE(res.verdict.accepted);
    CHECK(res.verdict.reason == VerdictReason::error_count_out_of_interval);
}

TEST_CASE("missing counts far from the declared rate abort the erasure stage") {
    SecurityParams sp = noisy_sp();
    Rng code_rng(9090);
    SessionConfig cfg = session_config(sp, code_rng);
    Rng a(61), b(62), ch(63);
    auto channel = make_experimental_channel(channel_params(0.6, 0.03), ch);
    SessionResult res = run_session(cfg, channel, a, b);
    CHECK(res.wsee_aborted);
    CHECK_FALSE(res.verdict.accepted);
    CHECK(res.verdict.reason == VerdictReason::missing_rounds_out_of_interval);
}

TEST_CASE("session rejects a code that does not fit the block") {
    SecurityParams sp = noisy_sp();
    Rng code_rng(1);
    SessionConfig cfg;
    cfg.wsee.sp = sp;
    cfg.code = generate_parity_check(499, 200, code_rng);
    cfg.l = 8;
    cfg.commit_value = BitVec(8);
    Rng a(1), b(2), ch(3);
    auto channel = make_experimental_channel(channel_params(0.3, 0.03), ch);
    CHECK_THROWS_AS(run_session(cfg, channel, a, b), std::invalid_argument);
}
