#include "bcns/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bcns {

ChannelFn make_experimental_channel(const ExperimentalParams& params, Rng& rng) {
    return [params, &rng](std::uint8_t bit, std::uint8_t basis) {
        return round_channel(params, bit, basis, rng);
    };
}

std::int64_t missing_lower(const SecurityParams& sp, std::int64_t rounds) {
    double lo = (sp.p_noclick_h - sp.zeta) * static_cast<double>(rounds);
    auto v = static_cast<std::int64_t>(std::floor(lo));
    return std::max<std::int64_t>(v, 0);
}

std::int64_t missing_upper(const SecurityParams& sp, std::int64_t rounds) {
    double hi = (sp.p_noclick_h + sp.zeta) * static_cast<double>(rounds);
    auto v = static_cast<std::int64_t>(std::ceil(hi));
    return std::min<std::int64_t>(v, rounds);
}

void uniform_truncate(std::vector<std::uint32_t>& v, std::size_t k, Rng& rng) {
    if (k > v.size())
        throw std::invalid_argument("cannot truncate below the requested size");
    for (std::size_t i = 0; i < k && i + 1 < v.size(); ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(v.size() - i));
        std::swap(v[i], v[j]);
    }
    v.resize(k);
    std::sort(v.begin(), v.end());
}

WseeRun wsee_run(const WseeParams& params, const ChannelFn& channel, Rng& rng_A, Rng& rng_B) {
    (void)rng_B;   // Bob makes no random choice during the erasure phase
    const SecurityParams& sp = params.sp;
    const auto n = static_cast<std::size_t>(std::llround(sp.n));
    const auto M = static_cast<std::int64_t>(std::ceil(sp.M - 1e-9));
    WseeRun run;
    run.rounds = M;
    if (M - missing_upper(sp, M) < static_cast<std::int64_t>(n))
        throw std::logic_error("round count cannot guarantee n survivors; parameters inconsistent");

    BitVec x_all = rng_A.bits(static_cast<std::size_t>(M));
    BitVec theta_all = rng_A.bits(static_cast<std::size_t>(M));

    std::vector<RoundRecord> records;
    records.reserve(static_cast<std::size_t>(M));
    for (std::int64_t i = 0; i < M; ++i) {
        auto idx = static_cast<std::size_t>(i);
        records.push_back(channel(x_all.get(idx) ? 1 : 0, theta_all.get(idx) ? 1 : 0));
        if (!records.back().bob_click) ++run.missing;
    }

    if (run.missing < missing_lower(sp, M) || run.missing > missing_upper(sp, M)) {
        run.aborted = true;
        run.alice.x = rng_A.bits(n);   // erasure guarantee survives the abort
        return run;
    }

    std::vector<std::uint32_t> survivors;
    survivors.reserve(static_cast<std::size_t>(M - run.missing));
    for (std::int64_t i = 0; i < M; ++i)
        if (records[static_cast<std::size_t>(i)].bob_click)
            survivors.push_back(static_cast<std::uint32_t>(i));
    uniform_truncate(survivors, n, rng_A);
    run.kept = std::move(survivors);

    run.alice.x = BitVec(n);
    run.alice.theta.resize(n);
    run.bob.theta_tilde.resize(n);
    run.bob.x_tilde = BitVec(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t g = run.kept[i];
        run.alice.x.set(i, x_all.get(g));
        run.alice.theta[i] = theta_all.get(g) ? 1 : 0;
        const RoundRecord& rec = records[g];
        run.bob.theta_tilde[i] = rec.bob_basis;
        run.bob.x_tilde.set(i, rec.bob_bit != 0);
    }
    return run;
}

void basis_overlap(const WseeBob& bob, const std::vector<std::uint8_t>& theta,
                   std::vector<std::uint32_t>& I, BitVec& z) {
    if (theta.size() != bob.theta_tilde.size())
        throw std::invalid_argument("basis strings differ in length");
    I.clear();
    for (std::size_t i = 0; i < theta.size(); ++i)
        if (bob.theta_tilde[i] == theta[i])
            I.push_back(static_cast<std::uint32_t>(i));
    z = BitVec(I.size());
    for (std::size_t k = 0; k < I.size(); ++k)
        z.set(k, bob.x_tilde.get(I[k]));
}

Commitment bc_commit(const BitVec& x, const LinearCode& code, std::size_t l,
                     const BitVec& c, Rng& rng) {
    if (x.size() != code.n)
        throw std::invalid_argument("string length does not match the code");
    if (c.size() != l)
        throw std::invalid_argument("committed value must have l bits");
    Commitment com;
    com.w = syndrome(code, x);
    com.seed = sample_hash_seed(x.size(), l, rng);
    com.e = one_time_pad(c, extract(x, com.seed));
    return com;
}

Precheck bob_precheck(const std::vector<std::uint32_t>& I, std::size_t m, Rng& rng_B) {
    Precheck pc;
    if (I.size() < m) return pc;
    std::vector<std::uint32_t> pick = I;
    uniform_truncate(pick, m, rng_B);
    pc.ok = true;
    pc.I = std::move(pick);
    return pc;
}

const char* to_string(VerdictReason r) {
    switch (r) {
    case VerdictReason::ok: return "ok";
    case VerdictReason::syndrome_mismatch: return "syndrome_mismatch";
    case VerdictReason::error_count_out_of_interval: return "error_count_out_of_interval";
    case VerdictReason::too_few_bits: return "too_few_bits";
    case VerdictReason::missing_rounds_out_of_interval: return "missing_rounds_out_of_interval";
    }
    return "unknown";
}

std::int64_t errors_lower(double p_err, double alpha2, std::size_t m) {
    double lo = (p_err - alpha2) * static_cast<double>(m);
    auto v = static_cast<std::int64_t>(std::floor(lo));
    return std::max<std::int64_t>(v, 0);
}

std::int64_t errors_upper(double p_err, double alpha2, std::size_t m) {
    double hi = (p_err + alpha2) * static_cast<double>(m);
    auto v = static_cast<std::int64_t>(std::ceil(hi));
    return std::min<std::int64_t>(v, static_cast<std::int64_t>(m));
}

Verdict bob_verify(const BitVec& x_opened, const Commitment& com, const LinearCode& code,
                   const BitVec& z, const std::vector<std::uint32_t>& I,
                   double p_err, double alpha2) {
    if (x_opened.size() != code.n)
        throw std::invalid_argument("opened string length does not match the code");
    if (z.size() != I.size())
        throw std::invalid_argument("outcome bits must align with the tested positions");
    Verdict v;
    if (syndrome(code, x_opened) != com.w) {
        v.reason = VerdictReason::syndrome_mismatch;
        return v;
    }
    std::int64_t errs = 0;
    for (std::size_t k = 0; k < I.size(); ++k)
        if (x_opened.get(I[k]) != z.get(k)) ++errs;
    if (errs < errors_lower(p_err, alpha2, I.size()) ||
        errs > errors_upper(p_err, alpha2, I.size())) {
        v.reason = VerdictReason::error_count_out_of_interval;
        return v;
    }
    v.accepted = true;
    v.reason = VerdictReason::ok;
    v.opened = one_time_pad(com.e, extract(x_opened, com.seed));
    return v;
}

BitVec cheating_alice_open(const BitVec& x, const std::vector<std::uint32_t>& flips) {
    BitVec y = x;
    for (auto i : flips) {
        if (i >= y.size())
            throw std::invalid_argument("flip position out of range");
        y.flip(i);
    }
    return y;
}

SessionResult run_session(const SessionConfig& cfg, const ChannelFn& channel,
                          Rng& rng_A, Rng& rng_B,
                          const std::vector<std::uint32_t>* flip_open) {
    const SecurityParams& sp = cfg.wsee.sp;
    if (cfg.code.n != static_cast<std::size_t>(std::llround(sp.n)))
        throw std::invalid_argument("code length does not match the derived block length");
    SessionResult res;
    WseeRun run = wsee_run(cfg.wsee, channel, rng_A, rng_B);
    res.rounds = run.rounds;
    res.missing = run.missing;
    if (run.aborted) {
        res.wsee_aborted = true;
        res.verdict.accepted = false;
        res.verdict.reason = VerdictReason::missing_rounds_out_of_interval;
        return res;
    }

    res.commitment = bc_commit(run.alice.x, cfg.code, cfg.l, cfg.commit_value, rng_A);

    std::vector<std::uint32_t> I0;
    BitVec z0;
    basis_overlap(run.bob, run.alice.theta, I0, z0);
    Precheck pc = bob_precheck(I0, static_cast<std::size_t>(std::llround(sp.m)), rng_B);
    if (!pc.ok) {
        res.precheck_failed = true;
        res.verdict.accepted = false;
        res.verdict.reason = VerdictReason::too_few_bits;
        return res;
    }
    res.I = std::move(pc.I);
    res.z = BitVec(res.I.size());
    {
        std::size_t p = 0;
        for (std::size_t k = 0; k < res.I.size(); ++k) {
            while (I0[p] != res.I[k]) ++p;
            res.z.set(k, z0.get(p));
        }
    }

    BitVec x_open = flip_open ? cheating_alice_open(run.alice.x, *flip_open) : run.alice.x;
    res.verdict = bob_verify(x_open, res.commitment, cfg.code, res.z, res.I,
                             sp.p_err, sp.alpha2);
    return res;
}

} // namespace bcns
