#include "bcns/photon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bcns {

void validate(const SourceModel& m) {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (m.r_s < 0 || m.r_bA < 0 || m.r_bB < 0)
        throw std::invalid_argument("SourceModel: negative rate");
    if (!in01(m.eta_A) || !in01(m.eta_B) || !in01(m.p_err) ||
        !in01(m.basis_bias_A) || !in01(m.basis_bias_B) ||
        !in01(m.bit_bias_A) || !in01(m.bit_bias_B))
        throw std::invalid_argument("SourceModel: probability outside [0,1]");
    if (m.tau_c < 0) throw std::invalid_argument("SourceModel: negative tau_c");
}

SessionStreams simulate_session(const SourceModel& model, double duration, Rng& rng) {
    validate(model);
    if (!(duration > 0))
        throw std::invalid_argument("simulate_session: duration must be positive");

    SessionStreams out;

    // pair process
    if (model.r_s > 0) {
        for (double t = rng.exponential(model.r_s); t < duration;
             t += rng.exponential(model.r_s)) {
            ++out.pairs_emitted;
            bool at_A = rng.bernoulli(model.eta_A);
            bool at_B = rng.bernoulli(model.eta_B);
            if (!at_A && !at_B) continue;
            // singlet outcomes: anticorrelated in a shared basis frame, so a
            // matched-basis comparison disagrees only via the p_err flip.
            // We store Bob's bit already conjugated, i.e. matched bases agree
            // up to p_err, which is the convention the protocol consumes.
            std::uint8_t a_bit = std::uint8_t(rng.bernoulli(0.5));
            std::uint8_t a_th = std::uint8_t(rng.bernoulli(model.basis_bias_A));
            std::uint8_t b_th = std::uint8_t(rng.bernoulli(model.basis_bias_B));
            std::uint8_t b_bit;
            if (a_th == b_th)
                b_bit = std::uint8_t(a_bit ^ rng.bernoulli(model.p_err));
            else
                b_bit = std::uint8_t(rng.bernoulli(0.5));
            if (at_A) out.alice.push_back({t, Side::A, a_bit, a_th, Origin::pair});
            if (at_B) out.bob.push_back({t, Side::B, b_bit, b_th, Origin::pair});
        }
    }

    auto add_background = [&](std::vector<DetectionEvent>& stream, double rate,
                              Side side, double basis_bias, double bit_bias) {
        if (rate <= 0) return;
        for (double t = rng.exponential(rate); t < duration; t += rng.exponential(rate))
            stream.push_back({t, side,
                              std::uint8_t(rng.bernoulli(bit_bias)),
                              std::uint8_t(rng.bernoulli(basis_bias)),
                              Origin::background});
    };
    add_background(out.alice, model.r_bA, Side::A, model.basis_bias_A, model.bit_bias_A);
    add_background(out.bob, model.r_bB, Side::B, model.basis_bias_B, model.bit_bias_B);

    auto by_time = [](const DetectionEvent& a, const DetectionEvent& b) {
        return a.timestamp < b.timestamp;
    };
    std::sort(out.alice.begin(), out.alice.end(), by_time);
    std::sort(out.bob.begin(), out.bob.end(), by_time);
    return out;
}

static void check_sorted(const std::vector<DetectionEvent>& s, const char* who) {
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i].timestamp < s[i - 1].timestamp)
            throw std::invalid_argument(std::string("match_coincidences: ") + who +
                                        " stream not time-sorted");
}

CoincidenceResult match_coincidences(const std::vector<DetectionEvent>& alice,
                                     const std::vector<DetectionEvent>& bob,
                                     double tau_c) {
    if (!(tau_c > 0))
        throw std::invalid_argument("match_coincidences: tau_c must be positive");
    check_sorted(alice, "alice");
    check_sorted(bob, "bob");

    const double half = tau_c / 2;
    CoincidenceResult res;
    std::size_t j = 0;
    std::vector<bool> b_used(bob.size(), false);
    for (std::size_t i = 0; i < alice.size(); ++i) {
        const double t = alice[i].timestamp;
        while (j < bob.size() && (b_used[j] || bob[j].timestamp < t - half)) ++j;
        // bob[j] is now the earliest unused event with timestamp >= t - half
        if (j < bob.size() && bob[j].timestamp - t <= half) {
            b_used[j] = true;
            res.pairs.push_back({i, j});
        } else {
            res.alice_only.push_back(i);
        }
    }
    return res;
}

double displaced_window_rate(const std::vector<DetectionEvent>& alice,
                             const std::vector<DetectionEvent>& bob,
                             double tau_c, double tau_d, double duration) {
    if (!(duration > 0))
        throw std::invalid_argument("displaced_window_rate: duration must be positive");
    std::vector<DetectionEvent> shifted = bob;
    for (auto& e : shifted) e.timestamp += tau_d;
    auto res = match_coincidences(alice, shifted, tau_c);
    return double(res.pairs.size()) / duration;
}

SourceRates measure_rates(const SessionStreams& s, double duration, double tau_c,
                          double tau_d) {
    if (!(duration > 0))
        throw std::invalid_argument("measure_rates: duration must be positive");
    SourceRates r;
    r.r_A = double(s.alice.size()) / duration;
    r.r_B = double(s.bob.size()) / duration;
    r.r_p = double(match_coincidences(s.alice, s.bob, tau_c).pairs.size()) / duration;
    r.tau_c = tau_c;
    r.tau_d = tau_d;
    return r;
}

RoundRecord round_channel(const ExperimentalParams& params,
                          std::uint8_t alice_bit, std::uint8_t alice_basis,
                          Rng& rng) {
    if (std::isnan(params.p_err))
        throw std::invalid_argument("round_channel: p_err not set");
    RoundRecord rec;
    if (rng.bernoulli(params.p_noclick_h)) return rec;
    rec.bob_click = true;
    rec.bob_basis = std::uint8_t(rng.bernoulli(0.5));
    if (rec.bob_basis == (alice_basis & 1))
        rec.bob_bit = std::uint8_t((alice_bit & 1) ^ rng.bernoulli(params.p_err));
    else
        rec.bob_bit = std::uint8_t(rng.bernoulli(0.5));
    return rec;
}

} // namespace bcns
