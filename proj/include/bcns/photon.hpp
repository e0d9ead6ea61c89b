#pragma once

#include <cstdint>
#include <vector>
#include "bcns/estimate.hpp"
#include "bcns/rng.hpp"

namespace bcns {

// SPDC source and detector model: Poisson pair emissions at r_s, each arm
// thinned by eta, independent Poisson backgrounds, singlet anticorrelation
// with a single averaged flip probability p_err (the per-basis visibilities
// of the reference setup are not modeled separately).
struct SourceModel {
    double r_s = 0;            // pairs per second
    double eta_A = 1, eta_B = 1;
    double r_bA = 0, r_bB = 0; // background events per second
    double tau_c = 0;          // coincidence window, seconds
    double p_err = 0;          // matched-basis flip probability
    double basis_bias_A = 0.5, basis_bias_B = 0.5; // Pr[theta = 1]
    double bit_bias_A = 0.5,   bit_bias_B = 0.5;   // background bit bias
};

enum class Side : std::uint8_t { A = 0, B = 1 };
enum class Origin : std::uint8_t { pair = 0, background = 1 };

struct DetectionEvent {
    double timestamp = 0;  // seconds
    Side side = Side::A;
    std::uint8_t x = 0;
    std::uint8_t theta = 0;
    Origin origin = Origin::pair;  // ground-truth tag, oracle use only
};

struct SessionStreams {
    std::vector<DetectionEvent> alice;
    std::vector<DetectionEvent> bob;
    std::uint64_t pairs_emitted = 0;  // ground truth
};

void validate(const SourceModel& m);

SessionStreams simulate_session(const SourceModel& model, double duration, Rng& rng);

struct CoincidencePair {
    std::size_t a_index;
    std::size_t b_index;
};

struct CoincidenceResult {
    std::vector<CoincidencePair> pairs;
    std::vector<std::size_t> alice_only;  // lost-for-Bob rounds
};

// Greedy earliest-first pairing with |tA - tB| <= tau_c / 2, each event
// used at most once.
CoincidenceResult match_coincidences(const std::vector<DetectionEvent>& alice,
                                     const std::vector<DetectionEvent>& bob,
                                     double tau_c);

// Accidental-rate estimate from a displaced window: count pairings after
// shifting Bob's timestamps by tau_d, divided by duration.
double displaced_window_rate(const std::vector<DetectionEvent>& alice,
                             const std::vector<DetectionEvent>& bob,
                             double tau_c, double tau_d, double duration);

// Measured rates of a simulated session, for feeding estimate_probabilities.
SourceRates measure_rates(const SessionStreams& s, double duration, double tau_c,
                          double tau_d = 0);

// Fast per-round channel for protocol-scale runs: collapses the physics to
// the per-round probabilities. Bob fails to click with p_noclick_h; on a
// click his basis is uniform and his bit agrees with Alice's on matched
// bases up to a p_err flip, and is uniform otherwise.
struct RoundRecord {
    bool bob_click = false;
    std::uint8_t bob_basis = 0;
    std::uint8_t bob_bit = 0;
};

RoundRecord round_channel(const ExperimentalParams& params,
                          std::uint8_t alice_bit, std::uint8_t alice_basis,
                          Rng& rng);

} // namespace bcns
