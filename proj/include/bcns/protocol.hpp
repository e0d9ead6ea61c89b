#pragma once

#include "bcns/bits.hpp"
#include "bcns/codes.hpp"
#include "bcns/hashing.hpp"
#include "bcns/photon.hpp"
#include "bcns/rng.hpp"
#include "bcns/security.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace bcns {

// One transmission round as seen from Bob's side. The callable owns whatever
// randomness the physics needs; weak-string-erasure itself only injects
// Alice's choices.
using ChannelFn = std::function<RoundRecord(std::uint8_t alice_bit, std::uint8_t alice_basis)>;

ChannelFn make_experimental_channel(const ExperimentalParams& params, Rng& rng);

struct WseeParams {
    SecurityParams sp;
    double delta_t = 0;   // wait inserted before the open phase, seconds
};

struct WseeAlice {
    BitVec x;                          // n bits
    std::vector<std::uint8_t> theta;   // n bases
};

struct WseeBob {
    std::vector<std::uint8_t> theta_tilde;   // n bases
    BitVec x_tilde;                          // n outcome bits
};

struct WseeRun {
    bool aborted = false;
    WseeAlice alice;
    WseeBob bob;
    std::int64_t rounds = 0;                 // M actually executed
    std::int64_t missing = 0;
    std::vector<std::uint32_t> kept;         // disclosed survivor indices, sorted, size n
};

// Erasure phase. Alice draws x^M and theta^M, each round goes through the
// channel, Bob reports his missing rounds, Alice checks the count against
// [(p_noclick_h - zeta)M, (p_noclick_h + zeta)M] (endpoints widened outward)
// and truncates the survivors uniformly to exactly n, disclosing the kept
// set. On abort Alice still outputs a fresh uniform x^n.
WseeRun wsee_run(const WseeParams& params, const ChannelFn& channel, Rng& rng_A, Rng& rng_B);

// Interval endpoints shared by the executable and the transcript replayer.
std::int64_t missing_lower(const SecurityParams& sp, std::int64_t rounds);
std::int64_t missing_upper(const SecurityParams& sp, std::int64_t rounds);

// Keeps a uniform k-subset of v, sorted ascending. One below() draw per slot.
void uniform_truncate(std::vector<std::uint32_t>& v, std::size_t k, Rng& rng);

// Rounds where Bob's basis matched the disclosed one, with his outcome bits
// aligned to the returned index list.
void basis_overlap(const WseeBob& bob, const std::vector<std::uint8_t>& theta,
                   std::vector<std::uint32_t>& I, BitVec& z);

struct Commitment {
    BitVec w;        // syndrome of x
    HashSeed seed;
    BitVec e;        // c XOR extract(x, seed)
};

Commitment bc_commit(const BitVec& x, const LinearCode& code, std::size_t l,
                     const BitVec& c, Rng& rng);

struct Precheck {
    bool ok = false;
    std::vector<std::uint32_t> I;   // uniformly truncated to m, sorted
};

Precheck bob_precheck(const std::vector<std::uint32_t>& I, std::size_t m, Rng& rng_B);

enum class VerdictReason : std::uint8_t {
    ok = 0,
    syndrome_mismatch = 1,
    error_count_out_of_interval = 2,
    too_few_bits = 3,
    missing_rounds_out_of_interval = 4,
};

const char* to_string(VerdictReason r);

struct Verdict {
    bool accepted = false;
    VerdictReason reason = VerdictReason::ok;
    BitVec opened;   // revealed value, set iff accepted
};

// Error interval endpoints on m tested positions, closed and widened outward.
std::int64_t errors_lower(double p_err, double alpha2, std::size_t m);
std::int64_t errors_upper(double p_err, double alpha2, std::size_t m);

Verdict bob_verify(const BitVec& x_opened, const Commitment& com, const LinearCode& code,
                   const BitVec& z, const std::vector<std::uint32_t>& I,
                   double p_err, double alpha2);

// Opens a string with the given positions flipped.
BitVec cheating_alice_open(const BitVec& x, const std::vector<std::uint32_t>& flips);

struct SessionConfig {
    WseeParams wsee;
    LinearCode code;        // code.n must equal wsee.sp.n
    std::size_t l = 1;
    BitVec commit_value;    // l bits
};

struct SessionResult {
    Verdict verdict;
    bool wsee_aborted = false;
    bool precheck_failed = false;
    Commitment commitment;
    std::vector<std::uint32_t> I;
    BitVec z;
    std::int64_t rounds = 0;
    std::int64_t missing = 0;
};

// Complete commitment session in one process. Draw order is fixed: Alice's
// stream feeds x^M, theta^M, the survivor truncation, then the hash seed;
// Bob's stream
// feeds only the precheck truncation; the channel holds its own stream.
// flip_open, when set, makes Alice open with those positions toggled.
SessionResult run_session(const SessionConfig& cfg, const ChannelFn& channel,
                          Rng& rng_A, Rng& rng_B,
                          const std::vector<std::uint32_t>* flip_open = nullptr);

} // namespace bcns
