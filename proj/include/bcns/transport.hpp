#pragma once

#include "bcns/protocol.hpp"
#include "bcns/wire.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace bcns {

struct EngineConfig {
    SessionConfig session;
    ExperimentalParams channel;
    std::uint64_t seed_alice = 1;
    std::uint64_t seed_bob = 2;
    std::uint64_t session_id = 0;   // 0 derives one from the seeds
    std::size_t batch_rounds = 65536;
    bool honor_wait = false;        // sleep delta_t before the basis reveal in networked runs
    const std::vector<std::uint32_t>* flip_open = nullptr;
};

std::uint64_t config_digest(const EngineConfig& cfg);
std::uint64_t derive_session_id(const EngineConfig& cfg);

// The channel simulation runs on Alice's side and consumes a stream derived
// from Bob's seed, so a local run and a networked run agree bit for bit.
std::uint64_t channel_stream_seed(std::uint64_t seed_bob);

// Message-level committer. Feed it every frame from Bob; it answers with the
// frames to send. Protocol violations throw WireError.
class AliceEngine {
public:
    explicit AliceEngine(const EngineConfig& cfg);
    std::vector<WireMessage> start();
    std::vector<WireMessage> on_message(const WireMessage& in);
    bool done() const { return state_ == State::finished; }
    const Verdict& verdict() const { return verdict_; }
    bool wsee_aborted() const { return wsee_aborted_; }

private:
    enum class State { fresh, await_hello, await_missing, await_verdict, finished };

    EngineConfig cfg_;
    Rng rng_;
    State state_ = State::fresh;
    std::int64_t rounds_ = 0;
    std::size_t n_ = 0;
    BitVec x_all_, theta_all_;
    Verdict verdict_;
    bool wsee_aborted_ = false;
};

// Message-level verifier.
class BobEngine {
public:
    explicit BobEngine(const EngineConfig& cfg);
    std::vector<WireMessage> on_message(const WireMessage& in);
    bool done() const { return state_ == State::finished; }
    const Verdict& verdict() const { return verdict_; }
    bool precheck_failed() const { return precheck_failed_; }

private:
    enum class State {
        await_hello, await_batches, await_truncation, await_basis,
        await_syndrome, await_seed, await_mask, await_open, finished
    };

    EngineConfig cfg_;
    Rng rng_;
    State state_ = State::await_hello;
    std::int64_t rounds_ = 0;
    std::size_t n_ = 0;
    BitVec clicks_, bases_, bits_;
    std::size_t received_ = 0;
    WseeBob kept_block_;
    std::vector<std::uint32_t> I_;
    BitVec z_;
    Commitment com_;
    Verdict verdict_;
    bool precheck_failed_ = false;
};

struct PumpResult {
    bool completed = false;
    Verdict verdict_alice;
    Verdict verdict_bob;
    Transcript transcript;
};

// Runs both engines in one process, shuttling messages through in-memory
// queues and recording the transcript.
PumpResult pump_session(const EngineConfig& cfg);

struct NetResult {
    Verdict verdict;
    Transcript transcript;
};

// TCP endpoints; addr is host:port. The server side plays Bob and handles a
// single session, the connecting side plays Alice.
NetResult run_bob_serve(const EngineConfig& cfg, const std::string& addr);
NetResult run_alice_connect(const EngineConfig& cfg, const std::string& addr);

struct ReplayReport {
    bool ok = false;
    std::string mismatch;
    Verdict verdict;
};

// Re-runs the session from the seeds in cfg and checks every recorded frame
// against the regenerated one, direction by direction.
ReplayReport verify_transcript(const EngineConfig& cfg, const Transcript& t);

} // namespace bcns
