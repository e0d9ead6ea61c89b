#pragma once

#include "bcns/bits.hpp"
#include "bcns/protocol.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bcns {

// Frame layout: u32 big-endian length, then that many bytes consisting of a
// one-byte type followed by the payload. Bit-strings are a u32 big-endian bit
// count followed by ceil(count/8) bytes, lowest bit first.
enum class MsgType : std::uint8_t {
    hello = 0x01,
    channel_batch = 0x02,
    missing = 0x03,
    basis = 0x04,
    syndrome = 0x05,
    seed = 0x06,
    mask = 0x07,
    open = 0x08,
    verdict = 0x09,
    abort = 0x0A,
    truncation = 0x0B,
};

class WireError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct WireMessage {
    MsgType type = MsgType::hello;
    std::vector<std::uint8_t> payload;
};

constexpr std::size_t kMaxFrameBytes = std::size_t{64} << 20;

std::vector<std::uint8_t> encode_frame(const WireMessage& msg);

// Returns bytes consumed, or 0 when the buffer does not yet hold a complete
// frame. Malformed input throws WireError.
std::size_t decode_frame(const std::uint8_t* data, std::size_t len, WireMessage& out);

std::uint64_t fnv1a64(const void* data, std::size_t len,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);

struct HelloPayload {
    std::uint32_t version = 1;
    std::uint64_t session_id = 0;
    std::uint64_t param_digest = 0;
};

struct ChannelBatch {
    std::uint32_t start = 0;
    BitVec clicks;
    BitVec bases;
    BitVec bits;
};

WireMessage encode_hello(const HelloPayload& h);
HelloPayload parse_hello(const WireMessage& msg);

WireMessage encode_channel_batch(const ChannelBatch& b);
ChannelBatch parse_channel_batch(const WireMessage& msg);

// MISSING, TRUNCATION, BASIS, SYNDROME, SEED, MASK and OPEN all carry one
// bit-string.
WireMessage encode_bitstring(MsgType type, const BitVec& bits);
BitVec parse_bitstring(const WireMessage& msg, MsgType expected);

WireMessage encode_verdict(const Verdict& v);
Verdict parse_verdict(const WireMessage& msg);

WireMessage encode_abort(VerdictReason reason);
VerdictReason parse_abort(const WireMessage& msg);

// Transcript file: "BCNS1", u32 version, u64 session id, u64 parameter
// digest, then entries of u8 direction (0 Alice to Bob, 1 Bob to Alice),
// u64 wall-clock microseconds, frame.
struct TranscriptEntry {
    std::uint8_t direction = 0;
    std::uint64_t timestamp_us = 0;
    WireMessage msg;
};

struct Transcript {
    std::uint64_t session_id = 0;
    std::uint64_t param_digest = 0;
    std::vector<TranscriptEntry> entries;
};

void save_transcript(const std::string& path, const Transcript& t);
Transcript load_transcript(const std::string& path);

} // namespace bcns
