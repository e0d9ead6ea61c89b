#include "bcns/wire.hpp"

#include <cstring>
#include <fstream>

namespace bcns {

namespace {

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    put_u32(out, static_cast<std::uint32_t>(v >> 32));
    put_u32(out, static_cast<std::uint32_t>(v));
}

void put_bits(std::vector<std::uint8_t>& out, const BitVec& bits) {
    if (bits.size() > 0xffffffffull)
        throw WireError("bit-string too long for the wire");
    put_u32(out, static_cast<std::uint32_t>(bits.size()));
    auto bytes = bits.to_bytes();
    out.insert(out.end(), bytes.begin(), bytes.end());
}

class Reader {
public:
    Reader(const std::uint8_t* data, std::size_t len) : data_(data), len_(len) {}

    std::uint8_t u8() {
        need(1);
        return data_[pos_++];
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = (std::uint32_t{data_[pos_]} << 24) |
                          (std::uint32_t{data_[pos_ + 1]} << 16) |
                          (std::uint32_t{data_[pos_ + 2]} << 8) |
                          std::uint32_t{data_[pos_ + 3]};
        pos_ += 4;
        return v;
    }

    std::uint64_t u64() {
        std::uint64_t hi = u32();
        return (hi << 32) | u32();
    }

    BitVec bits() {
        std::uint32_t count = u32();
        std::size_t nbytes = (static_cast<std::size_t>(count) + 7) / 8;
        need(nbytes);
        BitVec v = BitVec::from_bytes(data_ + pos_, count);
        pos_ += nbytes;
        return v;
    }

    void expect_end() const {
        if (pos_ != len_)
            throw WireError("trailing bytes in payload");
    }

    std::size_t remaining() const { return len_ - pos_; }

private:
    void need(std::size_t n) const {
        if (len_ - pos_ < n)
            throw WireError("payload truncated");
    }

    const std::uint8_t* data_;
    std::size_t len_;
    std::size_t pos_ = 0;
};

Reader payload_reader(const WireMessage& msg, MsgType expected) {
    if (msg.type != expected)
        throw WireError("unexpected message type");
    return Reader(msg.payload.data(), msg.payload.size());
}

bool valid_type(std::uint8_t t) {
    return t >= static_cast<std::uint8_t>(MsgType::hello) &&
           t <= static_cast<std::uint8_t>(MsgType::truncation);
}

} // namespace

std::vector<std::uint8_t> encode_frame(const WireMessage& msg) {
    std::size_t body = 1 + msg.payload.size();
    if (body > kMaxFrameBytes)
        throw WireError("frame exceeds the size cap");
    std::vector<std::uint8_t> out;
    out.reserve(4 + body);
    put_u32(out, static_cast<std::uint32_t>(body));
    put_u8(out, static_cast<std::uint8_t>(msg.type));
    out.insert(out.end(), msg.payload.begin(), msg.payload.end());
    return out;
}

std::size_t decode_frame(const std::uint8_t* data, std::size_t len, WireMessage& out) {
    if (len < 4) return 0;
    std::uint32_t body = (std::uint32_t{data[0]} << 24) | (std::uint32_t{data[1]} << 16) |
                         (std::uint32_t{data[2]} << 8) | std::uint32_t{data[3]};
    if (body == 0)
        throw WireError("frame without a type byte");
    if (body > kMaxFrameBytes)
        throw WireError("frame exceeds the size cap");
    if (len - 4 < body) return 0;
    if (!valid_type(data[4]))
        throw WireError("unknown message type");
    out.type = static_cast<MsgType>(data[4]);
    out.payload.assign(data + 5, data + 4 + body);
    return 4 + static_cast<std::size_t>(body);
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

WireMessage encode_hello(const HelloPayload& h) {
    WireMessage msg;
    msg.type = MsgType::hello;
    put_u32(msg.payload, h.version);
    put_u64(msg.payload, h.session_id);
    put_u64(msg.payload, h.param_digest);
    return msg;
}

HelloPayload parse_hello(const WireMessage& msg) {
    Reader r = payload_reader(msg, MsgType::hello);
    HelloPayload h;
    h.version = r.u32();
    h.session_id = r.u64();
    h.param_digest = r.u64();
    r.expect_end();
    return h;
}

WireMessage encode_channel_batch(const ChannelBatch& b) {
    if (b.clicks.size() != b.bases.size() || b.clicks.size() != b.bits.size())
        throw WireError("batch bit-strings differ in length");
    WireMessage msg;
    msg.type = MsgType::channel_batch;
    put_u32(msg.payload, b.start);
    put_bits(msg.payload, b.clicks);
    put_bits(msg.payload, b.bases);
    put_bits(msg.payload, b.bits);
    return msg;
}

ChannelBatch parse_channel_batch(const WireMessage& msg) {
    Reader r = payload_reader(msg, MsgType::channel_batch);
    ChannelBatch b;
    b.start = r.u32();
    b.clicks = r.bits();
    b.bases = r.bits();
    b.bits = r.bits();
    r.expect_end();
    if (b.clicks.size() != b.bases.size() || b.clicks.size() != b.bits.size())
        throw WireError("batch bit-strings differ in length");
    return b;
}

WireMessage encode_bitstring(MsgType type, const BitVec& bits) {
    switch (type) {
    case MsgType::missing:
    case MsgType::truncation:
    case MsgType::basis:
    case MsgType::syndrome:
    case MsgType::seed:
    case MsgType::mask:
    case MsgType::open:
        break;
    default:
        throw WireError("message type does not carry a single bit-string");
    }
    WireMessage msg;
    msg.type = type;
    put_bits(msg.payload, bits);
    return msg;
}

BitVec parse_bitstring(const WireMessage& msg, MsgType expected) {
    Reader r = payload_reader(msg, expected);
    BitVec v = r.bits();
    r.expect_end();
    return v;
}

WireMessage encode_verdict(const Verdict& v) {
    WireMessage msg;
    msg.type = MsgType::verdict;
    put_u8(msg.payload, v.accepted ? 1 : 0);
    put_u8(msg.payload, static_cast<std::uint8_t>(v.reason));
    if (v.accepted)
        put_bits(msg.payload, v.opened);
    return msg;
}

namespace {

VerdictReason reason_from_byte(std::uint8_t b) {
    if (b > static_cast<std::uint8_t>(VerdictReason::missing_rounds_out_of_interval))
        throw WireError("unknown verdict reason");
    return static_cast<VerdictReason>(b);
}

} // namespace

Verdict parse_verdict(const WireMessage& msg) {
    Reader r = payload_reader(msg, MsgType::verdict);
    Verdict v;
    std::uint8_t acc = r.u8();
    if (acc > 1)
        throw WireError("accepted flag must be 0 or 1");
    v.accepted = acc == 1;
    v.reason = reason_from_byte(r.u8());
    if (v.accepted) {
        if (v.reason != VerdictReason::ok)
            throw WireError("accepted verdict must carry reason ok");
        v.opened = r.bits();
    } else if (v.reason == VerdictReason::ok) {
        throw WireError("rejected verdict cannot carry reason ok");
    }
    r.expect_end();
    return v;
}

WireMessage encode_abort(VerdictReason reason) {
    WireMessage msg;
    msg.type = MsgType::abort;
    put_u8(msg.payload, static_cast<std::uint8_t>(reason));
    return msg;
}

VerdictReason parse_abort(const WireMessage& msg) {
    Reader r = payload_reader(msg, MsgType::abort);
    VerdictReason reason = reason_from_byte(r.u8());
    r.expect_end();
    if (reason == VerdictReason::ok)
        throw WireError("abort needs a failure reason");
    return reason;
}

namespace {

constexpr char kTranscriptMagic[5] = {'B', 'C', 'N', 'S', '1'};
constexpr std::uint32_t kTranscriptVersion = 1;

} // namespace

void save_transcript(const std::string& path, const Transcript& t) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw std::runtime_error("cannot open transcript file for writing: " + path);
    std::vector<std::uint8_t> head;
    head.insert(head.end(), kTranscriptMagic, kTranscriptMagic + 5);
    put_u32(head, kTranscriptVersion);
    put_u64(head, t.session_id);
    put_u64(head, t.param_digest);
    os.write(reinterpret_cast<const char*>(head.data()), static_cast<std::streamsize>(head.size()));
    for (const auto& e : t.entries) {
        std::vector<std::uint8_t> rec;
        put_u8(rec, e.direction);
        put_u64(rec, e.timestamp_us);
        auto frame = encode_frame(e.msg);
        rec.insert(rec.end(), frame.begin(), frame.end());
        os.write(reinterpret_cast<const char*>(rec.data()), static_cast<std::streamsize>(rec.size()));
    }
    if (!os)
        throw std::runtime_error("short write on transcript file: " + path);
}

Transcript load_transcript(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open transcript file: " + path);
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
    Reader r(data.data(), data.size());
    char magic[5];
    for (char& c : magic) c = static_cast<char>(r.u8());
    if (std::memcmp(magic, kTranscriptMagic, 5) != 0)
        throw WireError("not a transcript file");
    if (r.u32() != kTranscriptVersion)
        throw WireError("unsupported transcript version");
    Transcript t;
    t.session_id = r.u64();
    t.param_digest = r.u64();
    std::size_t pos = data.size() - r.remaining();
    while (pos < data.size()) {
        if (data.size() - pos < 9)
            throw WireError("transcript entry truncated");
        TranscriptEntry e;
        e.direction = data[pos];
        if (e.direction > 1)
            throw WireError("transcript direction must be 0 or 1");
        e.timestamp_us = 0;
        for (int i = 0; i < 8; ++i)
            e.timestamp_us = (e.timestamp_us << 8) | data[pos + 1 + static_cast<std::size_t>(i)];
        pos += 9;
        std::size_t used = decode_frame(data.data() + pos, data.size() - pos, e.msg);
        if (used == 0)
            throw WireError("transcript frame truncated");
        pos += used;
        t.entries.push_back(std::move(e));
    }
    return t;
}

} // namespace bcns
