#include "bcns/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <unistd.h>

#include <bit>
#include <chrono>
#include <cstring>
#include <deque>
#include <stdexcept>
#include <thread>

namespace bcns {

namespace {

std::uint64_t now_us() {
    using namespace std::chrono;
    return static_cast<std::uint64_t>(
        duration_cast<microseconds>(system_clock::now().time_since_epoch()).count());
}

void feed_u64(std::vector<std::uint8_t>& buf, std::uint64_t v) {
    for (int i = 7; i >= 0; --i)
        buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void feed_f64(std::vector<std::uint8_t>& buf, double v) {
    feed_u64(buf, std::bit_cast<std::uint64_t>(v));
}

std::int64_t executed_rounds(const SecurityParams& sp) {
    return static_cast<std::int64_t>(std::ceil(sp.M - 1e-9));
}

} // namespace

std::uint64_t channel_stream_seed(std::uint64_t seed_bob) {
    return seed_bob ^ 0x9e3779b97f4a7c15ULL;
}

std::uint64_t config_digest(const EngineConfig& cfg) {
    std::vector<std::uint8_t> buf;
    buf.push_back(1);   // digest version
    const SecurityParams& sp = cfg.session.wsee.sp;
    feed_f64(buf, sp.epsilon);
    feed_f64(buf, sp.M);
    feed_f64(buf, sp.n);
    feed_f64(buf, sp.zeta);
    feed_f64(buf, sp.alpha1);
    feed_f64(buf, sp.m);
    feed_f64(buf, sp.alpha2);
    feed_f64(buf, sp.p_sent_1);
    feed_f64(buf, sp.p_noclick_h);
    feed_f64(buf, sp.p_noclick_d);
    feed_f64(buf, sp.p_err);
    feed_f64(buf, cfg.session.wsee.delta_t);
    feed_u64(buf, cfg.session.l);
    feed_u64(buf, code_digest(cfg.session.code));
    feed_f64(buf, cfg.channel.p_sent_0);
    feed_f64(buf, cfg.channel.p_sent_1);
    feed_f64(buf, cfg.channel.p_sent_multi);
    feed_f64(buf, cfg.channel.p_noclick_h);
    feed_f64(buf, cfg.channel.p_noclick_d);
    feed_f64(buf, cfg.channel.p_err);
    feed_u64(buf, cfg.batch_rounds);
    return fnv1a64(buf.data(), buf.size());
}

std::uint64_t derive_session_id(const EngineConfig& cfg) {
    if (cfg.session_id != 0) return cfg.session_id;
    std::vector<std::uint8_t> buf;
    feed_u64(buf, cfg.seed_alice);
    feed_u64(buf, cfg.seed_bob);
    feed_u64(buf, config_digest(cfg));
    return fnv1a64(buf.data(), buf.size());
}

AliceEngine::AliceEngine(const EngineConfig& cfg) : cfg_(cfg), rng_(cfg.seed_alice) {
    const SecurityParams& sp = cfg_.session.wsee.sp;
    n_ = static_cast<std::size_t>(std::llround(sp.n));
    rounds_ = executed_rounds(sp);
    if (cfg_.session.code.n != n_)
        throw std::invalid_argument("code length does not match the derived block length");
    if (rounds_ - missing_upper(sp, rounds_) < static_cast<std::int64_t>(n_))
        throw std::logic_error("round count cannot guarantee n survivors; parameters inconsistent");
}

std::vector<WireMessage> AliceEngine::start() {
    if (state_ != State::fresh)
        throw std::logic_error("start() may only be called once");
    state_ = State::await_hello;
    HelloPayload h;
    h.session_id = derive_session_id(cfg_);
    h.param_digest = config_digest(cfg_);
    return {encode_hello(h)};
}

std::vector<WireMessage> AliceEngine::on_message(const WireMessage& in) {
    if (state_ == State::finished) return {};
    if (in.type == MsgType::abort) {
        verdict_.accepted = false;
        verdict_.reason = parse_abort(in);
        state_ = State::finished;
        return {};
    }
    switch (state_) {
    case State::await_hello: {
        HelloPayload h = parse_hello(in);
        if (h.param_digest != config_digest(cfg_))
            throw WireError("parameter digest mismatch");
        if (h.session_id != derive_session_id(cfg_))
            throw WireError("session id mismatch");
        x_all_ = rng_.bits(static_cast<std::size_t>(rounds_));
        theta_all_ = rng_.bits(static_cast<std::size_t>(rounds_));
        Rng chan(channel_stream_seed(cfg_.seed_bob));
        std::vector<WireMessage> out;
        for (std::int64_t start = 0; start < rounds_; start += static_cast<std::int64_t>(cfg_.batch_rounds)) {
            auto count = static_cast<std::size_t>(
                std::min<std::int64_t>(static_cast<std::int64_t>(cfg_.batch_rounds), rounds_ - start));
            ChannelBatch b;
            b.start = static_cast<std::uint32_t>(start);
            b.clicks = BitVec(count);
            b.bases = BitVec(count);
            b.bits = BitVec(count);
            for (std::size_t i = 0; i < count; ++i) {
                auto g = static_cast<std::size_t>(start) + i;
                RoundRecord rec = round_channel(cfg_.channel,
                                                x_all_.get(g) ? 1 : 0,
                                                theta_all_.get(g) ? 1 : 0, chan);
                b.clicks.set(i, rec.bob_click);
                b.bases.set(i, rec.bob_basis != 0);
                b.bits.set(i, rec.bob_bit != 0);
            }
            out.push_back(encode_channel_batch(b));
        }
        state_ = State::await_missing;
        return out;
    }
    case State::await_missing: {
        BitVec mask = parse_bitstring(in, MsgType::missing);
        if (mask.size() != static_cast<std::size_t>(rounds_))
            throw WireError("missing mask length does not match the round count");
        const SecurityParams& sp = cfg_.session.wsee.sp;
        auto missing = static_cast<std::int64_t>(mask.popcount());
        if (missing < missing_lower(sp, rounds_) || missing > missing_upper(sp, rounds_)) {
            (void)rng_.bits(n_);   // erasure guarantee survives the abort
            verdict_.accepted = false;
            verdict_.reason = VerdictReason::missing_rounds_out_of_interval;
            wsee_aborted_ = true;
            state_ = State::finished;
            return {encode_abort(VerdictReason::missing_rounds_out_of_interval)};
        }
        std::vector<std::uint32_t> survivors;
        survivors.reserve(static_cast<std::size_t>(rounds_ - missing));
        for (std::int64_t i = 0; i < rounds_; ++i)
            if (!mask.get(static_cast<std::size_t>(i)))
                survivors.push_back(static_cast<std::uint32_t>(i));
        uniform_truncate(survivors, n_, rng_);

        BitVec kept_mask(static_cast<std::size_t>(rounds_));
        BitVec x(n_), theta(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            kept_mask.set(survivors[i], true);
            x.set(i, x_all_.get(survivors[i]));
            theta.set(i, theta_all_.get(survivors[i]));
        }
        Commitment com = bc_commit(x, cfg_.session.code, cfg_.session.l,
                                   cfg_.session.commit_value, rng_);
        BitVec x_open = cfg_.flip_open ? cheating_alice_open(x, *cfg_.flip_open) : x;
        state_ = State::await_verdict;
        return {
            encode_bitstring(MsgType::truncation, kept_mask),
            encode_bitstring(MsgType::basis, theta),
            encode_bitstring(MsgType::syndrome, com.w),
            encode_bitstring(MsgType::seed, com.seed.bits),
            encode_bitstring(MsgType::mask, com.e),
            encode_bitstring(MsgType::open, x_open),
        };
    }
    case State::await_verdict:
        verdict_ = parse_verdict(in);
        state_ = State::finished;
        return {};
    default:
        throw WireError("message arrived in the wrong state");
    }
}

BobEngine::BobEngine(const EngineConfig& cfg) : cfg_(cfg), rng_(cfg.seed_bob) {
    const SecurityParams& sp = cfg_.session.wsee.sp;
    n_ = static_cast<std::size_t>(std::llround(sp.n));
    rounds_ = executed_rounds(sp);
    if (cfg_.session.code.n != n_)
        throw std::invalid_argument("code length does not match the derived block length");
    clicks_ = BitVec(static_cast<std::size_t>(rounds_));
    bases_ = BitVec(static_cast<std::size_t>(rounds_));
    bits_ = BitVec(static_cast<std::size_t>(rounds_));
}

std::vector<WireMessage> BobEngine::on_message(const WireMessage& in) {
    if (state_ == State::finished) return {};
    if (in.type == MsgType::abort) {
        verdict_.accepted = false;
        verdict_.reason = parse_abort(in);
        state_ = State::finished;
        return {};
    }
    const SecurityParams& sp = cfg_.session.wsee.sp;
    switch (state_) {
    case State::await_hello: {
        HelloPayload h = parse_hello(in);
        if (h.param_digest != config_digest(cfg_))
            throw WireError("parameter digest mismatch");
        HelloPayload reply;
        reply.session_id = derive_session_id(cfg_);
        reply.param_digest = h.param_digest;
        state_ = State::await_batches;
        return {encode_hello(reply)};
    }
    case State::await_batches: {
        ChannelBatch b = parse_channel_batch(in);
        if (b.start != received_)
            throw WireError("batch out of order");
        if (received_ + b.clicks.size() > static_cast<std::size_t>(rounds_))
            throw WireError("more rounds than the session declares");
        for (std::size_t i = 0; i < b.clicks.size(); ++i) {
            clicks_.set(received_ + i, b.clicks.get(i));
            bases_.set(received_ + i, b.bases.get(i));
            bits_.set(received_ + i, b.bits.get(i));
        }
        received_ += b.clicks.size();
        if (received_ < static_cast<std::size_t>(rounds_)) return {};
        BitVec missing(static_cast<std::size_t>(rounds_));
        for (std::size_t i = 0; i < missing.size(); ++i)
            missing.set(i, !clicks_.get(i));
        state_ = State::await_truncation;
        return {encode_bitstring(MsgType::missing, missing)};
    }
    case State::await_truncation: {
        BitVec mask = parse_bitstring(in, MsgType::truncation);
        if (mask.size() != static_cast<std::size_t>(rounds_))
            throw WireError("kept mask length does not match the round count");
        std::vector<std::uint32_t> kept;
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (mask.get(i)) kept.push_back(static_cast<std::uint32_t>(i));
        if (kept.size() != n_)
            throw WireError("kept set has the wrong size");
        kept_block_.theta_tilde.resize(n_);
        kept_block_.x_tilde = BitVec(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            if (!clicks_.get(kept[i]))
                throw WireError("kept set includes a round Bob reported missing");
            kept_block_.theta_tilde[i] = bases_.get(kept[i]) ? 1 : 0;
            kept_block_.x_tilde.set(i, bits_.get(kept[i]));
        }
        state_ = State::await_basis;
        return {};
    }
    case State::await_basis: {
        BitVec theta_bits = parse_bitstring(in, MsgType::basis);
        if (theta_bits.size() != n_)
            throw WireError("basis string has the wrong length");
        std::vector<std::uint8_t> theta(n_);
        for (std::size_t i = 0; i < n_; ++i)
            theta[i] = theta_bits.get(i) ? 1 : 0;
        std::vector<std::uint32_t> I0;
        BitVec z0;
        basis_overlap(kept_block_, theta, I0, z0);
        Precheck pc = bob_precheck(I0, static_cast<std::size_t>(std::llround(sp.m)), rng_);
        if (!pc.ok) {
            verdict_.accepted = false;
            verdict_.reason = VerdictReason::too_few_bits;
            precheck_failed_ = true;
            state_ = State::finished;
            return {encode_abort(VerdictReason::too_few_bits)};
        }
        I_ = std::move(pc.I);
        z_ = BitVec(I_.size());
        std::size_t p = 0;
        for (std::size_t k = 0; k < I_.size(); ++k) {
            while (I0[p] != I_[k]) ++p;
            z_.set(k, z0.get(p));
        }
        state_ = State::await_syndrome;
        return {};
    }
    case State::await_syndrome: {
        BitVec w = parse_bitstring(in, MsgType::syndrome);
        if (w.size() != cfg_.session.code.n - cfg_.session.code.k)
            throw WireError("syndrome length does not match the code");
        com_.w = std::move(w);
        state_ = State::await_seed;
        return {};
    }
    case State::await_seed: {
        BitVec s = parse_bitstring(in, MsgType::seed);
        if (s.size() != n_ + cfg_.session.l - 1)
            throw WireError("hash seed has the wrong length");
        com_.seed.n = n_;
        com_.seed.l = cfg_.session.l;
        com_.seed.bits = std::move(s);
        state_ = State::await_mask;
        return {};
    }
    case State::await_mask: {
        BitVec e = parse_bitstring(in, MsgType::mask);
        if (e.size() != cfg_.session.l)
            throw WireError("pad has the wrong length");
        com_.e = std::move(e);
        state_ = State::await_open;
        return {};
    }
    case State::await_open: {
        BitVec x = parse_bitstring(in, MsgType::open);
        if (x.size() != n_)
            throw WireError("opened string has the wrong length");
        verdict_ = bob_verify(x, com_, cfg_.session.code, z_, I_, sp.p_err, sp.alpha2);
        state_ = State::finished;
        return {encode_verdict(verdict_)};
    }
    default:
        throw WireError("message arrived in the wrong state");
    }
}

PumpResult pump_session(const EngineConfig& cfg) {
    AliceEngine alice(cfg);
    BobEngine bob(cfg);
    PumpResult res;
    res.transcript.session_id = derive_session_id(cfg);
    res.transcript.param_digest = config_digest(cfg);
    std::deque<WireMessage> to_bob, to_alice;
    for (auto& m : alice.start()) to_bob.push_back(std::move(m));
    while (!to_bob.empty() || !to_alice.empty()) {
        if (!to_bob.empty()) {
            WireMessage m = std::move(to_bob.front());
            to_bob.pop_front();
            res.transcript.entries.push_back({0, now_us(), m});
            for (auto& out : bob.on_message(m)) to_alice.push_back(std::move(out));
            continue;
        }
        WireMessage m = std::move(to_alice.front());
        to_alice.pop_front();
        res.transcript.entries.push_back({1, now_us(), m});
        for (auto& out : alice.on_message(m)) to_bob.push_back(std::move(out));
    }
    res.completed = alice.done() && bob.done();
    res.verdict_alice = alice.verdict();
    res.verdict_bob = bob.verdict();
    return res;
}

namespace {

class Socket {
public:
    explicit Socket(int fd = -1) : fd_(fd) {}
    ~Socket() { close_now(); }
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    Socket(Socket&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }

    int get() const { return fd_; }
    void close_now() {
        if (fd_ >= 0) ::close(fd_);
        fd_ = -1;
    }

private:
    int fd_;
};

void split_addr(const std::string& addr, std::string& host, std::string& port) {
    auto pos = addr.rfind(':');
    if (pos == std::string::npos || pos + 1 >= addr.size())
        throw std::invalid_argument("address must be host:port");
    host = addr.substr(0, pos);
    port = addr.substr(pos + 1);
    if (host.empty()) host = "127.0.0.1";
}

void set_timeout(int fd) {
    timeval tv{};
    tv.tv_sec = 60;
    setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

Socket dial(const std::string& addr) {
    std::string host, port;
    split_addr(addr, host, port);
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    int rc = getaddrinfo(host.c_str(), port.c_str(), &hints, &res);
    if (rc != 0)
        throw std::runtime_error(std::string("cannot resolve ") + addr + ": " + gai_strerror(rc));
    int fd = -1;
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    freeaddrinfo(res);
    if (fd < 0)
        throw std::runtime_error("cannot connect to " + addr);
    set_timeout(fd);
    return Socket(fd);
}

Socket serve_accept(const std::string& addr) {
    std::string host, port;
    split_addr(addr, host, port);
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* res = nullptr;
    int rc = getaddrinfo(host.c_str(), port.c_str(), &hints, &res);
    if (rc != 0)
        throw std::runtime_error(std::string("cannot resolve ") + addr + ": " + gai_strerror(rc));
    int lfd = -1;
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        lfd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (lfd < 0) continue;
        int one = 1;
        setsockopt(lfd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        if (::bind(lfd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(lfd, 1) == 0) break;
        ::close(lfd);
        lfd = -1;
    }
    freeaddrinfo(res);
    if (lfd < 0)
        throw std::runtime_error("cannot listen on " + addr);
    Socket listener(lfd);
    int fd = ::accept(lfd, nullptr, nullptr);
    if (fd < 0)
        throw std::runtime_error("accept failed on " + addr);
    set_timeout(fd);
    return Socket(fd);
}

void send_all(int fd, const std::uint8_t* data, std::size_t len) {
    std::size_t sent = 0;
    while (sent < len) {
        ssize_t rc = ::send(fd, data + sent, len - sent, MSG_NOSIGNAL);
        if (rc <= 0)
            throw std::runtime_error("socket write failed");
        sent += static_cast<std::size_t>(rc);
    }
}

bool recv_all(int fd, std::uint8_t* data, std::size_t len) {
    std::size_t got = 0;
    while (got < len) {
        ssize_t rc = ::recv(fd, data + got, len - got, 0);
        if (rc == 0) return false;
        if (rc < 0)
            throw std::runtime_error("socket read failed or timed out");
        got += static_cast<std::size_t>(rc);
    }
    return true;
}

bool read_frame_fd(int fd, WireMessage& out) {
    std::uint8_t head[4];
    if (!recv_all(fd, head, 4)) return false;
    std::uint32_t body = (std::uint32_t{head[0]} << 24) | (std::uint32_t{head[1]} << 16) |
                         (std::uint32_t{head[2]} << 8) | std::uint32_t{head[3]};
    if (body == 0 || body > kMaxFrameBytes)
        throw WireError("bad frame length on socket");
    std::vector<std::uint8_t> buf(4 + static_cast<std::size_t>(body));
    std::memcpy(buf.data(), head, 4);
    if (!recv_all(fd, buf.data() + 4, body))
        throw WireError("connection closed mid-frame");
    std::size_t used = decode_frame(buf.data(), buf.size(), out);
    if (used != buf.size())
        throw WireError("frame decode size mismatch");
    return true;
}

// BASIS must not leave before delta_t has elapsed since the last
// CHANNEL_BATCH; last_batch_us tracks that reference point.
void send_messages(int fd, const std::vector<WireMessage>& msgs, Transcript& t,
                   std::uint8_t dir, const EngineConfig& cfg,
                   std::uint64_t* last_batch_us) {
    for (const auto& m : msgs) {
        if (m.type == MsgType::basis && cfg.honor_wait && cfg.session.wsee.delta_t > 0 &&
            *last_batch_us != 0) {
            auto gate = *last_batch_us +
                        static_cast<std::uint64_t>(cfg.session.wsee.delta_t * 1e6);
            std::uint64_t now = now_us();
            if (now < gate)
                std::this_thread::sleep_for(std::chrono::microseconds(gate - now));
        }
        auto frame = encode_frame(m);
        send_all(fd, frame.data(), frame.size());
        std::uint64_t ts = now_us();
        if (m.type == MsgType::channel_batch)
            *last_batch_us = ts;
        t.entries.push_back({dir, ts, m});
    }
}

} // namespace

NetResult run_alice_connect(const EngineConfig& cfg, const std::string& addr) {
    Socket sock = dial(addr);
    AliceEngine engine(cfg);
    NetResult res;
    res.transcript.session_id = derive_session_id(cfg);
    res.transcript.param_digest = config_digest(cfg);
    std::uint64_t last_batch_us = 0;
    send_messages(sock.get(), engine.start(), res.transcript, 0, cfg, &last_batch_us);
    while (!engine.done()) {
        WireMessage in;
        if (!read_frame_fd(sock.get(), in))
            throw std::runtime_error("peer closed the connection before the session finished");
        res.transcript.entries.push_back({1, now_us(), in});
        send_messages(sock.get(), engine.on_message(in), res.transcript, 0, cfg, &last_batch_us);
    }
    res.verdict = engine.verdict();
    return res;
}

NetResult run_bob_serve(const EngineConfig& cfg, const std::string& addr) {
    Socket sock = serve_accept(addr);
    BobEngine engine(cfg);
    NetResult res;
    res.transcript.session_id = derive_session_id(cfg);
    res.transcript.param_digest = config_digest(cfg);
    std::uint64_t last_batch_us = 0;
    while (!engine.done()) {
        WireMessage in;
        if (!read_frame_fd(sock.get(), in))
            throw std::runtime_error("peer closed the connection before the session finished");
        res.transcript.entries.push_back({0, now_us(), in});
        send_messages(sock.get(), engine.on_message(in), res.transcript, 1, cfg, &last_batch_us);
    }
    // let the peer finish streaming, then close
    ::shutdown(sock.get(), SHUT_WR);
    WireMessage trailing;
    try {
        while (read_frame_fd(sock.get(), trailing)) {
            res.transcript.entries.push_back({0, now_us(), trailing});
        }
    } catch (const std::exception&) {
        // a reset here is harmless, the session is already decided
    }
    res.verdict = engine.verdict();
    return res;
}

ReplayReport verify_transcript(const EngineConfig& cfg, const Transcript& t) {
    ReplayReport rep;
    PumpResult pump = pump_session(cfg);
    rep.verdict = pump.verdict_bob;
    if (t.session_id != pump.transcript.session_id) {
        rep.mismatch = "session id differs from the configured seeds";
        return rep;
    }
    if (t.param_digest != pump.transcript.param_digest) {
        rep.mismatch = "parameter digest differs from the configured parameters";
        return rep;
    }
    for (int dir = 0; dir < 2; ++dir) {
        std::vector<const WireMessage*> got, want;
        for (const auto& e : t.entries)
            if (e.direction == dir) got.push_back(&e.msg);
        for (const auto& e : pump.transcript.entries)
            if (e.direction == dir) want.push_back(&e.msg);
        const char* label = dir == 0 ? "Alice to Bob" : "Bob to Alice";
        if (got.size() != want.size()) {
            rep.mismatch = std::string(label) + ": recorded " + std::to_string(got.size()) +
                           " frames, replay produced " + std::to_string(want.size());
            return rep;
        }
        for (std::size_t i = 0; i < got.size(); ++i) {
            if (got[i]->type != want[i]->type || got[i]->payload != want[i]->payload) {
                rep.mismatch = std::string(label) + ": frame " + std::to_string(i) +
                               " differs from the replay";
                return rep;
            }
        }
    }
    rep.ok = true;
    return rep;
}

} // namespace bcns
