#pragma once

// Simulated teleoperation command channel: fixed-layout datagram codec
// with CRC-16, armed/unarmed safety gate with replay protection, heartbeat
// watchdog, and a seeded lossy-link model.  Simulated clock only; no
// sockets in the core.
//
// Frame layout (little-endian, offsets in bytes):
//   0  u16  magic 0x4B52
//   2  u32  sequence
//   6  u8   mode (0 drive, 1 flipper, 2 manipulator)
//   7  u8   arm flag (0/1)
//   8  u8   axis count n (<= 8)
//   9  i16  axis[i], i in [0, n): normalized value scaled by 32767
//   9+2n u16 CRC-16/CCITT-FALSE over bytes [0, 9+2n)

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace karo::ocu {

inline constexpr uint16_t kFrameMagic = 0x4B52;
inline constexpr size_t kMaxAxes = 8;
inline constexpr double kAxisScale = 32767.0;

enum class CommandMode : uint8_t { Drive = 0, Flipper = 1, Manipulator = 2 };

struct CommandDatagram {
    uint32_t sequence = 0;
    CommandMode mode = CommandMode::Drive;
    std::vector<double> axes;  // normalized, each in [-1, 1]
    bool arm_flag = false;

    bool operator==(const CommandDatagram& o) const {
        if (sequence != o.sequence || mode != o.mode || arm_flag != o.arm_flag ||
            axes.size() != o.axes.size())
            return false;
        for (size_t i = 0; i < axes.size(); ++i)
            if (std::abs(axes[i] - o.axes[i]) > 1.0 / kAxisScale) return false;
        return true;
    }
};

enum class DecodeStatus { Ok, Truncated, BadMagic, BadAxisCount, ChecksumMismatch };

inline std::string to_string(DecodeStatus s) {
    switch (s) {
        case DecodeStatus::Ok: return "ok";
        case DecodeStatus::Truncated: return "truncated";
        case DecodeStatus::BadMagic: return "bad-magic";
        case DecodeStatus::BadAxisCount: return "bad-axis-count";
        case DecodeStatus::ChecksumMismatch: return "checksum-mismatch";
    }
    return "?";
}

inline uint16_t crc16_ccitt(const uint8_t* data, size_t len) {
    uint16_t crc = 0xFFFF;
    for (size_t i = 0; i < len; ++i) {
        crc ^= uint16_t(data[i]) << 8;
        for (int b = 0; b < 8; ++b)
            crc = (crc & 0x8000) ? uint16_t((crc << 1) ^ 0x1021) : uint16_t(crc << 1);
    }
    return crc;
}

inline std::vector<uint8_t> encode(const CommandDatagram& d) {
    if (d.axes.size() > kMaxAxes) throw std::invalid_argument("too many axes");
    for (double a : d.axes)
        if (!(a >= -1.0 && a <= 1.0)) throw std::invalid_argument("axis value outside [-1, 1]");
    std::vector<uint8_t> out;
    out.reserve(11 + 2 * d.axes.size());
    auto push16 = [&](uint16_t v) {
        out.push_back(uint8_t(v & 0xFF));
        out.push_back(uint8_t(v >> 8));
    };
    push16(kFrameMagic);
    out.push_back(uint8_t(d.sequence & 0xFF));
    out.push_back(uint8_t((d.sequence >> 8) & 0xFF));
    out.push_back(uint8_t((d.sequence >> 16) & 0xFF));
    out.push_back(uint8_t((d.sequence >> 24) & 0xFF));
    out.push_back(uint8_t(d.mode));
    out.push_back(d.arm_flag ? 1 : 0);
    out.push_back(uint8_t(d.axes.size()));
    for (double a : d.axes) {
        auto v = int16_t(std::lround(a * kAxisScale));
        push16(uint16_t(v));
    }
    push16(crc16_ccitt(out.data(), out.size()));
    return out;
}

struct DecodeResult {
    DecodeStatus status = DecodeStatus::Truncated;
    CommandDatagram datagram;
};

inline DecodeResult decode(const std::vector<uint8_t>& bytes) {
    DecodeResult r;
    if (bytes.size() < 11) return r;  // header + crc minimum
    auto read16 = [&](size_t off) { return uint16_t(bytes[off] | (uint16_t(bytes[off + 1]) << 8)); };
    if (read16(0) != kFrameMagic) {
        r.status = DecodeStatus::BadMagic;
        return r;
    }
    uint8_t n = bytes[8];
    if (n > kMaxAxes) {
        r.status = DecodeStatus::BadAxisCount;
        return r;
    }
    size_t expected = 11 + 2 * size_t(n);
    if (bytes.size() != expected) {
        r.status = DecodeStatus::Truncated;
        return r;
    }
    uint16_t stored = read16(expected - 2);
    if (stored != crc16_ccitt(bytes.data(), expected - 2)) {
        r.status = DecodeStatus::ChecksumMismatch;
        return r;
    }
    CommandDatagram d;
    d.sequence = uint32_t(bytes[2]) | (uint32_t(bytes[3]) << 8) | (uint32_t(bytes[4]) << 16) |
                 (uint32_t(bytes[5]) << 24);
    if (bytes[6] > 2) {
        r.status = DecodeStatus::BadAxisCount;  // unknown mode byte
        return r;
    }
    d.mode = CommandMode(bytes[6]);
    d.arm_flag = bytes[7] != 0;
    for (size_t i = 0; i < n; ++i)
        d.axes.push_back(double(int16_t(read16(9 + 2 * i))) / kAxisScale);
    r.status = DecodeStatus::Ok;
    r.datagram = d;
    return r;
}

struct SafetyState {
    bool armed = false;
    double last_command_time_ms = -1.0;
    double heartbeat_timeout_ms = 500.0;
    uint32_t last_sequence = 0;
    bool any_command_seen = false;
    bool stopped = true;  // stop-all active until a fresh armed command
};

struct GateResult {
    bool accepted = false;
    std::string reason;  // set when suppressed
    std::vector<double> motion_axes;  // zeroed unless accepted
};

// Motion axes pass only in the armed state; arm/disarm transitions are
// always processed; stale or replayed sequence numbers are suppressed.
inline GateResult gate_command(SafetyState& state, const CommandDatagram& d, double now_ms) {
    GateResult r;
    if (state.any_command_seen && d.sequence <= state.last_sequence) {
        r.reason = "stale-sequence";
        return r;
    }
    state.last_sequence = d.sequence;
    state.any_command_seen = true;
    state.last_command_time_ms = now_ms;
    state.armed = d.arm_flag;

    if (!state.armed) {
        r.reason = "unarmed";
        return r;
    }
    state.stopped = false;
    r.accepted = true;
    r.motion_axes = d.axes;
    return r;
}

enum class WatchdogStatus { Ok, StopAll };

// Stop-all once the heartbeat goes silent for longer than the timeout;
// stop-all zeroes all axes and latches until a fresh armed command.
inline WatchdogStatus watchdog_check(SafetyState& state, double now_ms) {
    if (state.last_command_time_ms < 0.0 ||
        now_ms - state.last_command_time_ms > state.heartbeat_timeout_ms) {
        state.stopped = true;
        return WatchdogStatus::StopAll;
    }
    return state.stopped ? WatchdogStatus::StopAll : WatchdogStatus::Ok;
}

struct LinkModel {
    double latency_ms = 0.0;
    double jitter_ms = 0.0;
    double drop_probability = 0.0;  // in [0, 1]
    uint64_t seed = 0;
};

struct TimedFrame {
    double time_ms = 0.0;
    std::vector<uint8_t> bytes;
};

// Deterministic uniform draw in [0, 1) from a seeded generator.
inline double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * (1.0 / 9007199254740992.0);  // 53-bit mantissa
}

// Per-frame Bernoulli drop and latency + jitter delay; the delivered
// stream is re-sorted into time order.  Identical inputs and seed produce
// byte-identical traces.
inline std::vector<TimedFrame> link_deliver(const LinkModel& model,
                                            const std::vector<TimedFrame>& frames) {
    if (!(model.drop_probability >= 0.0 && model.drop_probability <= 1.0))
        throw std::invalid_argument("drop probability must be in [0, 1]");
    std::mt19937_64 rng(model.seed);
    std::vector<TimedFrame> delivered;
    delivered.reserve(frames.size());
    for (const auto& f : frames) {
        double u_drop = uniform01(rng);
        double u_jitter = uniform01(rng);
        if (u_drop < model.drop_probability) continue;
        TimedFrame out = f;
        out.time_ms = f.time_ms + model.latency_ms + model.jitter_ms * u_jitter;
        delivered.push_back(out);
    }
    std::stable_sort(delivered.begin(), delivered.end(),
                     [](const TimedFrame& a, const TimedFrame& b) { return a.time_ms < b.time_ms; });
    return delivered;
}

struct LinkEvent {
    double time_ms = 0.0;
    std::string type;  // "accepted", "suppressed", "rejected", "stop-all", "ok"
    std::string detail;
    uint32_t sequence = 0;
};

// Replays delivered frames against the safety state over a simulated
// clock, evaluating the watchdog at a fixed tick.  Single logical thread;
// all transitions serialized through this loop.
inline std::vector<LinkEvent> run_event_loop(SafetyState& state,
                                             const std::vector<TimedFrame>& delivered,
                                             double end_ms, double tick_ms = 100.0) {
    std::vector<LinkEvent> events;
    size_t next = 0;
    for (double now = 0.0; now <= end_ms + 1e-9; now += tick_ms) {
        while (next < delivered.size() && delivered[next].time_ms <= now + 1e-9) {
            const auto& f = delivered[next++];
            DecodeResult dr = decode(f.bytes);
            if (dr.status != DecodeStatus::Ok) {
                events.push_back({f.time_ms, "rejected", to_string(dr.status), 0});
                continue;
            }
            GateResult g = gate_command(state, dr.datagram, f.time_ms);
            events.push_back({f.time_ms, g.accepted ? "accepted" : "suppressed", g.reason,
                              dr.datagram.sequence});
        }
        WatchdogStatus w = watchdog_check(state, now);
        events.push_back({now, w == WatchdogStatus::StopAll ? "stop-all" : "ok", "", 0});
    }
    return events;
}

}  // namespace karo::ocu
