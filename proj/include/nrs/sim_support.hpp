// Shared simulator knobs and the control-message framing.
//
// Every asymptotic loop count from the simulators is pinned here as an
// explicit clamped formula with a named constant.

#pragma once

#include <optional>

#include "nrs/engine.hpp"

namespace nrs {

struct SimConstants {
    int c1 = 4;       // MainStatic inner iterations per outer: c1 * lg(delta)
    int c3 = 4;       // Broadcast outer iterations: c3 * lg(delta) * lglglg(n)
    int c4 = 6;       // ShareKnowledge rounds: c4 * delta * lg(delta)
    int c5 = 8;       // MainGeneral iteration budget: c5 * (T * lg(delta) + ceil(ln n))
    int cQ = 8;       // throttle window Q = cQ * ceil(ln n)
    int progress_budget = 8;  // progress-detection budget: k * (T * lg(delta) + ceil(ln n))
    int payload_cap = 64;

    int lg_delta(const Network& net) const { return lg2_clamped(net.max_degree()); }
    int window(const Network& net) const { return cQ * ln_ceil_clamped(net.size()); }
    int static_inner_iterations(const Network& net) const { return c1 * lg_delta(net); }
    int broadcast_outer(const Network& net) const {
        return c3 * lg_delta(net) * lglglg_clamped(net.size());
    }
    int broadcast_inner(const Network& net) const { return lg_delta(net); }
    std::int64_t share_knowledge_rounds(const Network& net) const {
        return static_cast<std::int64_t>(c4) * std::max(net.max_degree(), 1) * lg_delta(net);
    }
    std::int64_t general_budget(const Network& net, Round T) const {
        return static_cast<std::int64_t>(c5) *
               (static_cast<std::int64_t>(T) * lg_delta(net) + ln_ceil_clamped(net.size()));
    }
    std::int64_t progress_round_budget(const Network& net, Round T) const {
        return static_cast<std::int64_t>(progress_budget) *
               (static_cast<std::int64_t>(T) * lg_delta(net) + ln_ceil_clamped(net.size()));
    }
};

struct SimOptions {
    bool oracle_mode = false;        // exact DistToActive / lossless Broadcast (static sim)
    bool record_transcript = false;  // keep the full simulation-run transcript
    std::int64_t budget_override = -1;
    bool collect_stats = false;      // per-iteration most-delayed advancement stats
};

// Control-frame encoding for simulator messages. Original-protocol payloads
// travel inside kTagged/kToken frames so stale deliveries are identifiable.
namespace wire {

enum : char {
    kMarkX = 'X',   // DistToActive phase-1 probe
    kMarkY = 'Y',   // DistToActive phase-2 relay
    kTagged = 'R',  // [round:4] + original payload (MainStatic action rounds)
    kShare = 'K',   // [origin:4] + body (ShareKnowledge)
};

inline void put_u32(Payload& p, std::uint32_t x) {
    p.push_back(static_cast<char>(x & 0xff));
    p.push_back(static_cast<char>((x >> 8) & 0xff));
    p.push_back(static_cast<char>((x >> 16) & 0xff));
    p.push_back(static_cast<char>((x >> 24) & 0xff));
}

inline std::uint32_t get_u32(const Payload& p, std::size_t at) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(p[at])) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(p[at + 1])) << 8) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(p[at + 2])) << 16) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(p[at + 3])) << 24);
}

inline Payload mark(char type) { return Payload(1, type); }

inline Payload tagged(Round round, const Payload& body) {
    Payload p(1, kTagged);
    put_u32(p, static_cast<std::uint32_t>(round));
    p += body;
    return p;
}

struct Tagged {
    Round round;
    Payload body;
};

inline std::optional<Tagged> parse_tagged(const Payload& p) {
    if (p.size() < 5 || p[0] != kTagged) return std::nullopt;
    return Tagged{static_cast<Round>(get_u32(p, 1)), p.substr(5)};
}

inline Payload share(NodeId origin, const Payload& body) {
    Payload p(1, kShare);
    put_u32(p, static_cast<std::uint32_t>(origin));
    p += body;
    return p;
}

struct Share {
    NodeId origin;
    Payload body;
};

inline std::optional<Share> parse_share(const Payload& p) {
    if (p.size() < 5 || p[0] != kShare) return std::nullopt;
    return Share{static_cast<NodeId>(get_u32(p, 1)), p.substr(5)};
}

}  // namespace wire

// Causal helper-replay: the protocol action of `v` at round `t` computed from
// the prefix of its reconstructed history (legal because t <= its progress).
NodeAction replay_action(const Protocol& protocol, NodeId v, Round t, const Input& input,
                         const std::vector<ReceiveEvent>& reconstruction);

}  // namespace nrs
