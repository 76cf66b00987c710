// Reference faultless protocols, the static-schedule abstraction, and the
// Decay coin flip used by the static simulator's spread primitive.

#pragma once

#include <functional>
#include <memory>

#include "nrs/engine.hpp"

namespace nrs {

// A protocol plus the private inputs and name it runs with.
struct ProtocolInstance {
    std::shared_ptr<const Protocol> protocol;
    Inputs inputs;
    std::string name;
};

// Everyone listens for T rounds.
class SilentProtocol final : public Protocol {
public:
    explicit SilentProtocol(Round T) : length_(T) {}
    Round length() const override { return length_; }
    NodeAction action(NodeId, Round, const History&) const override {
        return NodeAction::listen();
    }

private:
    Round length_;
};

// Star center (node 0) broadcasts its t-th private input in round t.
class StarFloodProtocol final : public Protocol {
public:
    explicit StarFloodProtocol(Round T) : length_(T) {}
    Round length() const override { return length_; }
    NodeAction action(NodeId v, Round t, const History& h) const override;

private:
    Round length_;
};

// Designated left nodes broadcast their private input in their round.
class RoundRobinProtocol final : public Protocol {
public:
    RoundRobinProtocol(int n, const std::vector<std::vector<NodeId>>& round_broadcasters);
    Round length() const override { return length_; }
    NodeAction action(NodeId v, Round t, const History& h) const override;

private:
    Round length_;
    std::vector<Round> broadcast_round_;  // 0 = never broadcasts
};

// Ad-hoc protocol from a callable; used by tests and small experiments.
class FunctionProtocol final : public Protocol {
public:
    using Fn = std::function<NodeAction(NodeId, Round, const History&)>;
    FunctionProtocol(Round T, Fn fn) : length_(T), fn_(std::move(fn)) {}
    Round length() const override { return length_; }
    NodeAction action(NodeId v, Round t, const History& h) const override { return fn_(v, t, h); }

private:
    Round length_;
    Fn fn_;
};

// One Decay coin: an informed node broadcasts with probability 2^-i, an
// uninformed node listens. `u` is a uniform [0,1) draw.
NodeAction decay_round(bool informed, const Payload& message, int inner_index, double u);

// Receive schedule M_v of a static protocol with a fulfillment cursor.
// next() returns the smallest unfulfilled round, or T+1 once exhausted.
class StaticSchedule {
public:
    StaticSchedule() = default;
    StaticSchedule(std::vector<Round> rounds, Round sentinel);

    Round next() const { return cursor_ < rounds_.size() ? rounds_[cursor_] : sentinel_; }
    void fulfill(Round r);
    bool exhausted() const { return cursor_ >= rounds_.size(); }
    void reset() { cursor_ = 0; }
    const std::vector<Round>& rounds() const { return rounds_; }
    Round sentinel() const { return sentinel_; }

private:
    std::vector<Round> rounds_;
    std::size_t cursor_ = 0;
    Round sentinel_ = 1;
};

struct StaticProtocolInstance {
    ProtocolInstance base;
    std::vector<StaticSchedule> schedules;  // indexed by node
};

// Materializes M_v from a faultless run and spot-checks that the receive
// pattern is input-independent (two random input vectors). Throws
// NotStaticError when the pattern moves.
std::vector<StaticSchedule> derive_static_schedule(const Network& net,
                                                   const ProtocolInstance& inst,
                                                   int payload_cap = 64);
StaticProtocolInstance make_static(const Network& net, const ProtocolInstance& inst,
                                   int payload_cap = 64);

// Deterministic default payloads (8 bytes) for generated inputs.
Payload default_payload(std::uint64_t seed, NodeId node, int index);

// Instance factories. `seed` only shapes the generated private inputs.
ProtocolInstance make_star_flood(const Network& net, Round T, std::uint64_t seed);
ProtocolInstance make_silent(const Network& net, Round T);
ProtocolInstance make_round_robin(const BipartiteInstance& bip, std::uint64_t seed);

// Parses "flood:64", "silent:8", "round_robin"; fallback_T fills a missing
// length parameter. Requires the matching graph family.
ProtocolInstance build_protocol(const std::string& spec, const Network& net,
                                const BipartiteInstance* bip, std::uint64_t seed,
                                Round fallback_T);

// Trivial baseline: every round of P repeated k times; a node keeps the
// first non-faulty delivery per original round. Succeeds for all nodes iff
// every required (node, round) pair gets at least one non-faulty repetition.
struct RepetitionResult {
    std::vector<std::vector<ReceiveEvent>> reconstruction;
    std::int64_t rounds_used = 0;
    bool verified = false;
};
RepetitionResult repetition_simulate(const Network& net, const ProtocolInstance& inst,
                                     const NoiseModel& noise, int k);

}  // namespace nrs
