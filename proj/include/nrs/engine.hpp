// Round-based execution engine for the (noisy) radio network model.
//
// Receive rule: node v gets payload m in a round iff v listens, exactly one
// in-neighbor broadcasts, and no receiver fault hits v. Collisions, silence
// and faults are indistinguishable to protocol logic.

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "nrs/common.hpp"
#include "nrs/network.hpp"
#include "nrs/rng.hpp"

namespace nrs {

struct NodeAction {
    std::optional<Payload> payload;  // engaged iff broadcasting

    static NodeAction listen() { return {}; }
    static NodeAction broadcast(Payload p) { return {std::move(p)}; }
    bool is_broadcast() const { return payload.has_value(); }
};

// Receiver-fault model: one independent draw per (node, round), keyed by the
// seed so identical seeds give bit-identical fault vectors.
struct NoiseModel {
    double p = 0.0;
    std::uint64_t seed = 0;

    NoiseModel() = default;
    NoiseModel(double p_, std::uint64_t seed_) : p(p_), seed(seed_) {
        if (p < 0.0 || p >= 1.0) throw ConfigError("fault probability must be in [0,1)");
    }
    bool fault(NodeId v, std::int64_t round) const {
        if (p == 0.0) return false;
        return rng::uniform(seed, rng::Stream::fault, static_cast<std::uint64_t>(v),
                            static_cast<std::uint64_t>(round)) < p;
    }
};

struct ReceiveEvent {
    Round round = 0;
    Payload payload;
    bool operator==(const ReceiveEvent&) const = default;
};

using Input = std::vector<Payload>;    // one node's private input payloads
using Inputs = std::vector<Input>;     // indexed by node

struct History {
    const Input* input = nullptr;                 // private input, never null during action calls
    std::span<const ReceiveEvent> received;       // events strictly before the current round
};

class Protocol {
public:
    virtual ~Protocol() = default;
    virtual Round length() const = 0;
    // Action of node v in round t given its history (causality: events < t only).
    virtual NodeAction action(NodeId v, Round t, const History& history) const = 0;
};

// Per-round debug log entry; only recorded when requested.
struct RoundLog {
    std::vector<NodeAction> actions;
    std::vector<std::uint8_t> faults;          // never exposed to protocol logic
    std::vector<NodeId> sender;                // -1 when nothing was delivered
};

struct Transcript {
    std::int64_t rounds = 0;
    Inputs inputs;
    std::vector<std::vector<ReceiveEvent>> received;  // sparse per-node receive history
    std::vector<RoundLog> log;                        // empty unless recording enabled
};

struct Delivery {
    NodeId node;
    NodeId sender;
    const Payload* payload;
};

// Executes synchronous rounds with reusable scratch. One driver per run;
// the absolute round counter keys both fault and simulator coin draws.
class RoundDriver {
public:
    RoundDriver(const Network& net, NoiseModel noise);

    // Runs one round and returns the deliveries (payload pointers are valid
    // only until the next execute call).
    const std::vector<Delivery>& execute(const std::vector<NodeAction>& actions);

    std::int64_t rounds_used() const { return round_; }
    std::int64_t next_round() const { return round_ + 1; }  // 1-based index of the upcoming round
    const Network& network() const { return *net_; }
    const NoiseModel& noise() const { return noise_; }

    void record_into(Transcript* sink) { sink_ = sink; }

private:
    const Network* net_;
    NoiseModel noise_;
    std::int64_t round_ = 0;
    Transcript* sink_ = nullptr;
    std::vector<int> hits_;           // broadcasting in-neighbor count per node
    std::vector<NodeId> last_sender_;
    std::vector<NodeId> touched_;
    std::vector<Delivery> deliveries_;
};

// One synchronous round as a pure function (reference form of the receive rule).
std::vector<std::optional<Payload>> step(const Network& net,
                                         const std::vector<NodeAction>& actions,
                                         const std::vector<std::uint8_t>& faults);

struct RunOptions {
    bool record_log = false;
    int payload_cap = 64;  // stands in for the Theta(log n) message bound
};

// Executes `protocol` for exactly max_rounds rounds. Deterministic given
// (inputs, noise.seed). Rounds past protocol->length() are all-listen.
Transcript run(const Network& net, const Protocol& protocol, const Inputs& inputs,
               const NoiseModel& noise, std::int64_t max_rounds, const RunOptions& opt = {});

// Simulation predicate: true for v iff reconstruction[v] equals v's receive
// history in the faultless original, rounds and payloads exactly.
std::vector<bool> verify_simulation(const Transcript& original,
                                    const std::vector<std::vector<ReceiveEvent>>& reconstruction);
bool all_verified(const std::vector<bool>& flags);

// JSON-lines transcript dump: {"node":int,"round":int,"payload":hex} per event.
void write_transcript_jsonl(const Transcript& transcript, const std::string& path);
std::vector<std::vector<ReceiveEvent>> read_transcript_jsonl(const std::string& path, int n);

}  // namespace nrs
