// General-protocol simulator: nodes exchange per-round tokens (the round's
// broadcast payload or an explicit "not broadcasting" marker) with all
// neighbors via ShareKnowledge; a node's virtual round advances only once it
// holds every neighbor token for the rounds below it.

#pragma once

#include "nrs/protocols.hpp"
#include "nrs/sim_support.hpp"

namespace nrs {

// Per-(neighbor, round) token store of one observing node, preallocated to
// deg(v) x T entries. content == nullopt encodes NotBroadcasting.
class TokenStore {
public:
    TokenStore() = default;
    TokenStore(const Network& net, NodeId owner, Round T);

    bool store(NodeId origin, Round r, std::optional<Payload> content);  // true if newly stored
    bool has(NodeId origin, Round r) const;
    const std::optional<Payload>& content(NodeId origin, Round r) const;
    int count_at(Round r) const;  // distinct neighbor tokens held for round r
    int degree() const { return static_cast<int>(neighbors_.size()); }

private:
    std::vector<NodeId> neighbors_;
    Round T_ = 0;
    std::vector<std::uint8_t> state_;              // 0 missing, 1 marker, 2 payload
    std::vector<std::optional<Payload>> content_;  // engaged iff state == 2
    std::vector<int> count_;

    int slot(NodeId origin, Round r) const;
};

// Derives v's receive history for rounds < upto from its token store:
// a round yields a receipt iff v listens there (action recomputed causally)
// and exactly one neighbor token carries a payload. Throws
// IncompleteHistoryError on a missing token.
std::vector<ReceiveEvent> reconstruct_history(const Network& net, const Protocol& protocol,
                                              const Input& input, NodeId v, Round upto,
                                              const TokenStore& store);

// One ShareKnowledge phase: for c4 * delta * lg(delta) rounds every node with
// a message broadcasts it with probability 1/max(delta, 2). heard[v] lists
// each neighbor origin at most once with the payload it shared.
struct ShareResult {
    std::vector<std::vector<std::pair<NodeId, Payload>>> heard;
    std::int64_t rounds_used = 0;
};
ShareResult share_knowledge(RoundDriver& driver,
                            const std::vector<std::optional<Payload>>& message,
                            const SimConstants& cst);

struct GeneralResult {
    bool completed = false;
    bool verified = false;
    bool token_sound = true;  // every stored token matched the faultless oracle
    std::int64_t rounds_used = 0;
    std::int64_t iterations = 0;
    std::int64_t budget = 0;
    std::vector<Round> final_tv;
    std::vector<std::vector<ReceiveEvent>> reconstruction;
    std::vector<std::vector<ReceiveEvent>> sim_received;  // only with record_transcript
    // most-delayed advancement stats (collect_stats)
    std::int64_t delayed_attempts = 0;
    std::int64_t delayed_advances = 0;
};

GeneralResult main_general(const Network& net, const ProtocolInstance& inst, double p,
                           std::uint64_t seed, const SimConstants& cst = {},
                           const SimOptions& opt = {});

}  // namespace nrs
