// Warmup simulator under local progress detection: every node simulates the
// round of its most-delayed neighbor; an engine-side oracle maintains the
// virtual rounds. Also the blaming-chain measurement over the completion
// table it produces.

#pragma once

#include "nrs/protocols.hpp"
#include "nrs/sim_support.hpp"

namespace nrs {

struct ProgressResult {
    bool completed = false;  // every node reached virtual round T+1 within budget
    bool verified = false;
    std::int64_t rounds_used = 0;
    std::int64_t budget = 0;
    // completion[v][x-1] = first simulation round with t_v >= x, for x in
    // [1, T+1]; -1 where the budget ran out first.
    std::vector<std::vector<std::int64_t>> completion;
    std::vector<std::vector<ReceiveEvent>> reconstruction;
    std::vector<std::vector<ReceiveEvent>> sim_received;  // only with record_transcript
    // most-delayed advancement stats (collect_stats): rounds where a 2-hop
    // most-delayed node had a pending successful-listen round, and how many
    // of those advanced it.
    std::int64_t delayed_listen_attempts = 0;
    std::int64_t delayed_listen_advances = 0;

    std::int64_t completion_round(NodeId v) const { return completion[v].back(); }
    std::int64_t max_completion_round() const;
};

ProgressResult simulate_with_progress_detection(const Network& net, const ProtocolInstance& inst,
                                                double p, std::uint64_t seed,
                                                const SimConstants& cst = {},
                                                const SimOptions& opt = {});

// Empirical blaming-chain statistics over a completed run's D table.
struct ChainStats {
    bool recurrence_ok = false;  // D_{v,x} <= max_{w in G2(v)} D_{w,x-1} + max(1, increment)
    int min_increment = 0;       // realized Y_{v,x} extremes over all (v, x >= 2)
    int max_increment = 0;
    double mean_increment = 0.0;
    // Backward trace of the chain realizing the largest completion round:
    // pairs (node, x) from x = T+1 down to 1; its increments sum to D_{v*,T+1}.
    std::vector<std::pair<NodeId, Round>> max_chain;
    std::vector<std::int64_t> max_chain_increments;
};

ChainStats measure_blaming_chains(const ProgressResult& result, const Network& net);

}  // namespace nrs
