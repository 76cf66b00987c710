// Static-protocol simulator without progress detection: a throttled outer
// loop around a distributed binary search (LearnDelays) that tells each node
// the smallest virtual round nearby, a two-phase distance probe
// (DistToActive), and a Decay-style spread primitive (Broadcast).
//
// Oracle mode replaces the two randomized primitives with exact, lossless
// versions (zero engine rounds) so the search logic is deterministic.

#pragma once

#include "nrs/protocols.hpp"
#include "nrs/sim_support.hpp"

namespace nrs {

enum class DistLabel : std::uint8_t { d0, d1, d2, far };

struct DecayResult {
    std::vector<char> received;  // got the payload at some point during the spread
    std::int64_t rounds_used = 0;
};

// Decay spread: informed nodes broadcast the (shared) payload with
// probability 2^-i across c3*lg(delta)*lglglg(n) outer x lg(delta) inner rounds.
DecayResult broadcast_decay(RoundDriver& driver, const std::vector<char>& informed,
                            const Payload& payload, const SimConstants& cst);
// Lossless ideal: every node with an informed neighbor receives.
std::vector<char> broadcast_exact(const Network& net, const std::vector<char>& informed);

// Distance to the nearest active node as 0, 1, 2 or more than 2.
// Distance-0 answers are always correct; others fail with the Broadcast
// failure probability.
std::vector<DistLabel> dist_to_active(RoundDriver& driver, const std::vector<char>& active,
                                      const SimConstants& cst);
std::vector<DistLabel> dist_to_active_exact(const Network& net, const std::vector<char>& active);

struct LearnDelaysTrace {
    struct Iteration {
        std::vector<int> lo, hi;          // bounds entering the iteration
        std::vector<char> active, silent; // silent as of the end of the iteration
        std::vector<DistLabel> dist;
    };
    std::vector<Iteration> iterations;
};

// Binary search over [max(1, L-Q), L] with the =2 silencing rule. For any
// node most delayed in its 2-hop neighborhood, every 1-hop neighbor returns
// that node's virtual round (deterministically so in the exact variant).
// The strict flag rejects virtual rounds outside the window (standalone
// oracle-mode use); MainStatic disables it and lets stragglers search as
// always-active nodes.
std::vector<int> learn_delays_exact(const Network& net, const std::vector<int>& tv, int L,
                                    int window_q, LearnDelaysTrace* trace = nullptr,
                                    bool strict = true);
std::vector<int> learn_delays(RoundDriver& driver, const std::vector<int>& tv, int L,
                              int window_q, const SimConstants& cst);

struct StaticResult {
    bool completed = false;  // every receive schedule fulfilled
    bool verified = false;
    std::int64_t rounds_used = 0;
    std::int64_t outer_iterations = 0;
    std::int64_t budget_outer = 0;
    int max_window_spread = 0;  // max over outer boundaries of (max tv - min tv)
    int max_window_lag = 0;     // max over outer boundaries of (L - min tv)
    std::vector<Round> final_tv;
    std::vector<std::vector<ReceiveEvent>> reconstruction;
    std::vector<std::vector<ReceiveEvent>> sim_received;  // only with record_transcript
};

StaticResult main_static(const Network& net, const StaticProtocolInstance& sp, double p,
                         std::uint64_t seed, const SimConstants& cst = {},
                         const SimOptions& opt = {});

}  // namespace nrs
