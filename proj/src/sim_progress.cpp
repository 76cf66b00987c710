#include "nrs/sim_progress.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace nrs {

NodeAction replay_action(const Protocol& protocol, NodeId v, Round t, const Input& input,
                         const std::vector<ReceiveEvent>& reconstruction) {
    // reconstruction is sorted by round; expose only events before t.
    auto end = std::lower_bound(reconstruction.begin(), reconstruction.end(), t,
                                [](const ReceiveEvent& e, Round r) { return e.round < r; });
    History h{&input, std::span<const ReceiveEvent>(reconstruction.data(),
                                                    static_cast<std::size_t>(end - reconstruction.begin()))};
    return protocol.action(v, t, h);
}

std::int64_t ProgressResult::max_completion_round() const {
    std::int64_t m = 0;
    for (const auto& row : completion) m = std::max(m, row.back());
    return m;
}

namespace {

// Round-t completion state per the local-progress oracle. A listening round
// with a faultless delivery completes once the node has ever received that
// payload; a broadcast round completes once every neighbor that receives the
// message in the faultless round has ever received that payload.
struct OracleState {
    const Network* net;
    const Protocol* protocol;
    const Transcript* faultless;  // with log: per-round actions and senders
    Round T;

    std::vector<Round> tv;
    std::vector<std::unordered_set<Payload>> ever_received;
    std::vector<std::vector<ReceiveEvent>> rec;      // bound reconstruction
    std::vector<std::size_t> next_delivery;          // cursor into faultless receive list

    // For a broadcast round t of v: the neighbors still missing the payload.
    // Rebuilt lazily whenever t_v moves onto a broadcast round.
    std::vector<std::vector<NodeId>> outstanding;
    std::vector<Payload> outstanding_payload;

    bool broadcasts_at(NodeId v, Round t) const {
        return faultless->log[t - 1].actions[v].is_broadcast();
    }
    const Payload& broadcast_payload(NodeId v, Round t) const {
        return *faultless->log[t - 1].actions[v].payload;
    }
    // Faultless delivery to v at round t, if any.
    const ReceiveEvent* delivery(NodeId v, Round t) const {
        const auto& list = faultless->received[v];
        auto it = std::lower_bound(list.begin(), list.end(), t,
                                   [](const ReceiveEvent& e, Round r) { return e.round < r; });
        return (it != list.end() && it->round == t) ? &*it : nullptr;
    }

    void refresh_outstanding(NodeId v) {
        outstanding[v].clear();
        Round t = tv[v];
        if (t > T || !broadcasts_at(v, t)) return;
        const Payload& m = broadcast_payload(v, t);
        outstanding_payload[v] = m;
        const RoundLog& log = faultless->log[t - 1];
        for (NodeId w : net->neighbors(v)) {
            // Required recipients: neighbors whose faultless round-t delivery
            // came from v. Colliding or broadcasting neighbors are exempt.
            if (log.sender[w] != v) continue;
            if (!ever_received[w].count(m)) outstanding[v].push_back(w);
        }
    }

    bool round_complete(NodeId v) {
        Round t = tv[v];
        if (t > T) return false;
        if (broadcasts_at(v, t)) {
            auto& out = outstanding[v];
            out.erase(std::remove_if(out.begin(), out.end(),
                                     [&](NodeId w) {
                                         return ever_received[w].count(outstanding_payload[v]) > 0;
                                     }),
                      out.end());
            return out.empty();
        }
        const ReceiveEvent* d = delivery(v, t);
        if (!d) return true;  // collision or silence in P: nothing to wait for
        if (!ever_received[v].count(d->payload)) return false;
        return true;
    }

    // Advances t_v past every completed round, binding listen deliveries
    // into the reconstruction as they complete.
    bool advance(NodeId v) {
        bool moved = false;
        while (tv[v] <= T && round_complete(v)) {
            Round t = tv[v];
            if (!broadcasts_at(v, t)) {
                if (const ReceiveEvent* d = delivery(v, t)) rec[v].push_back(*d);
            }
            ++tv[v];
            moved = true;
            refresh_outstanding(v);
        }
        return moved;
    }
};

}  // namespace

ProgressResult simulate_with_progress_detection(const Network& net, const ProtocolInstance& inst,
                                                double p, std::uint64_t seed,
                                                const SimConstants& cst, const SimOptions& opt) {
    if (net.directed()) throw ConfigError("simulators reject directed networks");
    const Round T = inst.protocol->length();
    RunOptions oracle_opt;
    oracle_opt.record_log = true;
    oracle_opt.payload_cap = cst.payload_cap;
    Transcript faultless =
        run(net, *inst.protocol, inst.inputs, NoiseModel(0.0, 0), T, oracle_opt);

    const int n = net.size();
    OracleState st;
    st.net = &net;
    st.protocol = inst.protocol.get();
    st.faultless = &faultless;
    st.T = T;
    st.tv.assign(n, 1);
    st.ever_received.resize(n);
    st.rec.resize(n);
    st.next_delivery.assign(n, 0);
    st.outstanding.resize(n);
    st.outstanding_payload.resize(n);

    ProgressResult res;
    res.budget = opt.budget_override >= 0 ? opt.budget_override : cst.progress_round_budget(net, T);
    res.completion.assign(n, std::vector<std::int64_t>(static_cast<std::size_t>(T) + 1, -1));
    for (NodeId v = 0; v < n; ++v) res.completion[v][0] = 0;  // t_v starts at 1

    auto note_progress = [&](NodeId v, std::int64_t round) {
        for (Round x = 2; x <= std::min<Round>(st.tv[v], T + 1); ++x)
            if (res.completion[v][x - 1] < 0) res.completion[v][x - 1] = round;
    };
    for (NodeId v = 0; v < n; ++v) {
        st.refresh_outstanding(v);
        st.advance(v);  // listen-with-nothing prefixes complete before any round
        note_progress(v, 0);
    }

    std::vector<std::vector<NodeId>> two_hop;
    if (opt.collect_stats) two_hop = net.two_hop_closure();

    RoundDriver driver(net, NoiseModel(p, seed));
    if (opt.record_transcript) res.sim_received.resize(n);
    std::vector<NodeAction> actions(n);
    std::vector<Round> simulating(n);

    auto all_done = [&] {
        for (NodeId v = 0; v < n; ++v)
            if (st.tv[v] <= T) return false;
        return true;
    };

    std::vector<char> stat_eligible;
    while (!all_done() && driver.rounds_used() < res.budget) {
        // Each node simulates the round of its most-delayed 1-hop neighbor,
        // ties broken toward the smallest node id.
        for (NodeId v = 0; v < n; ++v) {
            Round best = st.tv[v];
            for (NodeId w : net.neighbors(v)) best = std::min(best, st.tv[w]);
            simulating[v] = best;
            actions[v] = best > T
                             ? NodeAction::listen()
                             : replay_action(*st.protocol, v, best, inst.inputs[v], st.rec[v]);
        }
        if (opt.collect_stats) {
            stat_eligible.assign(n, 0);
            for (NodeId v = 0; v < n; ++v) {
                if (st.tv[v] > T) continue;
                bool most_delayed = true;
                for (NodeId w : two_hop[v])
                    if (st.tv[w] < st.tv[v]) most_delayed = false;
                // Eligible: pending round is a listen round with a delivery.
                if (most_delayed && !st.broadcasts_at(v, st.tv[v]) &&
                    st.delivery(v, st.tv[v]) != nullptr) {
                    stat_eligible[v] = 1;
                    ++res.delayed_listen_attempts;
                }
            }
        }

        const std::int64_t round = driver.next_round();
        for (const Delivery& d : driver.execute(actions)) {
            st.ever_received[d.node].insert(*d.payload);
            if (opt.record_transcript)
                res.sim_received[d.node].push_back({static_cast<Round>(round), *d.payload});
        }
        for (NodeId v = 0; v < n; ++v) {
            bool moved = st.advance(v);
            if (moved) note_progress(v, round);
            if (opt.collect_stats && stat_eligible[v] && moved) ++res.delayed_listen_advances;
        }
    }

    res.rounds_used = driver.rounds_used();
    res.completed = all_done();
    res.reconstruction = st.rec;
    res.verified = res.completed && all_verified(verify_simulation(faultless, res.reconstruction));
    return res;
}

ChainStats measure_blaming_chains(const ProgressResult& result, const Network& net) {
    if (!result.completed)
        throw ConfigError("blaming chains require a completed run (D table incomplete)");
    const int n = net.size();
    const Round xmax = static_cast<Round>(result.completion.empty() ? 1 : result.completion[0].size());
    auto two_hop = net.two_hop_closure();

    ChainStats st;
    st.recurrence_ok = true;
    std::int64_t total = 0, count = 0;
    st.min_increment = std::numeric_limits<int>::max();
    st.max_increment = std::numeric_limits<int>::min();
    for (NodeId v = 0; v < n; ++v) {
        for (Round x = 2; x <= xmax; ++x) {
            std::int64_t prev = 0;
            for (NodeId w : two_hop[v]) prev = std::max(prev, result.completion[w][x - 2]);
            const std::int64_t inc = result.completion[v][x - 1] - prev;
            st.min_increment = std::min<int>(st.min_increment, static_cast<int>(inc));
            st.max_increment = std::max<int>(st.max_increment, static_cast<int>(inc));
            total += inc;
            ++count;
            if (result.completion[v][x - 1] > prev + std::max<std::int64_t>(1, inc))
                st.recurrence_ok = false;
        }
    }
    st.mean_increment = count ? static_cast<double>(total) / static_cast<double>(count) : 0.0;
    if (count == 0) st.min_increment = st.max_increment = 0;

    // Backward trace from the node realizing the largest completion round.
    NodeId v = 0;
    for (NodeId w = 1; w < n; ++w)
        if (result.completion[w][xmax - 1] > result.completion[v][xmax - 1]) v = w;
    for (Round x = xmax; x >= 2; --x) {
        st.max_chain.emplace_back(v, x);
        NodeId best = -1;
        std::int64_t best_d = -1;
        for (NodeId w : two_hop[v]) {
            if (result.completion[w][x - 2] > best_d) {
                best_d = result.completion[w][x - 2];
                best = w;
            }
        }
        st.max_chain_increments.push_back(result.completion[v][x - 1] - best_d);
        v = best;
    }
    st.max_chain.emplace_back(v, 1);
    return st;
}

}  // namespace nrs
