#include "nrs/sim_static.hpp"

#include <algorithm>

namespace nrs {

DecayResult broadcast_decay(RoundDriver& driver, const std::vector<char>& informed,
                            const Payload& payload, const SimConstants& cst) {
    const Network& net = driver.network();
    const int n = net.size();
    if (static_cast<int>(informed.size()) != n)
        throw ConfigError("broadcast_decay: informed flags must cover every node");
    const int outer = cst.broadcast_outer(net);
    const int inner = cst.broadcast_inner(net);
    const std::uint64_t seed = driver.noise().seed;

    DecayResult res;
    res.received.assign(n, 0);
    std::vector<NodeAction> actions(n);
    for (int o = 0; o < outer; ++o) {
        for (int i = 1; i <= inner; ++i) {
            const std::int64_t round = driver.next_round();
            for (NodeId v = 0; v < n; ++v) {
                if (!informed[v]) {
                    actions[v] = NodeAction::listen();
                    continue;
                }
                double u = rng::uniform(seed, rng::Stream::sim, static_cast<std::uint64_t>(v),
                                        static_cast<std::uint64_t>(round));
                actions[v] = decay_round(true, payload, i, u);
            }
            for (const Delivery& d : driver.execute(actions)) res.received[d.node] = 1;
            ++res.rounds_used;
        }
    }
    return res;
}

std::vector<char> broadcast_exact(const Network& net, const std::vector<char>& informed) {
    std::vector<char> received(net.size(), 0);
    for (NodeId v = 0; v < net.size(); ++v) {
        for (NodeId w : net.neighbors(v)) {
            if (informed[w]) {
                received[v] = 1;
                break;
            }
        }
    }
    return received;
}

namespace {

std::vector<DistLabel> label_phases(const std::vector<char>& active, const std::vector<char>& rx,
                                    const std::vector<char>& ry) {
    std::vector<DistLabel> out(active.size());
    for (std::size_t v = 0; v < active.size(); ++v) {
        if (active[v]) out[v] = DistLabel::d0;
        else if (rx[v]) out[v] = DistLabel::d1;
        else if (ry[v]) out[v] = DistLabel::d2;
        else out[v] = DistLabel::far;
    }
    return out;
}

}  // namespace

std::vector<DistLabel> dist_to_active(RoundDriver& driver, const std::vector<char>& active,
                                      const SimConstants& cst) {
    // Phase X: active nodes spread a probe. Phase Y: everyone who heard X
    // relays, so distance-2 nodes hear Y without having heard X.
    auto rx = broadcast_decay(driver, active, wire::mark(wire::kMarkX), cst).received;
    auto ry = broadcast_decay(driver, rx, wire::mark(wire::kMarkY), cst).received;
    return label_phases(active, rx, ry);
}

std::vector<DistLabel> dist_to_active_exact(const Network& net, const std::vector<char>& active) {
    auto rx = broadcast_exact(net, active);
    auto ry = broadcast_exact(net, rx);
    return label_phases(active, rx, ry);
}

namespace {

int search_iterations(int len) {
    int k = 0;
    while ((1 << k) < len) ++k;
    return k;
}

// Shared binary-search body; dist_fn supplies real or exact DistToActive.
template <typename DistFn>
std::vector<int> learn_delays_core(int n, const std::vector<int>& tv, int lo0, int L,
                                   DistFn&& dist_fn, LearnDelaysTrace* trace) {
    std::vector<int> lo(n, lo0), hi(n, L);
    std::vector<char> silent(n, 0), active(n);
    const int iters = search_iterations(L - lo0 + 1);
    for (int it = 0; it < iters; ++it) {
        for (NodeId v = 0; v < n; ++v) {
            int mid = (lo[v] + hi[v]) / 2;
            active[v] = lo[v] != hi[v] && !silent[v] && tv[v] <= mid;
        }
        if (trace) {
            trace->iterations.emplace_back();
            trace->iterations.back().lo = lo;
            trace->iterations.back().hi = hi;
            trace->iterations.back().active.assign(active.begin(), active.end());
        }
        auto dist = dist_fn(active);
        for (NodeId v = 0; v < n; ++v) {
            if (lo[v] == hi[v]) continue;  // converged; idles for the rest
            int mid = (lo[v] + hi[v]) / 2;
            if (dist[v] == DistLabel::d2) silent[v] = 1;
            if (dist[v] == DistLabel::d0 || dist[v] == DistLabel::d1)
                hi[v] = mid;
            else
                lo[v] = mid + 1;
        }
        if (trace) {
            trace->iterations.back().silent.assign(silent.begin(), silent.end());
            trace->iterations.back().dist = dist;
        }
    }
    return lo;
}

}  // namespace

std::vector<int> learn_delays_exact(const Network& net, const std::vector<int>& tv, int L,
                                    int window_q, LearnDelaysTrace* trace, bool strict) {
    const int n = net.size();
    if (static_cast<int>(tv.size()) != n)
        throw ConfigError("learn_delays: tv must cover every node");
    const int lo0 = std::max(1, L - window_q);
    if (strict) {
        for (NodeId v = 0; v < n; ++v)
            if (tv[v] < lo0 || tv[v] > L)
                throw WindowError("t_v outside [" + std::to_string(lo0) + ", " +
                                  std::to_string(L) + "] at node " + std::to_string(v));
    }
    return learn_delays_core(
        n, tv, lo0, L, [&](const std::vector<char>& a) { return dist_to_active_exact(net, a); },
        trace);
}

std::vector<int> learn_delays(RoundDriver& driver, const std::vector<int>& tv, int L,
                              int window_q, const SimConstants& cst) {
    const int n = driver.network().size();
    if (static_cast<int>(tv.size()) != n)
        throw ConfigError("learn_delays: tv must cover every node");
    const int lo0 = std::max(1, L - window_q);
    return learn_delays_core(
        n, tv, lo0, L, [&](const std::vector<char>& a) { return dist_to_active(driver, a, cst); },
        nullptr);
}

StaticResult main_static(const Network& net, const StaticProtocolInstance& sp, double p,
                         std::uint64_t seed, const SimConstants& cst, const SimOptions& opt) {
    if (net.directed()) throw ConfigError("simulators reject directed networks");
    const Protocol& P = *sp.base.protocol;
    const Round T = P.length();
    const int n = net.size();
    const int Q = cst.window(net);
    const int inner_count = cst.static_inner_iterations(net);

    std::vector<StaticSchedule> schedules = sp.schedules;
    for (auto& s : schedules) s.reset();

    StaticResult res;
    res.budget_outer =
        opt.budget_override >= 0 ? opt.budget_override : static_cast<std::int64_t>(T) + Q;
    res.reconstruction.resize(n);
    if (opt.record_transcript) res.sim_received.resize(n);

    RoundDriver driver(net, NoiseModel(p, seed));
    std::vector<NodeAction> actions(n);
    std::vector<int> tv(n);

    auto all_done = [&] {
        for (const auto& s : schedules)
            if (!s.exhausted()) return false;
        return true;
    };
    auto refresh_tv = [&](int L) {
        for (NodeId v = 0; v < n; ++v) tv[v] = std::min<int>(schedules[v].next(), L);
    };

    std::int64_t last_L = 0;
    for (std::int64_t L = 1; L <= res.budget_outer && !all_done(); ++L) {
        ++res.outer_iterations;
        last_L = L;
        refresh_tv(static_cast<int>(L));
        int tmin = tv[0], tmax = tv[0];
        for (int t : tv) {
            tmin = std::min(tmin, t);
            tmax = std::max(tmax, t);
        }
        res.max_window_spread = std::max(res.max_window_spread, tmax - tmin);
        res.max_window_lag = std::max(res.max_window_lag, static_cast<int>(L) - tmin);

        for (int inner = 0; inner < inner_count; ++inner) {
            refresh_tv(static_cast<int>(L));
            std::vector<int> m =
                opt.oracle_mode
                    ? learn_delays_exact(net, tv, static_cast<int>(L), Q, nullptr, false)
                    : learn_delays(driver, tv, static_cast<int>(L), Q, cst);

            // One simulated action round at the learned virtual round. A node
            // whose search landed above its own progress cannot know its
            // action there and just listens.
            for (NodeId v = 0; v < n; ++v) {
                if (m[v] > tv[v]) {
                    actions[v] = NodeAction::listen();
                    continue;
                }
                NodeAction a = replay_action(P, v, static_cast<Round>(m[v]), sp.base.inputs[v],
                                             res.reconstruction[v]);
                actions[v] = a.is_broadcast()
                                 ? NodeAction::broadcast(
                                       wire::tagged(static_cast<Round>(m[v]), *a.payload))
                                 : NodeAction::listen();
            }
            const std::int64_t round = driver.next_round();
            for (const Delivery& d : driver.execute(actions)) {
                auto frame = wire::parse_tagged(*d.payload);
                if (!frame) continue;
                if (opt.record_transcript)
                    res.sim_received[d.node].push_back({static_cast<Round>(round), *d.payload});
                // Credit only deliveries tagged with the node's own next
                // round while it was simulating that round; stale deliveries
                // fall through.
                if (frame->round == schedules[d.node].next() && m[d.node] == frame->round) {
                    res.reconstruction[d.node].push_back({frame->round, std::move(frame->body)});
                    schedules[d.node].fulfill(frame->round);
                }
            }
            if (all_done()) break;
        }
    }

    res.rounds_used = driver.rounds_used();
    res.completed = all_done();
    res.final_tv.resize(n);
    refresh_tv(static_cast<int>(std::max<std::int64_t>(last_L, 1)));
    for (NodeId v = 0; v < n; ++v) res.final_tv[v] = static_cast<Round>(tv[v]);

    RunOptions oracle_opt;
    oracle_opt.payload_cap = cst.payload_cap;
    Transcript faultless = run(net, P, sp.base.inputs, NoiseModel(0.0, 0), T, oracle_opt);
    res.verified = res.completed && all_verified(verify_simulation(faultless, res.reconstruction));
    return res;
}

}  // namespace nrs
