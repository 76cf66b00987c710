#include "nrs/protocols.hpp"

#include <algorithm>

namespace nrs {

NodeAction StarFloodProtocol::action(NodeId v, Round t, const History& h) const {
    if (v != 0) return NodeAction::listen();
    if (static_cast<std::size_t>(t) > h.input->size())
        throw std::runtime_error("flood center is missing input for round " + std::to_string(t));
    return NodeAction::broadcast((*h.input)[t - 1]);
}

RoundRobinProtocol::RoundRobinProtocol(int n,
                                       const std::vector<std::vector<NodeId>>& round_broadcasters)
    : length_(static_cast<Round>(round_broadcasters.size())), broadcast_round_(n, 0) {
    for (Round t = 1; t <= length_; ++t)
        for (NodeId v : round_broadcasters[t - 1]) broadcast_round_[v] = t;
}

NodeAction RoundRobinProtocol::action(NodeId v, Round t, const History& h) const {
    if (broadcast_round_[v] != t) return NodeAction::listen();
    if (h.input->empty())
        throw std::runtime_error("round-robin broadcaster has no private input");
    return NodeAction::broadcast((*h.input)[0]);
}

NodeAction decay_round(bool informed, const Payload& message, int inner_index, double u) {
    if (!informed) return NodeAction::listen();
    const double prob = std::ldexp(1.0, -inner_index);  // 2^-i
    return u < prob ? NodeAction::broadcast(message) : NodeAction::listen();
}

StaticSchedule::StaticSchedule(std::vector<Round> rounds, Round sentinel)
    : rounds_(std::move(rounds)), sentinel_(sentinel) {
    if (!std::is_sorted(rounds_.begin(), rounds_.end()))
        throw ConfigError("static schedule rounds must be sorted");
}

void StaticSchedule::fulfill(Round r) {
    if (exhausted() || rounds_[cursor_] != r)
        throw ConfigError("schedule fulfillment out of order at round " + std::to_string(r));
    ++cursor_;
}

namespace {

Inputs randomized_inputs_like(const Inputs& shape, std::uint64_t seed) {
    Inputs out(shape.size());
    for (std::size_t v = 0; v < shape.size(); ++v) {
        out[v].reserve(shape[v].size());
        for (std::size_t i = 0; i < shape[v].size(); ++i)
            out[v].push_back(default_payload(seed, static_cast<NodeId>(v), static_cast<int>(i)));
    }
    return out;
}

std::vector<std::vector<Round>> receive_rounds(const Transcript& tr) {
    std::vector<std::vector<Round>> out(tr.received.size());
    for (std::size_t v = 0; v < tr.received.size(); ++v)
        for (const ReceiveEvent& e : tr.received[v]) out[v].push_back(e.round);
    return out;
}

}  // namespace

std::vector<StaticSchedule> derive_static_schedule(const Network& net,
                                                   const ProtocolInstance& inst,
                                                   int payload_cap) {
    const Round T = inst.protocol->length();
    RunOptions opt;
    opt.payload_cap = payload_cap;
    Transcript base = run(net, *inst.protocol, inst.inputs, NoiseModel(0.0, 0), T, opt);
    auto base_rounds = receive_rounds(base);

    // Input-independence spot check on two random input vectors.
    for (std::uint64_t probe = 1; probe <= 2; ++probe) {
        Inputs alt = randomized_inputs_like(inst.inputs, 0xA17E5EEDULL * probe);
        Transcript t2 = run(net, *inst.protocol, alt, NoiseModel(0.0, 0), T, opt);
        if (receive_rounds(t2) != base_rounds)
            throw NotStaticError("receive rounds depend on private inputs");
    }

    std::vector<StaticSchedule> schedules;
    schedules.reserve(base_rounds.size());
    for (auto& rounds : base_rounds) schedules.emplace_back(std::move(rounds), T + 1);
    return schedules;
}

StaticProtocolInstance make_static(const Network& net, const ProtocolInstance& inst,
                                   int payload_cap) {
    return {inst, derive_static_schedule(net, inst, payload_cap)};
}

Payload default_payload(std::uint64_t seed, NodeId node, int index) {
    std::uint64_t w = rng::key(seed, rng::Stream::proto_input, static_cast<std::uint64_t>(node),
                               static_cast<std::uint64_t>(index));
    Payload p(8, '\0');
    for (int i = 0; i < 8; ++i) p[i] = static_cast<char>((w >> (8 * i)) & 0xff);
    return p;
}

ProtocolInstance make_star_flood(const Network& net, Round T, std::uint64_t seed) {
    if (net.directed()) throw ConfigError("flood requires an undirected star");
    const int n = net.size();
    if (n < 2 || static_cast<int>(net.neighbors(0).size()) != n - 1)
        throw ConfigError("flood requires a star network with center node 0");
    for (NodeId v = 1; v < n; ++v)
        if (net.neighbors(v).size() != 1) throw ConfigError("flood requires a star network");
    ProtocolInstance inst;
    inst.protocol = std::make_shared<StarFloodProtocol>(T);
    inst.inputs.resize(n);
    for (Round t = 1; t <= T; ++t) inst.inputs[0].push_back(default_payload(seed, 0, t));
    inst.name = "flood:" + std::to_string(T);
    return inst;
}

ProtocolInstance make_silent(const Network& net, Round T) {
    ProtocolInstance inst;
    inst.protocol = std::make_shared<SilentProtocol>(T);
    inst.inputs.resize(net.size());
    inst.name = "silent:" + std::to_string(T);
    return inst;
}

ProtocolInstance make_round_robin(const BipartiteInstance& bip, std::uint64_t seed) {
    ProtocolInstance inst;
    inst.protocol =
        std::make_shared<RoundRobinProtocol>(bip.net.size(), bip.round_broadcasters);
    inst.inputs.resize(bip.net.size());
    for (const auto& round : bip.round_broadcasters)
        for (NodeId v : round) inst.inputs[v].push_back(default_payload(seed, v, 0));
    inst.name = "round_robin";

    // A faultless collision at any right node means generator and protocol
    // disagree about the construction.
    Transcript tr = run(bip.net, *inst.protocol, inst.inputs, NoiseModel(0.0, 0),
                        inst.protocol->length(), {true});
    for (Round t = 1; t <= inst.protocol->length(); ++t) {
        const RoundLog& log = tr.log[t - 1];
        for (NodeId v : bip.right) {
            int broadcasting = 0;
            for (NodeId u : bip.net.in_neighbors(v))
                if (log.actions[u].is_broadcast()) ++broadcasting;
            if (broadcasting > 1)
                throw ConfigError("round-robin collision in faultless run at round " +
                                  std::to_string(t));
        }
    }
    return inst;
}

ProtocolInstance build_protocol(const std::string& spec, const Network& net,
                                const BipartiteInstance* bip, std::uint64_t seed,
                                Round fallback_T) {
    std::string kind = spec;
    Round T = fallback_T;
    if (auto colon = spec.find(':'); colon != std::string::npos) {
        kind = spec.substr(0, colon);
        try {
            T = static_cast<Round>(std::stol(spec.substr(colon + 1)));
        } catch (const std::exception&) {
            throw ConfigError("bad protocol length in '" + spec + "'");
        }
    }
    if (T < 1 && kind != "round_robin") throw ConfigError("protocol length must be >= 1");
    if (kind == "flood") return make_star_flood(net, T, seed);
    if (kind == "silent") return make_silent(net, T);
    if (kind == "round_robin") {
        if (!bip) throw ConfigError("round_robin requires a bipartite graph");
        return make_round_robin(*bip, seed);
    }
    throw ConfigError("unknown protocol '" + kind + "'");
}

RepetitionResult repetition_simulate(const Network& net, const ProtocolInstance& inst,
                                     const NoiseModel& noise, int k) {
    if (k < 1) throw ConfigError("repetition factor must be >= 1");
    if (net.directed()) throw ConfigError("simulators reject directed networks");
    const Round T = inst.protocol->length();
    Transcript faultless = run(net, *inst.protocol, inst.inputs, NoiseModel(0.0, 0), T);

    RepetitionResult res;
    res.reconstruction.resize(net.size());
    RoundDriver driver(net, noise);
    std::vector<NodeAction> actions(net.size());
    std::vector<Round> pending(net.size(), 0);  // original round awaiting delivery, 0 = none
    std::vector<std::size_t> cursor(net.size(), 0);

    for (Round t = 1; t <= T; ++t) {
        for (NodeId v = 0; v < net.size(); ++v) {
            History h{&inst.inputs[v], std::span<const ReceiveEvent>(res.reconstruction[v])};
            actions[v] = inst.protocol->action(v, t, h);
            const auto& want = faultless.received[v];
            pending[v] =
                (cursor[v] < want.size() && want[cursor[v]].round == t) ? t : 0;
        }
        for (int rep = 0; rep < k; ++rep) {
            for (const Delivery& d : driver.execute(actions)) {
                if (pending[d.node] == t) {
                    res.reconstruction[d.node].push_back({t, *d.payload});
                    ++cursor[d.node];
                    pending[d.node] = 0;
                }
            }
        }
    }
    res.rounds_used = driver.rounds_used();
    res.verified = all_verified(verify_simulation(faultless, res.reconstruction));
    return res;
}

}  // namespace nrs
