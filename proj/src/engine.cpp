#include "nrs/engine.hpp"

#include <fstream>

#include <json.hpp>

namespace nrs {

RoundDriver::RoundDriver(const Network& net, NoiseModel noise)
    : net_(&net), noise_(noise), hits_(net.size(), 0), last_sender_(net.size(), -1) {
    deliveries_.reserve(net.size());
    touched_.reserve(net.size());
}

const std::vector<Delivery>& RoundDriver::execute(const std::vector<NodeAction>& actions) {
    if (static_cast<int>(actions.size()) != net_->size())
        throw ConfigError("action vector length does not match network size");
    ++round_;
    deliveries_.clear();
    for (NodeId t : touched_) hits_[t] = 0;
    touched_.clear();

    for (NodeId u = 0; u < net_->size(); ++u) {
        if (!actions[u].is_broadcast()) continue;
        for (NodeId v : net_->out_neighbors(u)) {
            if (hits_[v] == 0) touched_.push_back(v);
            ++hits_[v];
            last_sender_[v] = u;
        }
    }
    RoundLog* log = nullptr;
    if (sink_) {
        sink_->log.emplace_back();
        log = &sink_->log.back();
        log->actions = actions;
        log->faults.assign(net_->size(), 0);
        log->sender.assign(net_->size(), -1);
        for (NodeId v = 0; v < net_->size(); ++v)
            log->faults[v] = noise_.fault(v, round_) ? 1 : 0;
        sink_->rounds = round_;
    }
    for (NodeId v : touched_) {
        if (hits_[v] != 1) continue;               // collision: indistinguishable from silence
        if (actions[v].is_broadcast()) continue;   // broadcasters never receive
        bool faulted = log ? (log->faults[v] != 0) : noise_.fault(v, round_);
        if (faulted) continue;
        NodeId u = last_sender_[v];
        deliveries_.push_back({v, u, &*actions[u].payload});
        if (log) log->sender[v] = u;
    }
    return deliveries_;
}

std::vector<std::optional<Payload>> step(const Network& net,
                                         const std::vector<NodeAction>& actions,
                                         const std::vector<std::uint8_t>& faults) {
    if (static_cast<int>(actions.size()) != net.size() ||
        static_cast<int>(faults.size()) != net.size())
        throw ConfigError("step: vector lengths must match network size");
    std::vector<std::optional<Payload>> out(net.size());
    for (NodeId v = 0; v < net.size(); ++v) {
        if (actions[v].is_broadcast() || faults[v]) continue;
        NodeId sender = -1;
        int count = 0;
        for (NodeId u : net.in_neighbors(v)) {
            if (actions[u].is_broadcast()) {
                ++count;
                sender = u;
            }
        }
        if (count == 1) out[v] = *actions[sender].payload;
    }
    return out;
}

Transcript run(const Network& net, const Protocol& protocol, const Inputs& inputs,
               const NoiseModel& noise, std::int64_t max_rounds, const RunOptions& opt) {
    if (static_cast<int>(inputs.size()) != net.size())
        throw ConfigError("inputs must be indexed by every node");
    if (max_rounds < 0) throw ConfigError("max_rounds must be non-negative");

    Transcript tr;
    tr.inputs = inputs;
    tr.received.resize(net.size());

    RoundDriver driver(net, noise);
    if (opt.record_log) driver.record_into(&tr);

    std::vector<NodeAction> actions(net.size());
    const Round T = protocol.length();
    for (std::int64_t r = 1; r <= max_rounds; ++r) {
        for (NodeId v = 0; v < net.size(); ++v) {
            if (r > T) {
                actions[v] = NodeAction::listen();
                continue;
            }
            History h{&tr.inputs[v], std::span<const ReceiveEvent>(tr.received[v])};
            try {
                actions[v] = protocol.action(v, static_cast<Round>(r), h);
            } catch (const std::exception& e) {
                throw ProtocolError(static_cast<Round>(r), e.what());
            }
            if (actions[v].is_broadcast() &&
                static_cast<int>(actions[v].payload->size()) > opt.payload_cap)
                throw ProtocolError(static_cast<Round>(r), "payload exceeds byte cap");
        }
        for (const Delivery& d : driver.execute(actions))
            tr.received[d.node].push_back({static_cast<Round>(r), *d.payload});
    }
    tr.rounds = max_rounds;
    return tr;
}

std::vector<bool> verify_simulation(const Transcript& original,
                                    const std::vector<std::vector<ReceiveEvent>>& reconstruction) {
    if (original.received.size() != reconstruction.size())
        throw ConfigError("verify_simulation: node count mismatch");
    std::vector<bool> ok(original.received.size());
    for (std::size_t v = 0; v < ok.size(); ++v)
        ok[v] = original.received[v] == reconstruction[v];
    return ok;
}

bool all_verified(const std::vector<bool>& flags) {
    for (bool f : flags)
        if (!f) return false;
    return true;
}

namespace {

std::string to_hex(const Payload& p) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(p.size() * 2);
    for (unsigned char c : p) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0xf]);
    }
    return out;
}

Payload from_hex(const std::string& h) {
    if (h.size() % 2 != 0) throw ConfigError("odd-length hex payload");
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw ConfigError("bad hex digit");
    };
    Payload out;
    out.reserve(h.size() / 2);
    for (std::size_t i = 0; i < h.size(); i += 2)
        out.push_back(static_cast<char>((nib(h[i]) << 4) | nib(h[i + 1])));
    return out;
}

}  // namespace

void write_transcript_jsonl(const Transcript& transcript, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    for (std::size_t v = 0; v < transcript.received.size(); ++v) {
        for (const ReceiveEvent& e : transcript.received[v]) {
            nlohmann::json j;
            j["node"] = static_cast<int>(v);
            j["round"] = e.round;
            j["payload"] = to_hex(e.payload);
            out << j.dump() << '\n';
        }
    }
}

std::vector<std::vector<ReceiveEvent>> read_transcript_jsonl(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open transcript file " + path);
    std::vector<std::vector<ReceiveEvent>> rec(n);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        int node = j.at("node").get<int>();
        if (node < 0 || node >= n) throw ConfigError("transcript node id out of range");
        rec[node].push_back({j.at("round").get<Round>(), from_hex(j.at("payload").get<std::string>())});
    }
    return rec;
}

}  // namespace nrs
