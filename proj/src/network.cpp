#include "nrs/network.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "nrs/rng.hpp"

namespace nrs {

Network::Network(int n, const std::vector<std::pair<NodeId, NodeId>>& edges, bool directed)
    : n_(n), directed_(directed), out_(n), in_(n) {
    if (n < 1) throw ConfigError("network must have at least one node");
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw ConfigError("edge endpoint out of range");
        if (u == v) throw ConfigError("self-loops are not allowed");
        out_[u].push_back(v);
        in_[v].push_back(u);
        if (!directed) {
            out_[v].push_back(u);
            in_[u].push_back(v);
        }
    }
    for (int v = 0; v < n; ++v) {
        auto dedup = [](std::vector<NodeId>& adj) {
            std::sort(adj.begin(), adj.end());
            if (std::adjacent_find(adj.begin(), adj.end()) != adj.end())
                throw ConfigError("duplicate edge");
        };
        dedup(out_[v]);
        dedup(in_[v]);
        max_degree_ = std::max(max_degree_, static_cast<int>(out_[v].size()));
        edge_count_ += static_cast<std::int64_t>(out_[v].size());
    }
    if (!directed) edge_count_ /= 2;
}

bool Network::adjacent(NodeId u, NodeId v) const {
    const auto& adj = out_[u];
    return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<std::vector<NodeId>> Network::two_hop_closure() const {
    std::vector<std::vector<NodeId>> result(n_);
    std::vector<char> mark(n_, 0);
    for (NodeId v = 0; v < n_; ++v) {
        std::vector<NodeId>& close = result[v];
        close.push_back(v);
        mark[v] = 1;
        for (NodeId w : out_[v]) {
            if (!mark[w]) {
                mark[w] = 1;
                close.push_back(w);
            }
            for (NodeId x : out_[w]) {
                if (!mark[x]) {
                    mark[x] = 1;
                    close.push_back(x);
                }
            }
        }
        std::sort(close.begin(), close.end());
        for (NodeId w : close) mark[w] = 0;
    }
    return result;
}

Network make_star(int delta) {
    if (delta < 1) throw ConfigError("star requires delta >= 1");
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 1; i <= delta; ++i) edges.emplace_back(0, i);
    return Network(delta + 1, edges);
}

Network make_path(int n) {
    if (n < 1) throw ConfigError("path requires n >= 1");
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Network(n, edges);
}

Network make_cycle(int n) {
    if (n < 3) throw ConfigError("cycle requires n >= 3");
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    edges.emplace_back(n - 1, 0);
    return Network(n, edges);
}

Network make_random_bounded(int n, int delta, std::uint64_t seed) {
    if (n < 1 || delta < 1) throw ConfigError("random_bounded requires n >= 1, delta >= 1");
    std::vector<std::vector<NodeId>> adj(n);
    std::vector<int> deg(n, 0);
    std::vector<std::pair<NodeId, NodeId>> edges;
    const std::int64_t attempts = static_cast<std::int64_t>(n) * delta * 4;
    for (std::int64_t k = 0; k < attempts; ++k) {
        auto u = static_cast<NodeId>(rng::below(seed, rng::Stream::topology, k, 0, n));
        auto v = static_cast<NodeId>(rng::below(seed, rng::Stream::topology, k, 1, n));
        if (u == v || deg[u] >= delta || deg[v] >= delta) continue;
        if (std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end()) continue;
        adj[u].push_back(v);
        adj[v].push_back(u);
        ++deg[u];
        ++deg[v];
        edges.emplace_back(u, v);
    }
    return Network(n, edges);
}

BipartiteInstance make_directed_bipartite(int delta) {
    if (delta < 1) throw ConfigError("directed_bipartite requires delta >= 1");
    BipartiteInstance inst;
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 0; i < delta; ++i) {
        inst.left.push_back(i);
        inst.right.push_back(delta + i);
        for (int j = 0; j < delta; ++j) edges.emplace_back(i, delta + j);
    }
    inst.net = Network(2 * delta, edges, /*directed=*/true);
    inst.round_broadcasters.resize(delta);
    for (int t = 1; t <= delta; ++t) inst.round_broadcasters[t - 1] = {t - 1};
    return inst;
}

BipartiteInstance make_bipartite_hard(int n, int delta, std::uint64_t seed) {
    if (delta < 1 || n < 1) throw ConfigError("bipartite_hard requires n, delta >= 1");
    if (n % delta != 0) throw ConfigError("bipartite_hard requires delta | n");
    const int group = n / delta;
    if (group < delta)
        throw ConfigError("bipartite_hard requires delta^2 <= n (iteration t indexes group member t)");
    BipartiteInstance inst;
    for (int i = 0; i < n; ++i) inst.left.push_back(i);
    for (int i = 0; i < n; ++i) inst.right.push_back(n + i);
    // l_t^i has id (i-1)*group + (t-1); all its edges are created in iteration t.
    std::vector<std::pair<NodeId, NodeId>> edges;
    inst.round_broadcasters.resize(delta);
    std::vector<int> perm(n);
    for (int t = 1; t <= delta; ++t) {
        std::iota(perm.begin(), perm.end(), 0);
        for (int k = n - 1; k > 0; --k) {
            auto j = static_cast<int>(rng::below(seed, rng::Stream::topology, t, k, k + 1));
            std::swap(perm[k], perm[j]);
        }
        for (int i = 1; i <= delta; ++i) {
            NodeId l = static_cast<NodeId>((i - 1) * group + (t - 1));
            inst.round_broadcasters[t - 1].push_back(l);
            for (int s = 0; s < group; ++s)
                edges.emplace_back(l, static_cast<NodeId>(n + perm[(i - 1) * group + s]));
        }
    }
    inst.net = Network(2 * n, edges);
    return inst;
}

GraphSpec parse_graph_spec(const std::string& text) {
    GraphSpec spec;
    spec.text = text;
    auto colon = text.find(':');
    spec.kind = text.substr(0, colon);
    if (spec.kind == "file") {
        if (colon == std::string::npos) throw ConfigError("file graph spec needs a path");
        spec.path = text.substr(colon + 1);
        return spec;
    }
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                spec.params.push_back(std::stoll(item));
            } catch (const std::exception&) {
                throw ConfigError("bad graph parameter '" + item + "' in " + text);
            }
        }
    }
    return spec;
}

Network build_graph(const GraphSpec& spec, std::uint64_t seed, BipartiteInstance* bip) {
    auto need = [&](std::size_t k) {
        if (spec.params.size() != k)
            throw ConfigError("graph spec " + spec.text + " expects " + std::to_string(k) +
                              " parameter(s)");
    };
    if (spec.kind == "star") {
        need(1);
        return make_star(static_cast<int>(spec.params[0]));
    }
    if (spec.kind == "path") {
        need(1);
        return make_path(static_cast<int>(spec.params[0]));
    }
    if (spec.kind == "cycle") {
        need(1);
        return make_cycle(static_cast<int>(spec.params[0]));
    }
    if (spec.kind == "random" || spec.kind == "random_bounded") {
        need(2);
        return make_random_bounded(static_cast<int>(spec.params[0]),
                                   static_cast<int>(spec.params[1]), seed);
    }
    if (spec.kind == "bipartite_hard") {
        need(2);
        auto inst = make_bipartite_hard(static_cast<int>(spec.params[0]),
                                        static_cast<int>(spec.params[1]), seed);
        if (bip) *bip = inst;
        return inst.net;
    }
    if (spec.kind == "directed_bipartite") {
        need(1);
        auto inst = make_directed_bipartite(static_cast<int>(spec.params[0]));
        if (bip) *bip = inst;
        return inst.net;
    }
    if (spec.kind == "file") {
        return read_graph(spec.path);
    }
    throw ConfigError("unknown graph kind '" + spec.kind + "'");
}

void write_graph(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << net.size() << ' ' << net.edge_count() << ' ' << (net.directed() ? 1 : 0) << '\n';
    for (NodeId u = 0; u < net.size(); ++u)
        for (NodeId v : net.out_neighbors(u))
            if (net.directed() || u < v) out << u << ' ' << v << '\n';
}

Network read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open graph file " + path);
    int n = 0, directed = 0;
    std::int64_t m = 0;
    if (!(in >> n >> m >> directed)) throw ConfigError("bad graph header in " + path);
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    NodeId u, v;
    while (in >> u >> v) edges.emplace_back(u, v);
    if (static_cast<std::int64_t>(edges.size()) != m)
        throw ConfigError("graph file edge count mismatch in " + path);
    return Network(n, edges, directed != 0);
}

}  // namespace nrs
