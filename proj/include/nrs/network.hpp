// Radio network topology: undirected (or directed) graph with dense node ids,
// a true max-degree bound, graph generators and the edge-list file format.

#pragma once

#include <string>
#include <vector>

#include "nrs/common.hpp"

namespace nrs {

class Network {
public:
    Network() = default;
    // Edges are (u, v) pairs; for undirected graphs each pair is stored both ways.
    Network(int n, const std::vector<std::pair<NodeId, NodeId>>& edges, bool directed = false);

    int size() const { return n_; }
    bool directed() const { return directed_; }
    int max_degree() const { return max_degree_; }  // true maximum out-degree
    std::int64_t edge_count() const { return edge_count_; }

    const std::vector<NodeId>& out_neighbors(NodeId v) const { return out_[v]; }
    const std::vector<NodeId>& in_neighbors(NodeId v) const { return in_[v]; }
    // neighbors() is the undirected view used by the simulators.
    const std::vector<NodeId>& neighbors(NodeId v) const { return out_[v]; }
    bool adjacent(NodeId u, NodeId v) const;

    // Nodes within distance <= 2, including v itself.
    std::vector<std::vector<NodeId>> two_hop_closure() const;

private:
    int n_ = 0;
    bool directed_ = false;
    int max_degree_ = 0;
    std::int64_t edge_count_ = 0;
    std::vector<std::vector<NodeId>> out_;
    std::vector<std::vector<NodeId>> in_;
};

Network make_star(int delta);                       // node 0 is the center
Network make_path(int n);                           // 0-1-2-...-(n-1)
Network make_cycle(int n);
Network make_random_bounded(int n, int delta, std::uint64_t seed);

// Bipartite generators keep the structure the round-robin protocol needs.
struct BipartiteInstance {
    Network net;
    std::vector<NodeId> left;
    std::vector<NodeId> right;
    // round_broadcasters[t-1] lists the left nodes that broadcast in round t
    // of the faultless round-robin protocol.
    std::vector<std::vector<NodeId>> round_broadcasters;
};

// Complete directed bipartite graph, |L| = |R| = delta, arcs L -> R only.
BipartiteInstance make_directed_bipartite(int delta);

// Candidate hard construction: |L| = |R| = n, L in delta groups of n/delta;
// iteration t draws a fresh permutation of R, splits it into delta blocks and
// connects l_t^i to all of block i. Requires delta | n and delta^2 <= n.
BipartiteInstance make_bipartite_hard(int n, int delta, std::uint64_t seed);

// Parsed graph specs of the form "star:8", "bipartite_hard:16,4", "file:g.edges".
struct GraphSpec {
    std::string kind;
    std::vector<std::int64_t> params;
    std::string path;  // for kind == "file"
    std::string text;  // original spec string
};
GraphSpec parse_graph_spec(const std::string& text);
// Builds the network; bipartite kinds also fill *bip when non-null.
Network build_graph(const GraphSpec& spec, std::uint64_t seed, BipartiteInstance* bip = nullptr);

// Edge-list file format: first line "n m directed", then one "u v" per line.
void write_graph(const Network& net, const std::string& path);
Network read_graph(const std::string& path);

}  // namespace nrs
