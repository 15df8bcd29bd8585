#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "bbh/graph.hpp"

namespace bbh {

// Path on nodes 0..n-1. Port 1 points toward the higher index except at the
// right endpoint, whose only port points left.
Instance build_path(int n, NodeId home, std::optional<NodeId> bbh, int k);

// Ring on nodes 0..n-1 (n >= 3). Port 1 leads to i+1, port 2 to i-1.
Instance build_ring(int n, NodeId home, std::optional<NodeId> bbh, int k);

// Tree from an edge list; ports are handed out in edge-list order.
Instance build_tree(int n, const std::vector<std::pair<NodeId, NodeId>>& edges, NodeId home,
                    std::optional<NodeId> bbh, int k);
// Tree from a Pruefer sequence over n = seq.size() + 2 nodes.
Instance build_tree_pruefer(const std::vector<int>& seq, NodeId home, std::optional<NodeId> bbh, int k);
std::vector<std::pair<NodeId, NodeId>> pruefer_edges(const std::vector<int>& seq);

// Seeded connected graph with maximum degree <= max_degree and shuffled ports.
// Home is node 0.
Instance build_random_bounded(int n, int max_degree, std::uint64_t seed, int k,
                              std::optional<NodeId> bbh = std::nullopt);

enum class Membership { Direct, ViaW };  // V1 (edge to the bbh) or V2 (through w_i)

// Node permutation table: node -> new port order. perm[p-1] is the new label
// of the canonical port p.
using PortPermutation = std::map<NodeId, std::vector<Port>>;

struct LowerBoundLayout {
    std::vector<NodeId> spine_v;                 // v_1..v_delta
    std::vector<std::vector<NodeId>> spine_u;    // u^i_1..u^i_{l_i}
    NodeId bbh = -1;
    std::optional<NodeId> z;
    std::map<int, NodeId> w;                     // index i (1-based) -> w_i
    std::vector<NodeId> spine_path;              // full spine in order
};

// Lower-bound family member. lengths has delta-1 entries, membership has
// delta-1 entries (for v_1..v_{delta-1}); home = v_1.
Instance build_lowerbound_family(int delta, const std::vector<int>& lengths,
                                 const std::vector<Membership>& membership, int k,
                                 const PortPermutation& perm = {}, LowerBoundLayout* layout = nullptr);

// Centre of degree delta (the bbh), a ring of delta degree-4 nodes u_i and a
// pendant w_i at each u_i. Home = u_0. Port 1 at every u_i leads to the centre.
Instance build_bh_lowerbound_graph(int delta, int k);

// Applies a per-node relabeling to an instance's graph.
PortGraph relabel_ports(const PortGraph& g, const PortPermutation& perm);

// All unlabeled trees on n nodes up to isomorphism (n <= 10 is practical),
// each as an edge list rooted at node 0.
std::vector<std::vector<std::pair<NodeId, NodeId>>> nonisomorphic_trees(int n);

}  // namespace bbh
