#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bbh {

using NodeId = int;
using Port = int;  // 1..degree; 0 means "stay"
using AgentId = int;

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One undirected edge with the port numbers at both ends.
struct Edge {
    NodeId v;
    Port pv;
    NodeId u;
    Port pu;
    bool operator==(const Edge&) const = default;
};

struct HalfEdge {
    NodeId to = -1;
    Port back = 0;  // port at `to` leading back
    bool operator==(const HalfEdge&) const = default;
};

// Immutable port-labeled graph. Ports at node v are 1..degree(v).
// The constructor validates port bijection, symmetry, simplicity and
// connectivity and throws GraphError otherwise.
class PortGraph {
public:
    PortGraph() = default;
    PortGraph(int node_count, const std::vector<Edge>& edges);

    int node_count() const { return static_cast<int>(adj_.size()); }
    int degree(NodeId v) const { return static_cast<int>(adj_.at(v).size()); }
    int max_degree() const;
    const HalfEdge& follow(NodeId v, Port p) const;
    // Port at v leading to u, or 0 when not adjacent.
    Port port_to(NodeId v, NodeId u) const;
    // Each edge once, ordered by (v, pv) with v < u.
    std::vector<Edge> edges() const;
    bool is_tree() const;

    bool operator==(const PortGraph& o) const { return adj_ == o.adj_; }

private:
    std::vector<std::vector<HalfEdge>> adj_;
};

struct Instance {
    PortGraph graph;
    int k = 1;
    NodeId home = 0;
    std::optional<NodeId> bbh;

    bool operator==(const Instance&) const = default;
};

// Throws GraphError when home/bbh/k violate the instance invariants.
void validate_instance(const Instance& inst);

struct ComponentDecomposition {
    std::vector<std::vector<NodeId>> components;  // sorted node lists
    int home_component_index = 0;                 // always 0

    const std::vector<NodeId>& home_component() const { return components.at(0); }
    int component_of(NodeId v) const;  // -1 for the bbh
};

ComponentDecomposition decompose(const Instance& inst);

// Nodes reachable from `from` in G minus `removed` (removed may be -1).
std::vector<NodeId> reachable(const PortGraph& g, NodeId from, NodeId removed);

}  // namespace bbh
