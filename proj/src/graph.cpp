#include "bbh/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace bbh {

PortGraph::PortGraph(int node_count, const std::vector<Edge>& edges) {
    if (node_count < 1) throw GraphError("graph needs at least one node");
    std::vector<std::vector<HalfEdge>> adj(node_count);
    auto place = [&](NodeId v, Port p, NodeId to, Port back) {
        if (v < 0 || v >= node_count) throw GraphError("edge endpoint out of range");
        if (p < 1) throw GraphError("port numbers start at 1");
        auto& row = adj[v];
        if (static_cast<int>(row.size()) < p) row.resize(p);
        if (row[p - 1].to != -1)
            throw GraphError("port " + std::to_string(p) + " used twice at node " + std::to_string(v));
        row[p - 1] = {to, back};
    };
    std::set<std::pair<NodeId, NodeId>> seen;
    for (const auto& e : edges) {
        if (e.v == e.u) throw GraphError("self loop at node " + std::to_string(e.v));
        auto key = std::minmax(e.v, e.u);
        if (!seen.insert(key).second) throw GraphError("parallel edge between nodes");
        place(e.v, e.pv, e.u, e.pu);
        place(e.u, e.pu, e.v, e.pv);
    }
    for (NodeId v = 0; v < node_count; ++v) {
        for (const auto& h : adj[v])
            if (h.to == -1) throw GraphError("ports at node " + std::to_string(v) + " are not contiguous");
    }
    adj_ = std::move(adj);
    if (node_count > 1 && static_cast<int>(reachable(*this, 0, -1).size()) != node_count)
        throw GraphError("graph is not connected");
    if (node_count > 1)
        for (NodeId v = 0; v < node_count; ++v)
            if (adj_[v].empty()) throw GraphError("isolated node");
}

int PortGraph::max_degree() const {
    int d = 0;
    for (const auto& row : adj_) d = std::max(d, static_cast<int>(row.size()));
    return d;
}

const HalfEdge& PortGraph::follow(NodeId v, Port p) const {
    const auto& row = adj_.at(v);
    if (p < 1 || p > static_cast<int>(row.size()))
        throw GraphError("port " + std::to_string(p) + " out of range at node " + std::to_string(v));
    return row[p - 1];
}

Port PortGraph::port_to(NodeId v, NodeId u) const {
    const auto& row = adj_.at(v);
    for (size_t i = 0; i < row.size(); ++i)
        if (row[i].to == u) return static_cast<Port>(i + 1);
    return 0;
}

std::vector<Edge> PortGraph::edges() const {
    std::vector<Edge> out;
    for (NodeId v = 0; v < node_count(); ++v)
        for (size_t i = 0; i < adj_[v].size(); ++i) {
            const auto& h = adj_[v][i];
            if (v < h.to) out.push_back({v, static_cast<Port>(i + 1), h.to, h.back});
        }
    return out;
}

bool PortGraph::is_tree() const {
    return static_cast<int>(edges().size()) == node_count() - 1;
}

void validate_instance(const Instance& inst) {
    const int n = inst.graph.node_count();
    if (inst.k < 1) throw GraphError("agent count must be at least 1");
    if (inst.home < 0 || inst.home >= n) throw GraphError("home out of range");
    if (inst.bbh) {
        if (*inst.bbh < 0 || *inst.bbh >= n) throw GraphError("bbh out of range");
        if (*inst.bbh == inst.home) throw GraphError("bbh must differ from home");
    }
}

std::vector<NodeId> reachable(const PortGraph& g, NodeId from, NodeId removed) {
    std::vector<char> mark(g.node_count(), 0);
    std::deque<NodeId> q{from};
    mark[from] = 1;
    std::vector<NodeId> out;
    while (!q.empty()) {
        NodeId v = q.front();
        q.pop_front();
        out.push_back(v);
        for (Port p = 1; p <= g.degree(v); ++p) {
            NodeId u = g.follow(v, p).to;
            if (u == removed || mark[u]) continue;
            mark[u] = 1;
            q.push_back(u);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int ComponentDecomposition::component_of(NodeId v) const {
    for (size_t i = 0; i < components.size(); ++i)
        if (std::binary_search(components[i].begin(), components[i].end(), v)) return static_cast<int>(i);
    return -1;
}

ComponentDecomposition decompose(const Instance& inst) {
    ComponentDecomposition d;
    const auto& g = inst.graph;
    const NodeId b = inst.bbh.value_or(-1);
    std::vector<char> done(g.node_count(), 0);
    if (b >= 0) done[b] = 1;
    auto take = [&](NodeId start) {
        auto comp = reachable(g, start, b);
        for (NodeId v : comp) done[v] = 1;
        d.components.push_back(std::move(comp));
    };
    take(inst.home);
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (!done[v]) take(v);
    return d;
}

}  // namespace bbh
