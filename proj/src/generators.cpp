#include "bbh/generators.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <string>

namespace bbh {

namespace {

// Hands out ports in order of edge insertion.
class EdgeBuilder {
public:
    explicit EdgeBuilder(int n) : next_(n, 1) {}
    void add(NodeId a, NodeId b) { edges_.push_back({a, next_[a]++, b, next_[b]++}); }
    NodeId add_node() {
        next_.push_back(1);
        return static_cast<NodeId>(next_.size() - 1);
    }
    int size() const { return static_cast<int>(next_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }

private:
    std::vector<Port> next_;
    std::vector<Edge> edges_;
};

Instance finish(PortGraph g, NodeId home, std::optional<NodeId> bbh, int k) {
    Instance inst{std::move(g), k, home, bbh};
    validate_instance(inst);
    return inst;
}

}  // namespace

Instance build_path(int n, NodeId home, std::optional<NodeId> bbh, int k) {
    if (n < 2) throw GraphError("path needs n >= 2");
    std::vector<Edge> edges;
    for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, 1, i + 1, (i + 1 == n - 1) ? 1 : 2});
    return finish(PortGraph(n, edges), home, bbh, k);
}

Instance build_ring(int n, NodeId home, std::optional<NodeId> bbh, int k) {
    if (n < 3) throw GraphError("ring needs n >= 3");
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) edges.push_back({i, 1, (i + 1) % n, 2});
    return finish(PortGraph(n, edges), home, bbh, k);
}

Instance build_tree(int n, const std::vector<std::pair<NodeId, NodeId>>& edges, NodeId home,
                    std::optional<NodeId> bbh, int k) {
    if (static_cast<int>(edges.size()) != n - 1) throw GraphError("a tree on n nodes has n-1 edges");
    EdgeBuilder b(n);
    for (auto [x, y] : edges) b.add(x, y);
    return finish(PortGraph(n, b.edges()), home, bbh, k);
}

std::vector<std::pair<NodeId, NodeId>> pruefer_edges(const std::vector<int>& seq) {
    const int n = static_cast<int>(seq.size()) + 2;
    std::vector<int> deg(n, 1);
    for (int x : seq) {
        if (x < 0 || x >= n) throw GraphError("pruefer entry out of range");
        ++deg[x];
    }
    std::vector<std::pair<NodeId, NodeId>> out;
    std::set<int> leaves;
    for (int v = 0; v < n; ++v)
        if (deg[v] == 1) leaves.insert(v);
    for (int x : seq) {
        int leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        out.emplace_back(std::min(leaf, x), std::max(leaf, x));
        if (--deg[x] == 1) leaves.insert(x);
    }
    int a = *leaves.begin();
    int c = *std::next(leaves.begin());
    out.emplace_back(a, c);
    return out;
}

Instance build_tree_pruefer(const std::vector<int>& seq, NodeId home, std::optional<NodeId> bbh, int k) {
    return build_tree(static_cast<int>(seq.size()) + 2, pruefer_edges(seq), home, bbh, k);
}

Instance build_random_bounded(int n, int max_degree, std::uint64_t seed, int k, std::optional<NodeId> bbh) {
    if (n < 2) throw GraphError("random graph needs n >= 2");
    if (max_degree < 2 && n > 2) throw GraphError("degree bound too small for a connected graph");
    std::mt19937_64 rng(seed);
    auto below = [&](int m) { return static_cast<int>(rng() % static_cast<std::uint64_t>(m)); };
    std::vector<int> deg(n, 0);
    std::set<std::pair<int, int>> present;
    std::vector<std::pair<int, int>> pairs;
    auto add = [&](int a, int b) {
        present.insert(std::minmax(a, b));
        pairs.emplace_back(a, b);
        ++deg[a];
        ++deg[b];
    };
    for (int v = 1; v < n; ++v) {
        std::vector<int> open;
        for (int u = 0; u < v; ++u)
            if (deg[u] < max_degree) open.push_back(u);
        if (open.empty()) throw GraphError("degree bound too small for a connected graph");
        add(open[below(static_cast<int>(open.size()))], v);
    }
    const int extra_tries = n;
    for (int t = 0; t < extra_tries; ++t) {
        int a = below(n), b = below(n);
        if (a == b || deg[a] >= max_degree || deg[b] >= max_degree) continue;
        if (present.count(std::minmax(a, b))) continue;
        add(a, b);
    }
    // random port labels per node
    std::vector<std::vector<Port>> labels(n);
    for (int v = 0; v < n; ++v) {
        labels[v].resize(deg[v]);
        for (int i = 0; i < deg[v]; ++i) labels[v][i] = i + 1;
        for (int i = deg[v] - 1; i > 0; --i) std::swap(labels[v][i], labels[v][below(i + 1)]);
    }
    std::vector<int> used(n, 0);
    std::vector<Edge> edges;
    for (auto [a, b] : pairs) edges.push_back({a, labels[a][used[a]++], b, labels[b][used[b]++]});
    return finish(PortGraph(n, edges), 0, bbh, k);
}

PortGraph relabel_ports(const PortGraph& g, const PortPermutation& perm) {
    auto map_port = [&](NodeId v, Port p) -> Port {
        auto it = perm.find(v);
        if (it == perm.end()) return p;
        if (static_cast<int>(it->second.size()) != g.degree(v))
            throw GraphError("port permutation size mismatch at node " + std::to_string(v));
        return it->second.at(p - 1);
    };
    for (const auto& [v, ps] : perm) {
        std::vector<Port> s = ps;
        std::sort(s.begin(), s.end());
        for (size_t i = 0; i < s.size(); ++i)
            if (s[i] != static_cast<Port>(i + 1)) throw GraphError("not a permutation at node " + std::to_string(v));
    }
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) edges.push_back({e.v, map_port(e.v, e.pv), e.u, map_port(e.u, e.pu)});
    return PortGraph(g.node_count(), edges);
}

Instance build_lowerbound_family(int delta, const std::vector<int>& lengths,
                                 const std::vector<Membership>& membership, int k,
                                 const PortPermutation& perm, LowerBoundLayout* layout) {
    if (delta < 4) throw GraphError("lower-bound family needs delta >= 4");
    if (membership.empty()) throw GraphError("membership must not be empty");
    if (static_cast<int>(membership.size()) != delta - 1)
        throw GraphError("membership needs delta-1 entries");
    if (static_cast<int>(lengths.size()) != delta - 1) throw GraphError("lengths needs delta-1 entries");
    for (int l : lengths)
        if (l < 1) throw GraphError("segment lengths must be positive");

    EdgeBuilder b(0);
    LowerBoundLayout lay;
    // Block 1: the spine.
    lay.spine_u.resize(delta - 1);
    for (int i = 0; i < delta; ++i) {
        NodeId v = b.add_node();
        if (!lay.spine_path.empty()) b.add(lay.spine_path.back(), v);
        lay.spine_v.push_back(v);
        lay.spine_path.push_back(v);
        if (i + 1 < delta) {
            for (int j = 0; j < lengths[i]; ++j) {
                NodeId u = b.add_node();
                b.add(lay.spine_path.back(), u);
                lay.spine_u[i].push_back(u);
                lay.spine_path.push_back(u);
            }
        }
    }
    // Block 2: bbh attachments.
    bool any_direct = false;
    std::vector<Membership> mem = membership;
    for (auto m : mem) any_direct |= (m == Membership::Direct);
    bool vdelta_in_v2 = !any_direct;
    lay.bbh = b.add_node();
    auto attach = [&](int i, Membership m) {
        NodeId v = lay.spine_v[i];
        if (m == Membership::Direct) {
            b.add(v, lay.bbh);
        } else {
            NodeId w = b.add_node();
            b.add(v, w);
            for (int t = 0; t < delta - 2; ++t) b.add(w, b.add_node());
            b.add(w, lay.bbh);
            lay.w[i + 1] = w;
        }
    };
    for (int i = 0; i + 1 < delta; ++i) attach(i, mem[i]);
    if (vdelta_in_v2) attach(delta - 1, Membership::ViaW);
    if (any_direct) {
        NodeId z = b.add_node();
        b.add(lay.bbh, z);
        for (int t = 0; t < delta - 1; ++t) b.add(z, b.add_node());
        lay.z = z;
    }
    // Block 3: height-2 padding trees.
    auto pad = [&](NodeId v, int count) {
        for (int t = 0; t < count; ++t) {
            NodeId vp = b.add_node();
            b.add(v, vp);
            for (int s = 0; s < delta - 1; ++s) b.add(vp, b.add_node());
        }
    };
    pad(lay.spine_v[0], delta - 2);
    for (int i = 1; i + 1 < delta; ++i) pad(lay.spine_v[i], delta - 3);
    for (const auto& seg : lay.spine_u)
        for (NodeId u : seg) pad(u, delta - 2);
    pad(lay.spine_v[delta - 1], vdelta_in_v2 ? delta - 2 : delta - 1);

    PortGraph g(b.size(), b.edges());
    if (!perm.empty()) g = relabel_ports(g, perm);
    if (layout) *layout = lay;
    return finish(std::move(g), lay.spine_v[0], lay.bbh, k);
}

Instance build_bh_lowerbound_graph(int delta, int k) {
    if (delta < 4) throw GraphError("G_delta needs delta >= 4");
    // u_i = i, centre = delta, w_i = delta + 1 + i
    const NodeId centre = delta;
    std::vector<Edge> edges;
    for (int i = 0; i < delta; ++i) {
        int next = (i + 1) % delta;
        edges.push_back({i, 1, centre, i + 1});
        edges.push_back({i, 2, next, 3});
        edges.push_back({i, 4, delta + 1 + i, 1});
    }
    return finish(PortGraph(2 * delta + 1, edges), 0, centre, k);
}

namespace {

std::string rooted_code(const std::vector<std::vector<int>>& adj, int v, int parent) {
    std::vector<std::string> kids;
    for (int u : adj[v])
        if (u != parent) kids.push_back(rooted_code(adj, u, v));
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (auto& k : kids) s += k;
    return s + ")";
}

std::string tree_code(int n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    std::vector<std::vector<int>> adj(n);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    // centres by repeated leaf stripping
    std::vector<int> deg(n);
    std::vector<int> layer;
    for (int v = 0; v < n; ++v) {
        deg[v] = static_cast<int>(adj[v].size());
        if (deg[v] <= 1) layer.push_back(v);
    }
    int remaining = n;
    while (remaining > 2) {
        remaining -= static_cast<int>(layer.size());
        std::vector<int> next;
        for (int v : layer)
            for (int u : adj[v])
                if (--deg[u] == 1) next.push_back(u);
        layer = next;
    }
    std::string best;
    for (int c : layer) {
        std::string s = rooted_code(adj, c, -1);
        if (best.empty() || s < best) best = s;
    }
    return best;
}

}  // namespace

std::vector<std::vector<std::pair<NodeId, NodeId>>> nonisomorphic_trees(int n) {
    std::vector<std::vector<std::pair<NodeId, NodeId>>> out;
    if (n < 1) return out;
    if (n == 1) {
        out.push_back({});
        return out;
    }
    if (n == 2) {
        out.push_back({{0, 1}});
        return out;
    }
    std::set<std::string> codes;
    std::vector<int> seq(n - 2, 0);
    while (true) {
        auto edges = pruefer_edges(seq);
        if (codes.insert(tree_code(n, edges)).second) out.push_back(edges);
        int i = n - 3;
        while (i >= 0 && seq[i] == n - 1) seq[i--] = 0;
        if (i < 0) break;
        ++seq[i];
    }
    return out;
}

}  // namespace bbh
