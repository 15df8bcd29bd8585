#include "bbh/general.hpp"

#include <algorithm>
#include <map>

namespace bbh {

namespace {

const GroupMemory* as_group(const Memory* m) { return dynamic_cast<const GroupMemory*>(m); }
const PatternMemory* as_pattern(const Memory* m) { return dynamic_cast<const PatternMemory*>(m); }

const Memory* memory_of(const RoundInput& in, AgentId id) {
    for (const auto& c : in.colocated)
        if (c.id == id) return c.memory;
    return nullptr;
}

bool anchored_here(const RoundInput& in, AgentId self, Port p) {
    for (const auto& c : in.colocated)
        if (c.id != self && c.memory->anchor_port() == p) return true;
    return false;
}

bool anchor_present(const RoundInput& in, AgentId self) {
    for (const auto& c : in.colocated)
        if (c.id != self && c.memory->anchor_port()) return true;
    return false;
}

void drop(std::vector<AgentId>& lg, std::initializer_list<AgentId> ids) {
    for (AgentId a : ids) lg.erase(std::remove(lg.begin(), lg.end(), a), lg.end());
}

struct Step {
    GroupMemory& m;
    const RoundInput& in;
    AgentId self;
    MemoryPtr out;

    Decision go(Port p) { return {p, out}; }
    Decision stay() { return {0, out}; }

    int marker_here() const { return memory_of(in, m.members.back()) ? 1 : 0; }
    int explorers() const { return m.cautious_bh ? 1 : 3; }
    // Moves without probing first: a remnant too small to explore, or a finished map.
    bool direct() const { return static_cast<int>(m.lg.size()) < explorers() || m.walk.map_complete(); }
    AgentId e(int i) const { return i < static_cast<int>(m.lg.size()) ? m.lg[i] : -1; }

    void end_explore() {
        m.ex_start = -1;
        m.ex_probes = -1;
        m.probes.clear();
        m.v_is_bbh = false;
        m.bad_port = 0;
    }

    void learn_v(const GroupMemory& src) {
        if (src.v_degree >= 0) m.walk.observe(m.ex_key, src.v_degree, src.v_arrival, m.ex_from, src.v_mark);
    }

    void become_anchor(Port p) {
        if (anchor_present(in, self)) {
            m.kind = GroupKind::Free;
        } else {
            m.kind = GroupKind::Anchor;
            m.anchor = p;
        }
        m.lg.clear();
    }

    // Next move of the group from its node; starts a probe when the next node
    // is new and the group is large enough.
    Decision plan() {
        const int r = in.round;
        int next = -1;
        Port port = 0;
        if (!m.walk.map_complete()) {
            const int t = m.walk.map_target();
            if (t >= 0) {
                auto route = m.walk.path(m.pos_key, t);
                if (!route || route->empty()) return stay();
                port = (*route)[0];
                next = m.walk.step_key(m.pos_key, port);
            }
        }
        if (m.walk.map_complete()) {
            next = m.walk.tour_next(m.pos_key, m.prev_key);
            if (next < 0) next = m.walk.tour_next(0, -1);
            if (next < 0) return stay();
            port = m.walk.port_between(m.pos_key, next);
        }
        if (port <= 0) return stay();
        if (m.walk.known(next) || direct()) {
            m.prev_key = m.pos_key;
            m.pos_key = next;
            m.group_moved = true;
            return go(port);
        }
        end_explore();
        m.ex_start = r;
        m.ex_port = port;
        m.ex_key = next;
        m.ex_from = m.pos_key;
        if (m.cautious_bh) return self == e(0) ? go(port) : stay();
        return self == e(1) || self == e(2) ? go(port) : stay();
    }

    // One explorer steps in and comes back; a missing explorer marks the port.
    Decision cautious() {
        const int s = in.round - m.ex_start;
        const AgentId ex = e(0);
        if (self == ex && s == 1) {
            m.v_degree = in.degree;
            m.v_arrival = in.arrival_port;
            m.v_mark = marker_here();
            return go(in.arrival_port);
        }
        if (s < 2) return stay();
        const auto* q = as_group(memory_of(in, ex));
        if (!q) {
            m.walk.block(m.pos_key, m.ex_port);
            drop(m.lg, {ex});
            ++m.generation;
            end_explore();
            return stay();
        }
        learn_v(*q);
        end_explore();
        return plan();
    }

    // Explore(v) with explorers E2, E3; E1 and the rest wait at u.
    Decision explore() {
        const int s = in.round - m.ex_start;
        const AgentId e1 = e(0), e2 = e(1), e3 = e(2);
        const bool away = self == e2 || self == e3;
        if (away && s == 1) {
            m.v_degree = in.degree;
            m.v_arrival = in.arrival_port;
            m.v_mark = marker_here();
            m.probes.clear();
            for (Port p = 1; p <= in.degree; ++p)
                if (p != in.arrival_port && !anchored_here(in, self, p)) m.probes.push_back(p);
            m.ex_probes = static_cast<int>(m.probes.size());
        }
        bool at_u = !away;
        if (away) {
            const int j = (s - 1) / 4, ph = (s - 1) % 4;
            if (j >= m.ex_probes) {
                if (ph == 0) return go(m.v_arrival);  // both back to u
                at_u = true;
            } else if (self == e3) {
                switch (ph) {
                    case 0: return go(m.probes[j]);
                    case 1:
                        for (const auto& c : in.colocated)
                            if (c.id != self && c.memory->anchor_port() == in.arrival_port) m.v_is_bbh = true;
                        return go(in.arrival_port);
                    case 2:
                        if (!memory_of(in, e2)) {
                            // the second explorer died on v: leave it and go on alone
                            m.kind = GroupKind::Free;
                            m.lg.clear();
                            return go(m.v_arrival);
                        }
                        return m.v_is_bbh ? go(m.v_arrival) : stay();
                    default:
                        if (!m.v_is_bbh) return stay();
                        at_u = true;
                }
            } else {
                switch (ph) {
                    case 0:
                    case 1: return stay();
                    case 2: {
                        const auto* q = as_group(memory_of(in, e3));
                        if (!q) m.bad_port = m.probes[j];
                        else if (q->v_is_bbh) m.v_is_bbh = true;
                        return go(m.v_arrival);  // relay to E1
                    }
                    default: at_u = true;
                }
            }
        }
        if (!at_u) return stay();

        // at u: read the relay or notice its absence
        const auto* q2 = as_group(memory_of(in, e2));
        if (q2 && q2->ex_probes >= 0 && m.ex_probes < 0) {
            m.ex_probes = q2->ex_probes;
            m.probes = q2->probes;
        }
        const int probes = m.ex_probes;
        const bool final_due = probes >= 0 ? s == 2 + 4 * probes : s == 2;
        const bool relay_due = probes >= 0 ? (s >= 4 && (s - 4) % 4 == 0 && (s - 4) / 4 < probes) : s == 4;
        if (!q2) {
            if (relay_due || (final_due && probes >= 0)) {
                // E2 died on v
                m.walk.block(m.pos_key, m.ex_port);
                const Port p = m.ex_port;
                end_explore();
                if (self == e1) {
                    become_anchor(p);
                    return stay();
                }
                drop(m.lg, {e1, e2, e3});
                ++m.generation;
            }
            return stay();
        }
        if (final_due) {
            learn_v(*q2);
            end_explore();
            return plan();
        }
        if (!relay_due) return stay();
        if (q2->v_is_bbh) {
            m.walk.block(m.pos_key, m.ex_port);
            const Port p = m.ex_port;
            end_explore();
            if (self == e3) {
                become_anchor(p);
                return stay();
            }
            drop(m.lg, {e3});
            ++m.generation;
            return stay();
        }
        if (q2->bad_port > 0) {
            const Port bad = q2->bad_port;
            learn_v(*q2);
            m.walk.block(m.ex_key, bad);
            const Port p = m.ex_port;
            const int v = m.ex_key;
            end_explore();
            if (self == e2) {
                m.kind = GroupKind::Free;
                m.lg.clear();
                m.pending_anchor = bad;
                m.prev_key = m.pos_key;
                m.pos_key = v;
                return go(p);
            }
            drop(m.lg, {e2, e3});
            ++m.generation;
            return stay();
        }
        return self == e2 ? go(m.ex_port) : stay();
    }

    // Solo walk over the map, no probing; anchors on arrival if it was sent to.
    Decision solo() {
        if (m.pending_anchor > 0) {
            const Port p = m.pending_anchor;
            m.pending_anchor = 0;
            become_anchor(p);
            if (m.kind == GroupKind::Anchor) return stay();
        }
        m.lg = {self};
        m.kind = GroupKind::Group;
        return plan();
    }

    Decision group() {
        const bool away = m.ex_start >= 0 && !m.cautious_bh && (self == e(1) || self == e(2));
        const bool away_bh = m.ex_start >= 0 && m.cautious_bh && self == e(0);
        if (m.group_moved) {
            m.walk.observe(m.pos_key, in.degree, in.arrival_port, m.prev_key, marker_here());
            m.group_moved = false;
        } else if (!away && !away_bh && !m.walk.known(m.pos_key)) {
            m.walk.observe(m.pos_key, in.degree, 0, -1, marker_here());
        }
        if (!away && !away_bh)
            for (const auto& c : in.colocated)
                if (c.id != self)
                    if (auto p = c.memory->anchor_port()) m.walk.block(m.pos_key, *p);
        if (m.ex_start >= 0) return m.cautious_bh ? cautious() : explore();
        return plan();
    }

    void label() {
        switch (m.kind) {
            case GroupKind::Waiting: m.label = "W"; break;
            case GroupKind::Marker: m.label = "M"; break;
            case GroupKind::Anchor: m.label = "A"; break;
            case GroupKind::Free: m.label = "free"; break;
            case GroupKind::Group: {
                const int i = static_cast<int>(std::find(m.lg.begin(), m.lg.end(), self) - m.lg.begin());
                if (m.cautious_bh) m.label = i == 0 ? "X" : "G";
                else if (direct()) m.label = "free";
                else m.label = i < 3 ? "E" + std::to_string(i + 1) : "G";
                break;
            }
        }
    }
};

void start(GroupMemory& m, const RoundInput& in, AgentId self) {
    m.started = true;
    for (const auto& c : in.colocated) m.members.push_back(c.id);
    m.rank = static_cast<int>(std::lower_bound(m.members.begin(), m.members.end(), self) - m.members.begin());
}

}  // namespace

void GroupMemory::encode(Encoder& e) const {
    e.put(id);
    e.put_bool(started);
    e.put_seq(members);
    e.put(rank);
    e.put(static_cast<int>(kind));
    e.put_bool(cautious_bh);
    e.put_seq(lg);
    e.put(generation);
    walk.encode(e);
    e.put(pos_key);
    e.put(prev_key);
    e.put_bool(group_moved);
    e.put(sg_start);
    e.put(sg_deadline);
    e.put_bool(sg_gathered);
    e.put(ex_start);
    e.put(ex_port);
    e.put(ex_key);
    e.put(ex_from);
    e.put(ex_probes);
    e.put_seq(probes);
    e.put(v_degree);
    e.put(v_arrival);
    e.put(v_mark);
    e.put_bool(v_is_bbh);
    e.put(bad_port);
    e.put(anchor);
    e.put(pending_anchor);
    e.put_str(label);
}

nlohmann::json GroupMemory::to_json() const {
    return {{"id", id},          {"kind", group()},    {"role", label},   {"lg", lg},
            {"generation", generation}, {"pos_key", pos_key}, {"anchor", anchor}, {"walk", walk.to_json()}};
}

std::string GroupMemory::group() const {
    switch (kind) {
        case GroupKind::Waiting: return "LG";
        case GroupKind::Marker: return "MARKER";
        case GroupKind::Anchor: return "ANCHOR";
        case GroupKind::Free: return "FREE";
        case GroupKind::Group:
            if (cautious_bh) return "GROUP";
            return lg.size() < 3 || walk.map_complete() ? "FREE" : "LG";
    }
    return "?";
}

int GroupMemory::lg_generation() const {
    return group() == "LG" ? generation : -1;
}

GraphHomeProtocol::GraphHomeProtocol() : sg_(pattern_config("graph_sg")) {}

MemoryPtr GraphHomeProtocol::initial_memory(AgentId id, int) const {
    auto m = std::make_shared<GroupMemory>();
    m->id = id;
    return m;
}

Decision GraphHomeProtocol::decide(AgentId self, const RoundInput& in, const Memory& own) const {
    if (as_pattern(&own)) return sg_.decide(self, in, own);
    const auto* prev = as_group(&own);
    if (!prev) throw ProtocolFault("general program given a foreign memory");
    if (!prev->started) {
        std::vector<AgentId> ids;
        for (const auto& c : in.colocated) ids.push_back(c.id);
        const int rank = static_cast<int>(std::lower_bound(ids.begin(), ids.end(), self) - ids.begin());
        if (rank < 4) return sg_.decide(self, in, *sg_.initial_memory(self, static_cast<int>(ids.size())));
    }
    auto mp = std::make_shared<GroupMemory>(*prev);
    GroupMemory& m = *mp;
    Step st{m, in, self, mp};
    if (!m.started) {
        start(m, in, self);
        if (self == m.members.back()) m.kind = GroupKind::Marker;
        for (AgentId a : m.members)
            if (std::find(m.members.begin(), m.members.begin() + 4, a) == m.members.begin() + 4 &&
                a != m.members.back())
                m.lg.push_back(a);
        if (static_cast<int>(m.members.size()) < 6) throw ProtocolFault("general program needs at least 6 agents");
    }
    Decision d{0, mp};
    switch (m.kind) {
        case GroupKind::Marker:
        case GroupKind::Anchor: break;
        case GroupKind::Waiting: {
            // follow the small group's phases while it passes home
            int sg_home = 0;
            bool gathered = true;
            for (const auto& c : in.colocated) {
                const auto* q = as_pattern(c.memory);
                if (!q || !q->started || q->knows) continue;
                ++sg_home;
                const WalkCursor& ps = q->walk.phase_start();
                if (ps.phase >= 1 && ps.start_round > m.sg_start) {
                    m.sg_start = ps.start_round;
                    m.sg_deadline = ps.start_round + Walk::phase_bound(WalkKind::Map, ps) + 2;
                    m.sg_gathered = false;
                }
                if (q->walk.cursor().back >= 0) gathered = false;
            }
            if (sg_home == 4 && gathered) m.sg_gathered = true;
            if (m.sg_deadline >= 0 && in.round > m.sg_deadline && !m.sg_gathered) {
                m.kind = GroupKind::Group;
                d = st.group();
            }
            break;
        }
        case GroupKind::Group: d = st.group(); break;
        case GroupKind::Free: d = st.solo(); break;
    }
    st.label();
    return d;
}

MemoryPtr CautiousBhProtocol::initial_memory(AgentId id, int) const {
    auto m = std::make_shared<GroupMemory>();
    m->id = id;
    m->cautious_bh = true;
    return m;
}

Decision CautiousBhProtocol::decide(AgentId self, const RoundInput& in, const Memory& own) const {
    const auto* prev = as_group(&own);
    if (!prev) throw ProtocolFault("black hole program given a foreign memory");
    auto mp = std::make_shared<GroupMemory>(*prev);
    GroupMemory& m = *mp;
    Step st{m, in, self, mp};
    if (!m.started) {
        start(m, in, self);
        if (m.members.size() < 2) throw ProtocolFault("black hole program needs at least 2 agents");
        if (self == m.members.back()) {
            m.kind = GroupKind::Marker;
        } else {
            m.kind = GroupKind::Group;
            m.lg.assign(m.members.begin(), m.members.end() - 1);
        }
    }
    Decision d{0, mp};
    if (m.kind == GroupKind::Group) d = st.group();
    else if (m.kind == GroupKind::Free) d = st.solo();
    st.label();
    return d;
}

// ---------------------------------------------------------------- checks

CheckResult check_anchor_soundness(const ExecutionTrace& trace) {
    CheckResult res;
    res.property = "anchor_soundness";
    const auto& inst = trace.instance;
    for (const auto& rec : trace.rounds)
        for (const auto& a : rec.anchors) {
            const bool ok = inst.bbh && inst.graph.follow(a.node, a.port).to == *inst.bbh;
            if (!ok) {
                res.verdict = Verdict::Fail;
                res.detail = "anchor of agent " + std::to_string(a.agent) + " at node " + std::to_string(a.node) +
                             " port " + std::to_string(a.port) + " (round " + std::to_string(a.round) +
                             ") does not lead to the bbh";
                return res;
            }
        }
    return res;
}

CheckResult check_anchor_progress(const ExecutionTrace& trace) {
    CheckResult res;
    res.property = "anchor_progress";
    const auto& inst = trace.instance;
    if (!inst.bbh) return res;
    const NodeId b = *inst.bbh;
    const auto dec = decompose(inst);
    for (NodeId u : dec.home_component()) {
        const Port p = inst.graph.port_to(u, b);
        if (p == 0) continue;
        bool held = false;
        for (const auto& a : trace.final_state.agents)
            if (a.alive && a.position == u && a.memory->anchor_port() == p) held = true;
        if (!held) {
            res.verdict = Verdict::Fail;
            res.detail = "port " + std::to_string(p) + " at node " + std::to_string(u) + " into the bbh is not anchored";
            return res;
        }
    }
    return res;
}

CheckResult check_lg_safety(const ExecutionTrace& trace) {
    CheckResult res;
    res.property = "lg_safety";
    const auto& inst = trace.instance;
    if (!inst.bbh) return res;
    for (const auto& rec : trace.rounds) {
        std::map<int, std::pair<int, int>> gens;  // generation -> (members, on bbh)
        for (const auto& v : rec.views) {
            if (v.group != "LG" || v.lg_generation < 0) continue;
            auto& g = gens[v.lg_generation];
            ++g.first;
            if (v.node == *inst.bbh) ++g.second;
        }
        for (auto [gen, c] : gens)
            if (c.first > 0 && c.first == c.second) {
                res.verdict = Verdict::Fail;
                res.detail = "round " + std::to_string(rec.round) + ": large group " + std::to_string(gen) +
                             " entirely on the bbh";
                return res;
            }
    }
    return res;
}

std::string map_mismatch(const Instance& inst, const Walk& walk) {
    const auto& map = walk.map();
    std::vector<NodeId> where;
    for (const auto& e : map) {
        NodeId v = inst.home;
        for (Port p : e.path) {
            if (p < 1 || p > inst.graph.degree(v)) return "entry path leaves the graph";
            v = inst.graph.follow(v, p).to;
        }
        if (inst.graph.degree(v) != e.degree) return "degree differs at node " + std::to_string(v);
        where.push_back(v);
    }
    for (std::size_t i = 0; i < map.size(); ++i)
        for (Port p = 1; p <= map[i].degree; ++p) {
            const NodeId to = inst.graph.follow(where[i], p).to;
            const int c = map[i].nbr[p - 1];
            if (c == -1) return "port " + std::to_string(p) + " at node " + std::to_string(where[i]) + " unresolved";
            if (c == -2) {
                if (!inst.bbh || to != *inst.bbh)
                    return "port " + std::to_string(p) + " at node " + std::to_string(where[i]) + " blocked wrongly";
            } else if (where[c] != to) {
                return "port " + std::to_string(p) + " at node " + std::to_string(where[i]) + " goes elsewhere";
            }
        }
    std::vector<NodeId> sorted = where;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return "node mapped twice";
    const auto expect = inst.bbh ? decompose(inst).home_component() : reachable(inst.graph, inst.home, -1);
    if (sorted.size() != expect.size()) return "map has " + std::to_string(sorted.size()) + " nodes, expected " +
                                               std::to_string(expect.size());
    return "";
}

}  // namespace bbh

namespace bbh {

CheckResult check_free_survivor(const ExecutionTrace& trace) {
    CheckResult res;
    res.property = "free_survivor";
    for (const auto& a : trace.final_state.agents)
        if (a.alive && a.memory->group() == "FREE") return res;
    res.verdict = Verdict::Fail;
    res.detail = "no FREE agent alive at the end";
    return res;
}

CheckResult check_survivor_map(const ExecutionTrace& trace) {
    CheckResult res;
    res.property = "survivor_map";
    std::string why = "no alive group member";
    for (const auto& a : trace.final_state.agents) {
        const auto* m = as_group(a.memory.get());
        if (!a.alive || !m || m->kind == GroupKind::Marker) continue;
        if (!m->walk.map_complete()) {
            why = "map of agent " + std::to_string(a.id) + " unfinished";
            continue;
        }
        const std::string bad = map_mismatch(trace.instance, m->walk);
        if (bad.empty()) return res;
        why = "agent " + std::to_string(a.id) + ": " + bad;
    }
    res.verdict = Verdict::Fail;
    res.detail = why;
    return res;
}

CoverageSpec settled_coverage(const ExecutionTrace& trace, int horizon) {
    const int window = 8 * trace.instance.graph.node_count();
    std::map<AgentId, std::string> label;
    int last_change = 0;
    for (const auto& rec : trace.rounds)
        for (const auto& v : rec.views) {
            auto it = label.find(v.id);
            if (it == label.end() || it->second != v.group) {
                label[v.id] = v.group;
                last_change = rec.round;
            }
        }
    return CoverageSpec{CoverageTarget::HomeComponent, std::max(last_change + window, horizon / 2), window};
}

}  // namespace bbh
