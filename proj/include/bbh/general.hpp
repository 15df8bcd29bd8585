#pragma once

#include <string>
#include <vector>

#include "bbh/engine.hpp"
#include "bbh/pattern.hpp"
#include "bbh/verify.hpp"
#include "bbh/walk.hpp"

namespace bbh {

enum class GroupKind {
    Waiting,  // large group at home, watching the small group's deadlines
    Marker,
    Group,    // member of the walking large group (or of a remnant)
    Anchor,
    Free,     // left its group alone
};

// Memory of every agent of the general-graph programs that is not in the
// small pattern group.
class GroupMemory final : public Memory {
public:
    AgentId id = 0;
    bool started = false;
    std::vector<AgentId> members;  // ids present in round 1, sorted
    int rank = -1;
    GroupKind kind = GroupKind::Waiting;
    bool cautious_bh = false;  // single-explorer program for the classical black hole

    std::vector<AgentId> lg;  // current group, sorted
    int generation = 0;
    Walk walk{WalkKind::Map};
    int pos_key = 0;
    int prev_key = -1;
    bool group_moved = false;

    // small-group deadline tracking while waiting
    int sg_start = -1;
    int sg_deadline = -1;
    bool sg_gathered = false;

    // Explore(v): offsets count from the round the explorers left u
    int ex_start = -1;
    Port ex_port = 0;
    int ex_key = -1;
    int ex_from = -1;
    int ex_probes = -1;  // neighbours of v to probe, -1 until known
    std::vector<Port> probes;
    int v_degree = -1;
    Port v_arrival = 0;
    int v_mark = -1;
    bool v_is_bbh = false;  // third explorer met the anchor guarding v
    Port bad_port = 0;      // port at v whose probe did not come back

    Port anchor = 0;
    Port pending_anchor = 0;  // anchors at the next node it reaches
    std::string label = "?";

    void encode(Encoder& e) const override;
    nlohmann::json to_json() const override;
    std::string role() const override { return label; }
    std::string group() const override;
    std::optional<Port> anchor_port() const override {
        if (anchor > 0) return anchor;
        return std::nullopt;
    }
    int lg_generation() const override;
};

// The 3*Delta+3 Home program: the four lowest ids run the pattern over the
// marker-based map walk, the highest id is the marker, the rest wait at home
// and take over as a large group once the pattern misses a return deadline.
class GraphHomeProtocol final : public Protocol {
public:
    GraphHomeProtocol();
    std::string name() const override { return "graph3d3"; }
    MemoryPtr initial_memory(AgentId id, int k) const override;
    Decision decide(AgentId self, const RoundInput& in, const Memory& own) const override;

private:
    PatternProtocol sg_;
};

// Delta+2 program for an always-active black hole: marker at home, the rest
// walk the map together behind one explorer that tests every new node first.
class CautiousBhProtocol final : public Protocol {
public:
    std::string name() const override { return "bh_delta2"; }
    MemoryPtr initial_memory(AgentId id, int k) const override;
    Decision decide(AgentId self, const RoundInput& in, const Memory& own) const override;
};

// Agents the general program needs for maximum degree delta.
inline int graph_home_agents(int delta) { return 3 * delta + 3; }

// Every anchor blocks an edge into the bbh, and no anchor appears without a bbh.
CheckResult check_anchor_soundness(const ExecutionTrace& trace);
// At the end of the trace every port from the home component into the bbh
// is held by a live anchor.
CheckResult check_anchor_progress(const ExecutionTrace& trace);
// No round starts with the whole large group on the bbh.
CheckResult check_lg_safety(const ExecutionTrace& trace);

// Some alive agent is FREE at the end of the trace.
CheckResult check_free_survivor(const ExecutionTrace& trace);
// Some alive group member holds a finished map that passes map_mismatch.
CheckResult check_survivor_map(const ExecutionTrace& trace);

// Coverage of the home component once the groups have settled: window 8n,
// warmup one window after the last change of any agent's group label but
// not before half the horizon.
CoverageSpec settled_coverage(const ExecutionTrace& trace, int horizon);

// The map of a surviving group member, checked against the graph: every
// entry sits where its home path leads, and its ports go where the graph
// says, with ports into the bbh blocked. Empty string when correct.
std::string map_mismatch(const Instance& inst, const Walk& walk);

}  // namespace bbh
