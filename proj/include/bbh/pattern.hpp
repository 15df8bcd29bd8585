#pragma once

#include <set>
#include <string>
#include <vector>

#include "bbh/engine.hpp"
#include "bbh/walk.hpp"

namespace bbh {

// Roles by rank among the agents present in round 1.
enum class Role { F, I2, I1, L, F1, F2, Idle };

const char* role_name(Role r);

struct PatternConfig {
    std::string name;
    WalkKind walk = WalkKind::Path;
    int ring_size = 0;
    std::vector<Role> roles;  // role of rank 0, 1, ...; later ranks are Idle
    // Set when the I1 role is missing: a turn then costs one round in which
    // I2 walks from the new front to the new back.
    bool single_intermediate = false;
    // General graphs: the highest id among the starters is a marker that
    // stays home, and a knower settles as an anchor next to the bbh.
    bool marker = false;
    bool anchor_knowers = false;
};

// Knowledge side relative to the bbh.
enum class Side { None, On, Home, Far };

struct PlanEntry {
    int from = -1;
    int to = -1;
    bool operator==(const PlanEntry&) const = default;
};

class PatternMemory final : public Memory {
public:
    // identity
    AgentId id = 0;
    bool started = false;
    std::vector<AgentId> members;  // ids present in round 1, sorted
    int rank = -1;

    // replicated walk and current step
    Walk walk;
    WalkAction act;
    int step_round = 0;
    int pos_key = 0;   // key of the node at the start of the next round
    int prev_key = -1; // key before the last move

    // absence reasoning
    std::vector<int> seen;   // per rank: last round seen alive
    std::vector<char> dead;  // per rank
    bool has_candidates = false;
    std::set<int> candidates;
    int log_first = 1;
    std::vector<std::vector<PlanEntry>> log;  // per round, per rank

    // knowledge
    bool knows = false;
    bool free = false;       // knower that left the pattern and tracks the bbh by ports
    int know_round = -1;
    int bbh_key = -1;
    std::vector<Port> path;  // port path to the bbh from the node of this round
    Port departure = 0;      // port taken in the last decision
    Side side = Side::None;
    Port home_port = 0;      // port at the bbh toward home
    int rendezvous = -1;     // round at which F1 first enters the bbh
    bool acting = true;

    // F1/F2
    bool cautious = false;
    int cautious_start = -1;
    Port probe_port = 0;
    int probe_key = -1;

    // anchors (general graphs)
    Port anchor = 0;
    bool settled = false;  // found the spot already anchored

    // derived for display
    std::string role_label = "?";

    void encode(Encoder& e) const override;
    nlohmann::json to_json() const override;
    std::optional<std::vector<Port>> belief() const override {
        if (!knows) return std::nullopt;
        return path;
    }
    std::string role() const override { return role_label; }
    std::string group() const override;
    std::optional<Port> anchor_port() const override {
        if (anchor > 0) return anchor;
        return std::nullopt;
    }
};

class PatternProtocol final : public Protocol {
public:
    explicit PatternProtocol(PatternConfig cfg);
    std::string name() const override { return cfg_.name; }
    MemoryPtr initial_memory(AgentId id, int k) const override;
    Decision decide(AgentId self, const RoundInput& in, const Memory& own) const override;
    const PatternConfig& config() const { return cfg_; }

    // Rounds of one step of the given kind.
    int step_length(ActionKind k) const;

private:
    PatternConfig cfg_;
};

// Named configurations: path6, path4, tree6, tree4, ring4 (needs ring_size),
// path3 (pattern without I1), path5 (Home program without F2) and graph_sg
// (the small group of the general-graph program).
PatternConfig pattern_config(const std::string& name, int ring_size = 0);

}  // namespace bbh

namespace bbh {

// Last round of the given phase in the benign execution (the round before
// the pattern starts the next phase). Returns -1 if not reached by `limit`.
int pattern_phase_end(const Instance& inst, const PatternProtocol& protocol, int phase, int limit = 100000);

// Phase ceil(log2 n) for the path walk, the first phase whose move budget
// covers a full tour for the tree walk.
int pattern_covering_phase(const Instance& inst, const PatternProtocol& protocol);

// Coverage window 5 * 2^(j+1) + n with j the covering phase.
int pattern_window(const Instance& inst, const PatternProtocol& protocol);

// Round by which the benign run has visited every node (-1 if not by limit).
int pattern_warmup(const Instance& inst, const PatternProtocol& protocol, int limit = 100000);

// Sweep horizon. Path walk: end of benign phase ceil(log2 n) + 2. Other
// walks: warmup plus three windows.
int pattern_horizon(const Instance& inst, const PatternProtocol& protocol);

}  // namespace bbh
