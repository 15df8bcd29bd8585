#pragma once

#include <map>
#include <memory>
#include <set>
#include <vector>

#include "bbh/engine.hpp"

namespace bbh {

// Walks that drive the four-agent pattern. Nodes are identified by keys in
// discovery order (key 0 is home); agents that replay the same observations
// assign the same keys.
enum class WalkKind {
    Path,  // depth-limited tour: each phase goes out 2^i along every home port, in port order
    Tree,  // Euler tour (children by increasing port, parent last) capped at 2^i traversals
    Ring,  // always forward, no phases (ring size known)
    Map,   // marker-based map construction on any graph, then a tour of the map's tree
};

enum class ActionKind { None, Make, Translate, Turn, Gather };

struct WalkAction {
    ActionKind kind = ActionKind::None;
    int from = -1;    // front before the action (Make: home)
    int to = -1;      // front after the action
    int back = -1;    // back node during the action (Translate: k0; Gather: node being left)
    Port port = 0;    // port at `from` toward `to` (Gather: port at `back` toward home)
    bool final_into_home = false;
    bool operator==(const WalkAction&) const = default;
};

struct WalkNode {
    int degree = -1;  // -1 until observed
    int parent = -1;
    Port parent_port = 0;  // port at this node toward the parent, 0 if unknown
    Port port_from_parent = 0;
    int depth = 0;
    std::map<Port, int> children;
    int mark = -1;  // marker seen here: 1, not seen: 0, unobserved: -1
    bool operator==(const WalkNode&) const = default;
};

struct WalkCursor {
    int phase = 0;  // 0 before the first phase
    int start_round = 0;
    int front = 0;
    int back = -1;  // -1 while everyone is gathered at home
    int index = 0;  // traversals this phase (tree budget)
    bool returning = false;
    bool truncated = false;
    Port last_root_port = 0;
    int flips = 0;
    int prev_duration = 0;
    bool prev_truncated = true;
    // path walk: (rounds, truncated) per finished home branch, this phase and the previous one
    int branch_start = 0;
    bool branch_truncated = false;
    std::vector<std::pair<int, bool>> branches;
    std::vector<std::pair<int, bool>> prev_branches;
    // map walk: the phase started with a finished map and tours it
    bool tour = false;
    bool prev_tour = false;
    bool operator==(const WalkCursor&) const = default;
};

// A discovered node of the map walk. `key` is its canonical walk key, the
// one reached by following `path` from home; `back` holds the port at each
// node of that path toward the previous one.
struct MapEntry {
    int key = 0;
    int degree = 0;
    std::vector<Port> path;
    std::vector<Port> back;
    std::vector<int> nbr;  // per port: map index, -1 unresolved, -2 blocked
    bool operator==(const MapEntry&) const = default;
};

// For the map walk, keys name walks from home with backtracking removed, so
// one node can carry several keys. Known keys always describe real moves.
class Walk {
public:
    Walk() = default;
    Walk(WalkKind kind, int ring_size = 0);

    WalkKind kind() const { return kind_; }
    const WalkCursor& cursor() const { return cur_; }
    const WalkCursor& phase_start() const { return phase_start_; }
    int version() const { return version_; }
    const std::vector<WalkNode>& nodes() const { return *nodes_; }
    bool known(int key) const {
        return key >= 0 && key < static_cast<int>(nodes_->size()) && (*nodes_)[key].degree >= 0;
    }

    // Records degree and arrival port seen at `key` when entered from `from`,
    // and for the map walk whether the marker is there.
    void observe(int key, int degree, Port arrival, int from, int mark = -1);

    // Next action from the current cursor. Turn is returned on its own; the
    // caller applies it (roles flip) and asks again. Returns kind None when
    // the front has not been observed yet. `round` is the round the action starts.
    WalkAction next(int round);
    bool can_advance() const;

    // Restarts the current phase from its saved starting cursor, keeping the
    // structure learned so far.
    void restart_phase() { cur_ = phase_start_; }

    // Port at x toward adjacent y, 0 if unknown.
    Port port_between(int x, int y) const;
    // Shortest port path from x to y over known edges, nullopt if none.
    std::optional<std::vector<Port>> path(int x, int y) const;
    bool is_ancestor(int a, int x) const;  // a on the tree path from x to home (a != x)
    int parent_of(int key) const;

    // Upper bound on rounds of one phase that starts with cursor c. A path
    // branch that was not truncated last phase repeats its exact duration.
    static int phase_bound(WalkKind kind, const WalkCursor& c, int home_degree = 2);

    // Map walk. Key reached from `key` through port p (created if new).
    int step_key(int key, Port p);
    // Next key the construction needs observed, or -1 once the map is done.
    // Identification by replay toward the marker happens here, on what is
    // already known.
    int map_target();
    bool map_complete() const { return complete_; }
    const std::vector<MapEntry>& map() const { return map_; }
    int map_index(int key) const;  // map entry whose canonical key is `key`, or -1
    void block(int key, Port p);
    bool blocked(int key, Port p) const { return blocked_.count({key, p}) > 0; }
    // Tour of the map's tree: next key after arriving at `key` from `prev`,
    // -1 when the tour ends at home.
    int tour_next(int key, int prev) const;

    void encode(Encoder& e) const;
    nlohmann::json to_json() const;
    bool operator==(const Walk& o) const;

private:
    int child_key(int parent, Port p);
    void begin_phase(int round);
    Port next_child_port(int f) const;
    WalkAction next_map(int round);
    int map_step(int f);
    std::vector<WalkNode>& mut();

    WalkKind kind_ = WalkKind::Path;
    int ring_size_ = 0;
    // copy on write: memories copy walks every round
    std::shared_ptr<const std::vector<WalkNode>> nodes_ = std::make_shared<const std::vector<WalkNode>>();
    std::vector<MapEntry> map_;
    std::set<std::pair<int, Port>> blocked_;
    bool complete_ = false;
    WalkCursor cur_;
    WalkCursor phase_start_;
    int version_ = 0;
};

// Fronts visited by the walk from the start of the cursor's phase, one
// entry per front change (Make, Translate, Turn). Stops after `limit` entries
// or when the walk needs an unobserved node.
std::vector<int> front_sequence(Walk w, int limit);

}  // namespace bbh
