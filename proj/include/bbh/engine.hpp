#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bbh/graph.hpp"

namespace bbh {

// Append-only binary encoder used for memory equality and hashing.
class Encoder {
public:
    void put(std::int64_t v) { out_.append(reinterpret_cast<const char*>(&v), sizeof v); }
    void put_bool(bool b) { put(b ? 1 : 0); }
    template <class Seq>
    void put_seq(const Seq& s) {
        put(static_cast<std::int64_t>(s.size()));
        for (auto x : s) put(static_cast<std::int64_t>(x));
    }
    void put_str(const std::string& s) {
        put(static_cast<std::int64_t>(s.size()));
        out_ += s;
    }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

// Agent memory. Immutable once built; shared between world copies.
class Memory {
public:
    virtual ~Memory() = default;
    virtual void encode(Encoder& e) const = 0;
    virtual nlohmann::json to_json() const = 0;

    // Verification hooks. belief(): port path from the agent's node to where it
    // believes the bbh is. role(): short label for diagrams.
    virtual std::optional<std::vector<Port>> belief() const { return std::nullopt; }
    virtual std::string role() const { return "?"; }
    // Port this agent is blocking as an anchor, if any.
    virtual std::optional<Port> anchor_port() const { return std::nullopt; }
    // Group label ("SG", "LG", "FREE", "ANCHOR", "MARKER", ...).
    virtual std::string group() const { return ""; }
    // Sequence id of the large group this agent believes it belongs to, or -1.
    virtual int lg_generation() const { return -1; }

    const std::string& bytes() const;
    bool same_as(const Memory& o) const { return bytes() == o.bytes(); }

private:
    mutable std::string cache_;
    mutable bool cached_ = false;
};

using MemoryPtr = std::shared_ptr<const Memory>;

struct Colocated {
    AgentId id;
    const Memory* memory;
};

struct RoundInput {
    int round = 0;  // rounds are numbered from 1; agents keep a synchronized clock
    int degree = 0;
    Port arrival_port = 0;
    std::vector<Colocated> colocated;  // sorted by id, includes the receiver
};

struct Decision {
    Port port = 0;
    MemoryPtr memory;
};

// A protocol maps an agent's input and memory to a move and new memory. It
// must not keep mutable state.
class Protocol {
public:
    virtual ~Protocol() = default;
    virtual std::string name() const = 0;
    virtual MemoryPtr initial_memory(AgentId id, int k) const = 0;
    virtual Decision decide(AgentId self, const RoundInput& in, const Memory& own) const = 0;
};

class ProtocolFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AgentRecord {
    AgentId id = 0;
    bool alive = true;
    int destroyed_round = -1;
    NodeId position = 0;
    Port arrival_port = 0;
    MemoryPtr memory;
};

struct WorldState {
    int round = 0;  // last completed round
    std::vector<AgentRecord> agents;
    std::optional<int> destruction_time;
    int activations = 0;     // rounds in which the adversary activated
    int entry_rounds = 0;    // rounds in which some agent moved into the bbh
    int destroyed_count = 0;
    bool keep_ledger = true;
    std::vector<std::vector<int>> ledger;  // node -> rounds with an alive occupant

    int alive_count() const { return static_cast<int>(agents.size()) - destroyed_count; }
};

WorldState initial_world(const Instance& inst, const Protocol& protocol, bool keep_ledger = true);

// Everything the adversary may look at before choosing.
struct AdversaryView {
    const Instance& instance;
    const WorldState& world;  // start-of-round state
    int round;                // round being executed
    const std::vector<Port>& intended;  // per agent index; -1 for destroyed agents
    int occupied;   // alive agents on the bbh at round start
    int entering;   // alive agents moving into the bbh this round
};

class Adversary {
public:
    virtual ~Adversary() = default;
    virtual bool decide(const AdversaryView& view) = 0;
    virtual std::unique_ptr<Adversary> clone() const = 0;
    virtual std::string state_key() const { return ""; }
    virtual nlohmann::json to_json() const = 0;
};

struct AgentView {
    AgentId id;
    std::string role;
    std::string group;
    std::optional<std::vector<Port>> belief;
    int lg_generation = -1;
    NodeId node = 0;       // node where the decision was taken; beliefs are relative to it
    bool survived = true;  // false when destroyed in this round
};

struct AnchorEvent {
    int round;
    NodeId node;
    Port port;
    AgentId agent;
    bool operator==(const AnchorEvent&) const = default;
};

struct RoundRecord {
    int round = 0;
    std::vector<std::pair<AgentId, Port>> moves;  // alive agents at round start
    bool activated = false;
    std::vector<AgentId> destroyed;
    std::vector<std::pair<AgentId, NodeId>> positions;  // alive agents after the round
    std::vector<AgentView> views;                       // agents that decided this round
    std::vector<AnchorEvent> anchors;
};

struct StepOptions {
    // Order in which agent programs are evaluated; empty means by id. The
    // result must not depend on it.
    std::vector<int> evaluation_order;
    bool record_views = true;
};

RoundRecord step(WorldState& world, const Instance& inst, const Protocol& protocol, Adversary& adversary,
                 const StepOptions& opt = {});

struct ExecutionTrace {
    Instance instance;
    std::string program;
    std::vector<RoundRecord> rounds;
    WorldState final_state;

    const std::vector<std::vector<int>>& ledger() const { return final_state.ledger; }
};

// Runs until the horizon or until every agent is destroyed. horizon >= 1.
ExecutionTrace run(const Instance& inst, const Protocol& protocol, Adversary& adversary, int horizon,
                   const StepOptions& opt = {});

// Per-round view helpers.
std::optional<NodeId> belief_target(const PortGraph& g, NodeId from, const std::vector<Port>& path);

}  // namespace bbh
