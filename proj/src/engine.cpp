#include "bbh/engine.hpp"

#include <algorithm>
#include <numeric>

namespace bbh {

const std::string& Memory::bytes() const {
    if (!cached_) {
        Encoder e;
        encode(e);
        cache_ = e.take();
        cached_ = true;
    }
    return cache_;
}

WorldState initial_world(const Instance& inst, const Protocol& protocol, bool keep_ledger) {
    validate_instance(inst);
    WorldState w;
    w.keep_ledger = keep_ledger;
    for (AgentId id = 0; id < inst.k; ++id) {
        AgentRecord a;
        a.id = id;
        a.position = inst.home;
        a.memory = protocol.initial_memory(id, inst.k);
        w.agents.push_back(std::move(a));
    }
    if (keep_ledger) {
        w.ledger.assign(inst.graph.node_count(), {});
        w.ledger[inst.home].push_back(0);
    }
    return w;
}

RoundRecord step(WorldState& world, const Instance& inst, const Protocol& protocol, Adversary& adversary,
                 const StepOptions& opt) {
    const auto& g = inst.graph;
    const int r = world.round + 1;
    const int k = static_cast<int>(world.agents.size());
    const NodeId b = inst.bbh.value_or(-1);

    // (1) inputs from start-of-round positions
    std::vector<std::vector<int>> at_node(g.node_count());
    for (int i = 0; i < k; ++i)
        if (world.agents[i].alive) at_node[world.agents[i].position].push_back(i);

    // (2) decisions, each from its own input only
    std::vector<int> order = opt.evaluation_order;
    if (order.empty()) {
        order.resize(k);
        std::iota(order.begin(), order.end(), 0);
    }
    std::vector<Decision> decisions(k);
    std::vector<Port> intended(k, -1);
    for (int i : order) {
        const auto& a = world.agents[i];
        if (!a.alive) continue;
        RoundInput in;
        in.round = r;
        in.degree = g.degree(a.position);
        in.arrival_port = a.arrival_port;
        for (int j : at_node[a.position]) in.colocated.push_back({world.agents[j].id, world.agents[j].memory.get()});
        Decision d = protocol.decide(a.id, in, *a.memory);
        if (d.port < 0 || d.port > in.degree)
            throw ProtocolFault("agent " + std::to_string(a.id) + " chose port " + std::to_string(d.port) +
                                " at a node of degree " + std::to_string(in.degree) + " in round " +
                                std::to_string(r));
        if (!d.memory) throw ProtocolFault("agent " + std::to_string(a.id) + " returned no memory");
        intended[i] = d.port;
        decisions[i] = std::move(d);
    }

    // (3) adversary
    int occupied = 0, entering = 0;
    if (b >= 0)
        for (int i = 0; i < k; ++i) {
            const auto& a = world.agents[i];
            if (!a.alive) continue;
            if (a.position == b) ++occupied;
            else if (intended[i] > 0 && g.follow(a.position, intended[i]).to == b) ++entering;
        }
    AdversaryView view{inst, world, r, intended, occupied, entering};
    const bool activated = adversary.decide(view);

    RoundRecord rec;
    rec.round = r;
    rec.activated = activated;
    for (int i = 0; i < k; ++i)
        if (world.agents[i].alive) rec.moves.emplace_back(world.agents[i].id, intended[i]);

    // (4) destruction, (5) movement
    for (int i = 0; i < k; ++i) {
        auto& a = world.agents[i];
        if (!a.alive) continue;
        const Port p = intended[i];
        const NodeId start = a.position;
        const NodeId dest = p == 0 ? start : g.follow(start, p).to;
        const auto old_anchor = a.memory->anchor_port();
        a.memory = decisions[i].memory;
        const bool dies = activated && b >= 0 && (start == b || dest == b);
        if (opt.record_views)
            rec.views.push_back({a.id, a.memory->role(), a.memory->group(), a.memory->belief(),
                                 a.memory->lg_generation(), start, !dies});
        if (dies) {
            a.alive = false;
            a.destroyed_round = r;
            a.position = b;
            rec.destroyed.push_back(a.id);
            ++world.destroyed_count;
            continue;
        }
        const auto new_anchor = a.memory->anchor_port();
        if (new_anchor && old_anchor != new_anchor) rec.anchors.push_back({r, start, *new_anchor, a.id});
        a.position = dest;
        a.arrival_port = p == 0 ? 0 : g.follow(start, p).back;
    }
    if (activated) ++world.activations;
    if (entering > 0) ++world.entry_rounds;
    if (!rec.destroyed.empty() && !world.destruction_time) world.destruction_time = r;
    world.round = r;

    for (const auto& a : world.agents) {
        if (!a.alive) continue;
        rec.positions.emplace_back(a.id, a.position);
        if (world.keep_ledger) {
            auto& row = world.ledger[a.position];
            if (row.empty() || row.back() != r) row.push_back(r);
        }
    }
    return rec;
}

ExecutionTrace run(const Instance& inst, const Protocol& protocol, Adversary& adversary, int horizon,
                   const StepOptions& opt) {
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    ExecutionTrace t{inst, protocol.name(), {}, initial_world(inst, protocol)};
    while (t.final_state.round < horizon && t.final_state.alive_count() > 0)
        t.rounds.push_back(step(t.final_state, inst, protocol, adversary, opt));
    return t;
}

std::optional<NodeId> belief_target(const PortGraph& g, NodeId from, const std::vector<Port>& path) {
    NodeId v = from;
    for (Port p : path) {
        if (p < 1 || p > g.degree(v)) return std::nullopt;
        v = g.follow(v, p).to;
    }
    return v;
}

}  // namespace bbh
