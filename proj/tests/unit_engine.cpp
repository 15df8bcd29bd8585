#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "bbh/adversary.hpp"
#include "bbh/engine.hpp"
#include "bbh/generators.hpp"
#include "bbh/pattern.hpp"
#include "bbh/trace.hpp"

using namespace bbh;

namespace {

// Memory of the scripted test program: what the agent has seen so far.
class LogMemory final : public Memory {
public:
    std::vector<std::pair<int, std::vector<AgentId>>> seen;  // (round, co-located ids)
    void encode(Encoder& e) const override {
        for (const auto& [r, ids] : seen) {
            e.put(r);
            e.put_seq(ids);
        }
    }
    nlohmann::json to_json() const override { return {{"entries", seen.size()}}; }
};

using Plan = std::map<AgentId, std::vector<Port>>;

// Agents follow fixed port lists (one per round, 0 = stay, past the end stay).
class ScriptProtocol final : public Protocol {
public:
    explicit ScriptProtocol(Plan plan) : plan_(std::move(plan)) {}
    std::string name() const override { return "script"; }
    MemoryPtr initial_memory(AgentId, int) const override { return std::make_shared<LogMemory>(); }
    Decision decide(AgentId self, const RoundInput& in, const Memory& own) const override {
        auto m = std::make_shared<LogMemory>(static_cast<const LogMemory&>(own));
        std::vector<AgentId> ids;
        for (const auto& c : in.colocated) ids.push_back(c.id);
        m->seen.emplace_back(in.round, ids);
        Port p = 0;
        auto it = plan_.find(self);
        if (it != plan_.end() && in.round - 1 < static_cast<int>(it->second.size())) p = it->second[in.round - 1];
        return {p, m};
    }

private:
    Plan plan_;
};

// Path 0 - 1 - 2 with the bbh in the middle, three agents at 0.
Instance small_path() { return build_path(3, 0, 1, 3); }

}  // namespace

TEST(Engine, EnteringAnActiveBbhDestroys) {
    ScriptProtocol proto(Plan{{0, {1}}});
    ScriptedAdversary adv({1});
    auto tr = run(small_path(), proto, adv, 3);
    ASSERT_EQ(tr.rounds[0].destroyed, std::vector<AgentId>{0});
    EXPECT_FALSE(tr.final_state.agents[0].alive);
    EXPECT_EQ(tr.final_state.agents[0].destroyed_round, 1);
    EXPECT_EQ(tr.final_state.destruction_time, 1);
    EXPECT_EQ(tr.final_state.destroyed_count, 1);
}

TEST(Engine, DormantBbhIsHarmless) {
    ScriptProtocol proto(Plan{{0, {1, 1}}});
    ScriptedAdversary adv({3});
    auto tr = run(small_path(), proto, adv, 4);
    for (const auto& r : tr.rounds) EXPECT_TRUE(r.destroyed.empty());
    EXPECT_EQ(tr.final_state.agents[0].position, 2);
    EXPECT_FALSE(tr.final_state.destruction_time.has_value());
}

TEST(Engine, AgentLeavingTheBbhIsStillDestroyed) {
    // enters in round 1 (dormant), tries to leave in round 2 while active
    ScriptProtocol proto(Plan{{0, {1, 1}}});
    ScriptedAdversary adv({2});
    auto tr = run(small_path(), proto, adv, 3);
    EXPECT_TRUE(tr.rounds[0].destroyed.empty());
    EXPECT_EQ(tr.rounds[1].destroyed, std::vector<AgentId>{0});
}

TEST(Engine, ActivationWithNobodyNearbyDestroysNothing) {
    ScriptProtocol proto(Plan{});
    AlwaysActiveAdversary adv;
    auto tr = run(small_path(), proto, adv, 5);
    for (const auto& r : tr.rounds) EXPECT_TRUE(r.destroyed.empty());
    EXPECT_EQ(tr.final_state.alive_count(), 3);
}

TEST(Engine, NoBbhMeansNoDestruction) {
    ScriptProtocol proto(Plan{{0, {1, 1}}, {1, {1}}});
    AlwaysActiveAdversary adv;
    auto tr = run(build_path(3, 0, std::nullopt, 3), proto, adv, 4);
    EXPECT_EQ(tr.final_state.destroyed_count, 0);
}

TEST(Engine, DestroyedAgentsDisappearFromLaterInputs) {
    // agent 0 dies entering the bbh in round 2; agent 1 then passes through the bbh later
    ScriptProtocol proto(Plan{{0, {0, 1, 2}}, {1, {0, 0, 0, 1, 1}}, {2, {}}});
    ScriptedAdversary adv({2});
    auto tr = run(small_path(), proto, adv, 8);
    ASSERT_EQ(tr.final_state.agents[0].destroyed_round, 2);
    for (const auto& a : tr.final_state.agents) {
        if (!a.alive) continue;
        for (const auto& [round, ids] : static_cast<const LogMemory&>(*a.memory).seen) {
            if (round > 2) EXPECT_EQ(std::count(ids.begin(), ids.end(), 0), 0) << "round " << round;
            EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
        }
    }
}

TEST(Engine, LedgerRecordsOccupiedRounds) {
    ScriptProtocol proto(Plan{{0, {1, 1}}});
    BenignAdversary adv;
    auto tr = run(small_path(), proto, adv, 3);
    const auto& led = tr.ledger();
    EXPECT_EQ(led[0].front(), 0);
    EXPECT_EQ(led[1], std::vector<int>{1});
    EXPECT_EQ(led[2], (std::vector<int>{2, 3}));
}

TEST(Engine, InvalidPortIsAFault) {
    ScriptProtocol proto(Plan{{0, {2}}});  // home endpoint has one port
    BenignAdversary adv;
    EXPECT_THROW(run(small_path(), proto, adv, 2), ProtocolFault);
}

TEST(Engine, HorizonMustBePositive) {
    ScriptProtocol proto(Plan{});
    BenignAdversary adv;
    EXPECT_THROW(run(small_path(), proto, adv, 0), std::invalid_argument);
}

TEST(Engine, EvaluationOrderDoesNotMatter) {
    PatternProtocol proto(pattern_config("path6"));
    const Instance inst = build_path(7, 3, 5, 6);
    std::mt19937 rng(7);
    std::string reference;
    for (int trial = 0; trial < 5; ++trial) {
        StepOptions opt;
        opt.evaluation_order.resize(6);
        std::iota(opt.evaluation_order.begin(), opt.evaluation_order.end(), 0);
        if (trial > 0) std::shuffle(opt.evaluation_order.begin(), opt.evaluation_order.end(), rng);
        TriggerAdversary adv{Predicate("entering > 0 and entries == 1")};
        const std::string text = trace_to_jsonl(run(inst, proto, adv, 120, opt));
        if (trial == 0) reference = text;
        else EXPECT_EQ(text, reference) << "trial " << trial;
    }
}

TEST(Engine, RunsAreReproducible) {
    PatternProtocol proto(pattern_config("path4"));
    const Instance inst = build_path(6, 0, 4, 4);
    TriggerAdversary a{Predicate("relevant")}, b{Predicate("relevant")};
    EXPECT_EQ(trace_to_jsonl(run(inst, proto, a, 80)), trace_to_jsonl(run(inst, proto, b, 80)));
}

TEST(Predicate, Grammar) {
    EXPECT_NO_THROW(Predicate("relevant and (round % 2 == 0 or not entering)"));
    EXPECT_NO_THROW(Predicate("since_first_destruction in 1..6"));
    EXPECT_THROW(Predicate("nonsense > 1"), PredicateError);
    EXPECT_THROW(Predicate("round >"), PredicateError);
    EXPECT_THROW(Predicate("(relevant"), PredicateError);
}

TEST(Predicate, TriggerFamilyParsesAndStrikes) {
    PatternProtocol proto(pattern_config("path6"));
    const Instance inst = build_path(6, 0, 3, 6);
    for (const auto& text : trigger_family()) {
        TriggerAdversary adv{Predicate(text)};
        auto tr = run(inst, proto, adv, 200);
        EXPECT_GT(tr.final_state.destroyed_count, 0) << text;
    }
}

TEST(Predicate, BudgetLimitsActivations) {
    PatternProtocol proto(pattern_config("path6"));
    BudgetedAdversary adv(1, Predicate("entering > 0"));
    auto tr = run(build_path(6, 0, 3, 6), proto, adv, 200);
    EXPECT_EQ(tr.final_state.activations, 1);
}

TEST(Predicate, AdversaryFromJson) {
    EXPECT_EQ(make_adversary({{"name", "benign"}})->to_json()["name"], "benign");
    EXPECT_EQ(make_adversary({{"name", "scripted"}, {"rounds", {1, 4}}})->to_json()["name"], "scripted");
    EXPECT_ANY_THROW(make_adversary({{"name", "sneaky"}}));
}
