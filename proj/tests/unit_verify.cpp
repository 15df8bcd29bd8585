#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "bbh/adversary.hpp"
#include "bbh/generators.hpp"
#include "bbh/pattern.hpp"
#include "bbh/verify.hpp"

using namespace bbh;

namespace {

// Every window [s, s + W - 1] inside [warmup, horizon] holds a visit to v.
bool covered_oracle(const std::vector<int>& visits, int warmup, int window, int horizon) {
    for (int s = warmup; s + window - 1 <= horizon; ++s) {
        bool hit = false;
        for (int r : visits) hit = hit || (r >= s && r <= s + window - 1);
        if (!hit) return false;
    }
    return true;
}

}  // namespace

TEST(Coverage, HandLedger) {
    const Instance inst = build_path(3, 0, std::nullopt, 1);
    std::vector<std::vector<int>> ledger = {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {0, 3, 6, 9}, {1, 4, 7, 10}};
    EXPECT_EQ(check_coverage(inst, ledger, {CoverageTarget::WholeGraph, 0, 3}, 10).verdict, Verdict::Pass);
    EXPECT_EQ(check_coverage(inst, ledger, {CoverageTarget::WholeGraph, 0, 2}, 10).verdict, Verdict::Fail);
    // the tail counts: node 1 is last seen at 9, so [10, 12] is empty
    EXPECT_EQ(check_coverage(inst, ledger, {CoverageTarget::WholeGraph, 0, 3}, 12).verdict, Verdict::Fail);
    EXPECT_EQ(check_coverage(inst, ledger, {CoverageTarget::WholeGraph, 8, 5}, 10).verdict, Verdict::Inconclusive);
}

TEST(Coverage, ComponentTargets) {
    // path 0 - 1 - 2 - 3 - 4 with the bbh at 2: components {0,1} and {3,4}
    const Instance inst = build_path(5, 0, 2, 1);
    std::vector<std::vector<int>> ledger(5);
    for (int r = 0; r <= 20; ++r) {
        ledger[r % 2].push_back(r);
    }
    const int H = 20;
    EXPECT_EQ(check_coverage(inst, ledger, {CoverageTarget::HomeComponent, 0, 2}, H).verdict, Verdict::Pass);
    EXPECT_EQ(check_coverage(inst, ledger, {CoverageTarget::AnyComponent, 0, 2}, H).verdict, Verdict::Pass);
    EXPECT_EQ(check_coverage(inst, ledger, {CoverageTarget::WholeGraph, 0, 2}, H).verdict, Verdict::Fail);
    std::vector<std::vector<int>> far(5);
    for (int r = 0; r <= 20; ++r) far[3 + r % 2].push_back(r);
    EXPECT_EQ(check_coverage(inst, far, {CoverageTarget::HomeComponent, 0, 2}, H).verdict, Verdict::Fail);
    EXPECT_EQ(check_coverage(inst, far, {CoverageTarget::AnyComponent, 0, 2}, H).verdict, Verdict::Pass);
}

// Property: the monitor agrees with the brute-force window oracle.
TEST(Coverage, MatchesWindowOracle) {
    std::mt19937 rng(11);
    const Instance inst = build_path(4, 0, std::nullopt, 1);
    for (int trial = 0; trial < 500; ++trial) {
        const int horizon = 10 + static_cast<int>(rng() % 30);
        const int window = 1 + static_cast<int>(rng() % 8);
        const int warmup = static_cast<int>(rng() % 10);
        std::vector<std::vector<int>> ledger(4);
        const int density = 1 + static_cast<int>(rng() % 4);
        for (int v = 0; v < 4; ++v)
            for (int r = 0; r <= horizon + 3; ++r)
                if (rng() % density == 0) ledger[v].push_back(r);
        bool want = true;
        for (int v = 0; v < 4; ++v) want = want && covered_oracle(ledger[v], warmup, window, horizon);
        const auto got = check_coverage(inst, ledger, {CoverageTarget::WholeGraph, warmup, window}, horizon);
        if (horizon + 1 < warmup + window) {
            EXPECT_EQ(got.verdict, Verdict::Inconclusive);
            continue;
        }
        EXPECT_EQ(got.verdict, want ? Verdict::Pass : Verdict::Fail) << "trial " << trial;
    }
}

TEST(Casualties, BenignRunLosesNobody) {
    PatternProtocol proto(pattern_config("path6"));
    BenignAdversary adv;
    auto tr = run(build_path(7, 2, 5, 6), proto, adv, 150);
    const auto r = casualty_report(tr);
    EXPECT_EQ(r.destroyed, 0);
    EXPECT_TRUE(r.per_anchor.empty());
    EXPECT_TRUE(r.anchors.empty());
    EXPECT_EQ(r.free_survivors, 6);
    EXPECT_EQ(to_json(r)["destroyed"], 0);
}

TEST(Knowledge, VacuousWithoutDestruction) {
    PatternProtocol proto(pattern_config("path4"));
    BenignAdversary adv;
    auto tr = run(build_path(6, 0, 3, 4), proto, adv, 100);
    EXPECT_EQ(check_survivor_knowledge(tr).verdict, Verdict::Pass);
    EXPECT_EQ(check_beliefs(tr).verdict, Verdict::Pass);
}

TEST(Suspicious, FirstRoundSuspectsEverythingButHome) {
    PatternProtocol proto(pattern_config("path6"));
    for (NodeId h = 0; h < 5; ++h) {
        const auto p = suspicious_profile(build_path(5, h, (h + 2) % 5, 6), proto, {}, 0, 3);
        ASSERT_FALSE(p.sets.empty());
        std::set<NodeId> want;
        for (NodeId v = 0; v < 5; ++v)
            if (v != h) want.insert(v);
        EXPECT_EQ(p.sets[0], want);
        EXPECT_TRUE(p.none_possible[0]);
    }
}

// Property: suspicious sets only shrink while the agent lives.
TEST(Suspicious, Monotone) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const std::string prog = trial % 2 ? "path4" : "path6";
        PatternProtocol proto(pattern_config(prog));
        const int k = static_cast<int>(proto.config().roles.size());
        const int n = 4 + static_cast<int>(rng() % 3);
        const NodeId h = static_cast<NodeId>(rng() % n);
        const NodeId b = static_cast<NodeId>((h + 1 + rng() % (n - 1)) % n);
        std::set<int> act;
        for (int t = 1; t <= 16; ++t)
            if (rng() % 3 == 0) act.insert(t);
        const AgentId agent = static_cast<AgentId>(rng() % k);
        const auto p = suspicious_profile(build_path(n, h, b, k), proto, act, agent, 16);
        const int alive = p.alive_through.empty() ? 0 : p.alive_through[0];
        for (int t = 1; t < std::min<int>(alive, p.sets.size()); ++t)
            EXPECT_TRUE(std::includes(p.sets[t - 1].begin(), p.sets[t - 1].end(), p.sets[t].begin(), p.sets[t].end()))
                << prog << " trial " << trial << " t " << t + 1;
    }
}

TEST(ModelCheck, PrunedAgreesWithFullSearch) {
    for (const std::string prog : {"path6", "path3"}) {
        PatternProtocol proto(pattern_config(prog));
        const int k = static_cast<int>(proto.config().roles.size());
        for (NodeId b = 1; b < 5; ++b) {
            ModelCheckOptions o;
            o.horizon = 18;
            o.knowledge = true;
            o.coverage = CoverageSpec{CoverageTarget::AnyComponent, 0, 18};
            const Instance inst = build_path(5, 0, b, k);
            o.pruned = true;
            const auto a = model_check(inst, proto, o);
            o.pruned = false;
            const auto c = model_check(inst, proto, o);
            EXPECT_EQ(a.verdict.verdict, c.verdict.verdict) << prog << " bbh " << b;
            EXPECT_LE(a.branches, c.branches);
        }
    }
}

TEST(ModelCheck, CounterexampleReplays) {
    PatternProtocol proto(pattern_config("path3"));
    const Instance inst = build_path(9, 0, 4, 3);
    ModelCheckOptions o;
    o.horizon = pattern_horizon(inst, proto);
    o.coverage = CoverageSpec{CoverageTarget::AnyComponent, pattern_warmup(inst, proto), pattern_window(inst, proto)};
    const auto r = model_check(inst, proto, o);
    ASSERT_EQ(r.verdict.verdict, Verdict::Fail);
    ASSERT_TRUE(r.verdict.schedule.has_value());
    ExecutionTrace tr;
    const std::set<int> sched(r.verdict.schedule->begin(), r.verdict.schedule->end());
    EXPECT_EQ(evaluate_schedule(inst, proto, sched, o, &tr).verdict, Verdict::Fail);
    EXPECT_FALSE(tr.rounds.empty());
    const auto j = verdict_json(r, "cx.jsonl");
    EXPECT_EQ(j["verdict"], "FAIL");
    EXPECT_EQ(j["counterexample_file"], "cx.jsonl");
    EXPECT_EQ(j["schedule"].size(), r.verdict.schedule->size());
}

TEST(ModelCheck, BenignPassesOnTinyPath) {
    PatternProtocol proto(pattern_config("path6"));
    const Instance inst = build_path(4, 1, 3, 6);
    ModelCheckOptions o;
    o.horizon = pattern_horizon(inst, proto);
    o.knowledge = true;
    o.coverage = CoverageSpec{CoverageTarget::HomeComponent, pattern_warmup(inst, proto), pattern_window(inst, proto)};
    const auto r = model_check(inst, proto, o);
    EXPECT_EQ(r.verdict.verdict, Verdict::Pass) << r.verdict.detail;
    EXPECT_GT(r.branches, 1);
}

TEST(ModelCheck, BudgetExhaustionIsInconclusive) {
    PatternProtocol proto(pattern_config("path6"));
    ModelCheckOptions o;
    o.horizon = 200;
    o.budget = 50;
    EXPECT_EQ(model_check(build_path(8, 0, 5, 6), proto, o).verdict.verdict, Verdict::Inconclusive);
}
