#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bbh/engine.hpp"

namespace bbh {

enum class CoverageTarget { HomeComponent, AnyComponent, WholeGraph };
enum class Verdict { Pass, Fail, Inconclusive };

const char* verdict_name(Verdict v);
const char* target_name(CoverageTarget t);
CoverageTarget parse_target(const std::string& s);

struct CoverageSpec {
    CoverageTarget target = CoverageTarget::HomeComponent;
    int warmup = 0;
    int window = 1;  // every target node is visited at least once in every window of this many rounds
};

struct CheckResult {
    std::string property;
    Verdict verdict = Verdict::Pass;
    std::string detail;
    std::optional<std::vector<int>> schedule;  // activation rounds reproducing a FAIL
};

// Online window monitor over visits in [warmup, horizon]. A node fails once
// some window inside that range has no visit. Visits before warmup are ignored.
class CoverageMonitor {
public:
    CoverageMonitor(const Instance& inst, const CoverageSpec& spec, int horizon);
    void visit(int round, NodeId v);
    void visit_positions(int round, const WorldState& w);
    // Verdict once the horizon has been reached (closes the final window).
    CheckResult finish() const;
    // Saturated per-node state; equal summaries have equal futures.
    void summarize(Encoder& e, int round) const;

private:
    CoverageSpec spec_;
    int horizon_;
    std::vector<std::vector<NodeId>> components_;  // index 0 is the home component
    bool whole_ = false;
    std::vector<int> last_;
    std::vector<char> failed_;
};

// Ledger-based check of a finished trace. INCONCLUSIVE when the horizon is
// too short to hold one window after warmup.
CheckResult check_coverage(const Instance& inst, const std::vector<std::vector<int>>& ledger,
                           const CoverageSpec& spec, int horizon);
CheckResult check_coverage(const ExecutionTrace& trace, const CoverageSpec& spec, int horizon);

// By the end of round T_d + within some alive agent knows the bbh: some agent
// deciding in a round up to T_d + within + 1 holds a belief naming it.
class KnowledgeMonitor {
public:
    explicit KnowledgeMonitor(int within = 5) : within_(within) {}
    // Feeds one round; returns false once the property is violated.
    bool observe(const Instance& inst, const WorldState& after, const RoundRecord& rec);
    bool pending() const { return td_ >= 0 && !ok_; }
    // Round whose decisions are the last ones examined.
    int deadline() const { return td_ < 0 ? -1 : td_ + within_ + 1; }
    bool failed() const { return failed_; }
    void summarize(Encoder& e, int round) const;

private:
    int within_;
    int td_ = -1;
    bool ok_ = false;
    bool failed_ = false;
};

CheckResult check_survivor_knowledge(const ExecutionTrace& trace, int within = 5);

// Every recorded belief names the true bbh; none appears when there is no bbh
// or no destruction has happened.
CheckResult check_beliefs(const ExecutionTrace& trace);
std::optional<std::string> wrong_belief(const Instance& inst, const WorldState& after, const RoundRecord& rec);

struct CasualtyReport {
    int destroyed = 0;
    std::vector<int> per_anchor;  // casualties since the previous anchor placement, per anchor
    std::vector<AnchorEvent> anchors;
    int free_survivors = 0;
};
CasualtyReport casualty_report(const ExecutionTrace& trace);
nlohmann::json to_json(const CasualtyReport& r);

// Suspicious sets of one agent: for t = 1..T, the bbh positions (and whether
// "no bbh" is possible) under which some activation schedule gives the agent
// the same input history through round t.
struct SuspiciousProfile {
    std::vector<std::set<NodeId>> sets;  // sets[t-1]
    std::vector<bool> none_possible;
    std::vector<int> alive_through;  // last round the agent is alive in the actual run
};
SuspiciousProfile suspicious_profile(const Instance& actual, const Protocol& protocol,
                                     const std::set<int>& activations, AgentId agent, int T,
                                     long budget = 2000000);

// Digest of everything an agent receives at the start of the next round.
std::string input_digest(const WorldState& w, const Instance& inst, int agent_index);

struct ModelCheckOptions {
    int horizon = 100;
    std::optional<CoverageSpec> coverage;  // checked at the horizon
    bool knowledge = false;                // survivor knowledge within 5 rounds
    bool beliefs = true;                   // no wrong belief ever
    bool survival = true;                  // some agent alive at the horizon
    bool pruned = true;                    // branch only on rounds where the activation matters
    long budget = 5000000;                 // maximum simulated rounds
};

struct ModelCheckResult {
    CheckResult verdict;
    long branches = 0;
    long dedup_hits = 0;
    long rounds = 0;
    int max_depth = 0;  // most activations along one explored schedule
};

// Exhaustive search over activation schedules. A FAIL carries the
// lexicographically smallest failing schedule.
ModelCheckResult model_check(const Instance& inst, const Protocol& protocol, const ModelCheckOptions& opt);

// Replays a schedule and evaluates the same properties on the single run.
CheckResult evaluate_schedule(const Instance& inst, const Protocol& protocol, const std::set<int>& schedule,
                              const ModelCheckOptions& opt, ExecutionTrace* trace_out = nullptr);

nlohmann::json verdict_json(const ModelCheckResult& r, const std::string& counterexample_file = "");
nlohmann::json verdict_json(const CheckResult& r, const std::string& counterexample_file = "");

}  // namespace bbh
