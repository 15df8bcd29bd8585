#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bbh/engine.hpp"
#include "bbh/verify.hpp"

namespace bbh {

// Malformed scenario, manifest or generator spec.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scenario file:
//   {"id": "...",
//    "graph": generator spec | {"file": path} | inline instance,
//    "program": {"name": "path6"} (ring4 takes "ring_size", default n),
//    "agents": k (optional, default: what the program needs),
//    "adversary": adversary spec (default benign),
//    "horizon": int | "auto",
//    "seed": int,
//    "checks": [check, ...],
//    "modelcheck": {"pruned": bool, "budget": int} (optional),
//    "expect": "PASS" | "FAIL"}
//
// Generator specs: {"generator": "path"|"ring", "n", "home", "bbh"},
// {"generator": "tree", "edges": [[a,b],...] | "pruefer": [...], "home", "bbh"},
// {"generator": "random", "n", "max_degree", "seed", "bbh"},
// {"generator": "bh_lowerbound", "delta"}. "bbh": null means no bbh.
//
// Checks: {"property": "coverage", "target", "warmup": int|"auto", "window": int|"auto"},
// "knowledge", "beliefs", "survival", "anchor_soundness", "anchor_progress",
// "lg_safety", "free_survivor", "survivor_map",
// {"property": "casualties", "max": m} or {"property": "casualties", "exact": m}.
// A check given as a plain string uses its defaults.
struct Scenario {
    std::string id;
    nlohmann::json graph;
    nlohmann::json program;
    nlohmann::json adversary = {{"name", "benign"}};
    int agents = 0;  // 0: program default
    nlohmann::json horizon = 100;
    std::uint64_t seed = 1;
    nlohmann::json checks = nlohmann::json::array();
    std::optional<nlohmann::json> modelcheck;
    std::string expect = "PASS";
    std::string base_dir = ".";  // for relative graph files
};

Scenario parse_scenario(const nlohmann::json& j, const std::string& base_dir = ".");
Scenario load_scenario_file(const std::string& path);

// Graph of a scenario; `seed` is used by seeded generators without their own.
Instance build_instance(const nlohmann::json& spec, int k, std::uint64_t seed, const std::string& base_dir = ".");

// Program registry: path6, path5, path4, path3, tree6, tree4, ring4, graph3d3, bh_delta2.
std::unique_ptr<Protocol> make_protocol(const nlohmann::json& spec, const Instance& inst);
int default_agents(const nlohmann::json& spec, const Instance& inst);
const std::vector<std::string>& program_names();

struct ScenarioResult {
    std::string id;
    Verdict verdict = Verdict::Pass;
    std::vector<CheckResult> checks;
    std::optional<ExecutionTrace> trace;          // single runs, and the counterexample of a failed model check
    std::optional<ModelCheckResult> model_check;  // when model checked
    int horizon = 0;
    nlohmann::json report;
};

// Runs (or model checks) the scenario and evaluates its checks.
ScenarioResult run_scenario(const Scenario& s, bool force_modelcheck = false);

}  // namespace bbh
