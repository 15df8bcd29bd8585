#include "bbh/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "bbh/adversary.hpp"
#include "bbh/general.hpp"
#include "bbh/generators.hpp"
#include "bbh/graph_io.hpp"
#include "bbh/pattern.hpp"

namespace bbh {

namespace {

using nlohmann::json;

std::optional<NodeId> bbh_field(const json& spec) {
    if (!spec.contains("bbh") || spec.at("bbh").is_null()) return std::nullopt;
    return spec.at("bbh").get<NodeId>();
}

template <class T>
T field(const json& spec, const char* key, const char* what) {
    if (!spec.contains(key)) throw ScenarioError(std::string(what) + ": missing \"" + key + "\"");
    try {
        return spec.at(key).get<T>();
    } catch (const json::exception&) {
        throw ScenarioError(std::string(what) + ": bad \"" + key + "\"");
    }
}

std::string program_name(const json& spec) {
    if (spec.is_string()) return spec.get<std::string>();
    if (!spec.is_object()) throw ScenarioError("program: expected an object");
    return field<std::string>(spec, "name", "program");
}

int ring_size(const json& spec, const Instance& inst) {
    if (spec.is_object() && spec.contains("ring_size")) return spec.at("ring_size").get<int>();
    return inst.graph.node_count();
}

json normalize_check(const json& c) {
    if (c.is_string()) return {{"property", c}};
    if (!c.is_object() || !c.contains("property")) throw ScenarioError("check: expected {\"property\": ...}");
    return c;
}

int horizon_of(const Scenario& s, const Instance& inst, const Protocol& proto) {
    if (s.horizon.is_number_integer()) {
        const int h = s.horizon.get<int>();
        if (h < 1) throw ScenarioError("horizon must be >= 1");
        return h;
    }
    if (s.horizon == "auto") {
        if (const auto* p = dynamic_cast<const PatternProtocol*>(&proto)) return pattern_horizon(inst, *p);
        throw ScenarioError("horizon \"auto\" needs a pattern program");
    }
    throw ScenarioError("horizon: expected an integer or \"auto\"");
}

CoverageSpec coverage_of(const json& c, const Instance& inst, const Protocol& proto, const ExecutionTrace* trace,
                         int horizon) {
    CoverageSpec cs;
    cs.target = CoverageTarget::HomeComponent;
    if (c.contains("target")) {
        try {
            cs.target = parse_target(c.at("target").get<std::string>());
        } catch (const std::exception&) {
            throw ScenarioError("coverage: unknown target");
        }
    }
    const json warm = c.value("warmup", json("auto"));
    const json win = c.value("window", json("auto"));
    const auto* pattern = dynamic_cast<const PatternProtocol*>(&proto);
    std::optional<CoverageSpec> settled;
    if ((warm == "auto" || win == "auto") && !pattern) {
        if (!trace) throw ScenarioError("coverage: \"auto\" for this program needs a single run");
        settled = settled_coverage(*trace, horizon);
    }
    if (warm.is_number_integer()) cs.warmup = warm.get<int>();
    else if (warm != "auto") throw ScenarioError("coverage: bad warmup");
    else cs.warmup = pattern ? pattern_warmup(inst, *pattern) : settled->warmup;
    if (win.is_number_integer()) cs.window = win.get<int>();
    else if (win != "auto") throw ScenarioError("coverage: bad window");
    else cs.window = pattern ? pattern_window(inst, *pattern) : settled->window;
    if (cs.window < 1) throw ScenarioError("coverage: window must be >= 1");
    return cs;
}

CheckResult casualty_check(const json& c, const ExecutionTrace& trace) {
    CheckResult res;
    res.property = "casualties";
    const int d = casualty_report(trace).destroyed;
    if (c.contains("exact")) {
        const int want = c.at("exact").get<int>();
        if (d != want) {
            res.verdict = Verdict::Fail;
            res.detail = std::to_string(d) + " destroyed, expected exactly " + std::to_string(want);
        }
    } else if (c.contains("max")) {
        const int cap = c.at("max").get<int>();
        if (d > cap) {
            res.verdict = Verdict::Fail;
            res.detail = std::to_string(d) + " destroyed, bound " + std::to_string(cap);
        }
    } else {
        throw ScenarioError("casualties: needs \"max\" or \"exact\"");
    }
    return res;
}

CheckResult survival_check(const ExecutionTrace& trace) {
    CheckResult res;
    res.property = "survival";
    if (trace.final_state.alive_count() == 0) {
        res.verdict = Verdict::Fail;
        res.detail = "all agents destroyed";
    }
    return res;
}

CheckResult evaluate(const json& c, const Scenario& s, const Instance& inst, const Protocol& proto,
                     const ExecutionTrace& trace, int horizon) {
    const std::string p = c.at("property").get<std::string>();
    if (p == "coverage") return check_coverage(trace, coverage_of(c, inst, proto, &trace, horizon), horizon);
    if (p == "knowledge") return check_survivor_knowledge(trace, c.value("within", 5));
    if (p == "beliefs") return check_beliefs(trace);
    if (p == "survival") return survival_check(trace);
    if (p == "anchor_soundness") return check_anchor_soundness(trace);
    if (p == "anchor_progress") return check_anchor_progress(trace);
    if (p == "lg_safety") return check_lg_safety(trace);
    if (p == "free_survivor") return check_free_survivor(trace);
    if (p == "survivor_map") return check_survivor_map(trace);
    if (p == "casualties") return casualty_check(c, trace);
    throw ScenarioError("scenario " + s.id + ": unknown check \"" + p + "\"");
}

Verdict combine(const std::vector<CheckResult>& checks) {
    Verdict v = Verdict::Pass;
    for (const auto& c : checks) {
        if (c.verdict == Verdict::Fail) return Verdict::Fail;
        if (c.verdict == Verdict::Inconclusive) v = Verdict::Inconclusive;
    }
    return v;
}

}  // namespace

const std::vector<std::string>& program_names() {
    static const std::vector<std::string> names = {"path6", "path5", "path4", "path3",    "tree6",
                                                   "tree4", "ring4", "graph3d3", "bh_delta2"};
    return names;
}

std::unique_ptr<Protocol> make_protocol(const json& spec, const Instance& inst) {
    const std::string name = program_name(spec);
    if (name == "graph3d3") return std::make_unique<GraphHomeProtocol>();
    if (name == "bh_delta2") return std::make_unique<CautiousBhProtocol>();
    if (name == "graph_sg") throw ScenarioError("graph_sg only runs inside graph3d3");
    try {
        return std::make_unique<PatternProtocol>(pattern_config(name, ring_size(spec, inst)));
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(e.what());
    }
}

int default_agents(const json& spec, const Instance& inst) {
    const std::string name = program_name(spec);
    const int delta = inst.graph.max_degree();
    if (name == "graph3d3") return graph_home_agents(delta);
    if (name == "bh_delta2") return delta + 2;
    try {
        return static_cast<int>(pattern_config(name, ring_size(spec, inst)).roles.size());
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(e.what());
    }
}

Instance build_instance(const json& spec, int k, std::uint64_t seed, const std::string& base_dir) {
    if (!spec.is_object()) throw ScenarioError("graph: expected an object");
    try {
        if (spec.contains("file")) {
            std::filesystem::path p = spec.at("file").get<std::string>();
            if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
            return load_instance_file(p.string(), k);
        }
        if (!spec.contains("generator")) return instance_from_json(spec, k);
        const std::string gen = spec.at("generator").get<std::string>();
        if (gen == "path" || gen == "ring") {
            const int n = field<int>(spec, "n", "graph");
            const NodeId home = spec.value("home", 0);
            if (n < (gen == "ring" ? 3 : 1) || home < 0 || home >= n) throw ScenarioError("graph: bad n or home");
            auto b = bbh_field(spec);
            if (b && (*b < 0 || *b >= n || *b == home)) throw ScenarioError("graph: bad bbh");
            return gen == "path" ? build_path(n, home, b, k) : build_ring(n, home, b, k);
        }
        if (gen == "tree") {
            const NodeId home = spec.value("home", 0);
            auto b = bbh_field(spec);
            if (spec.contains("pruefer")) return build_tree_pruefer(spec.at("pruefer").get<std::vector<int>>(), home, b, k);
            auto edges = spec.at("edges").get<std::vector<std::pair<NodeId, NodeId>>>();
            return build_tree(static_cast<int>(edges.size()) + 1, edges, home, b, k);
        }
        if (gen == "random") {
            const int n = field<int>(spec, "n", "graph");
            const int d = spec.value("max_degree", 3);
            const auto s = spec.value("seed", seed);
            return build_random_bounded(n, d, s, k, bbh_field(spec));
        }
        if (gen == "bh_lowerbound") return build_bh_lowerbound_graph(field<int>(spec, "delta", "graph"), k);
        throw ScenarioError("graph: unknown generator \"" + gen + "\"");
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("graph: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(std::string("graph: ") + e.what());
    } catch (const GraphError& e) {
        throw ScenarioError(std::string("graph: ") + e.what());
    }
}

Scenario parse_scenario(const json& j, const std::string& base_dir) {
    if (!j.is_object()) throw ScenarioError("scenario: expected an object");
    Scenario s;
    s.base_dir = base_dir;
    s.id = j.value("id", std::string("scenario"));
    if (!j.contains("graph")) throw ScenarioError("scenario " + s.id + ": missing \"graph\"");
    if (!j.contains("program")) throw ScenarioError("scenario " + s.id + ": missing \"program\"");
    s.graph = j.at("graph");
    s.program = j.at("program");
    program_name(s.program);
    if (j.contains("adversary")) s.adversary = j.at("adversary");
    try {
        s.agents = j.value("agents", 0);
        s.seed = j.value("seed", std::uint64_t{1});
        s.expect = j.value("expect", std::string("PASS"));
    } catch (const json::exception&) {
        throw ScenarioError("scenario " + s.id + ": bad agents, seed or expect");
    }
    if (s.expect != "PASS" && s.expect != "FAIL") throw ScenarioError("scenario " + s.id + ": expect is PASS or FAIL");
    if (j.contains("horizon")) s.horizon = j.at("horizon");
    if (j.contains("checks")) {
        if (!j.at("checks").is_array()) throw ScenarioError("scenario " + s.id + ": checks must be a list");
        for (const auto& c : j.at("checks")) s.checks.push_back(normalize_check(c));
    }
    if (j.contains("modelcheck")) s.modelcheck = j.at("modelcheck");
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot read " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ScenarioError(path + ": " + e.what());
    }
    return parse_scenario(j, std::filesystem::path(path).parent_path().string());
}

ScenarioResult run_scenario(const Scenario& s, bool force_modelcheck) {
    ScenarioResult res;
    res.id = s.id;
    Instance probe = build_instance(s.graph, 1, s.seed, s.base_dir);
    const int k = s.agents > 0 ? s.agents : default_agents(s.program, probe);
    Instance inst = build_instance(s.graph, k, s.seed, s.base_dir);
    auto proto = make_protocol(s.program, inst);
    const int horizon = horizon_of(s, inst, *proto);
    res.horizon = horizon;

    json report;
    report["id"] = s.id;
    report["program"] = proto->name();
    report["agents"] = k;
    report["horizon"] = horizon;

    if (s.modelcheck || force_modelcheck) {
        const json mc = s.modelcheck.value_or(json::object());
        ModelCheckOptions opt;
        opt.horizon = horizon;
        opt.pruned = mc.value("pruned", true);
        opt.budget = mc.value("budget", opt.budget);
        opt.beliefs = false;
        for (const auto& c : s.checks) {
            const std::string p = c.at("property").get<std::string>();
            if (p == "coverage") opt.coverage = coverage_of(c, inst, *proto, nullptr, horizon);
            else if (p == "knowledge") opt.knowledge = true;
            else if (p == "beliefs") opt.beliefs = true;
            else if (p != "survival") throw ScenarioError("scenario " + s.id + ": check \"" + p + "\" is not model checked");
        }
        ModelCheckResult r = model_check(inst, *proto, opt);
        res.checks.push_back(r.verdict);
        res.verdict = r.verdict.verdict;
        if (r.verdict.schedule) {
            ExecutionTrace t;
            std::set<int> sched(r.verdict.schedule->begin(), r.verdict.schedule->end());
            evaluate_schedule(inst, *proto, sched, opt, &t);
            res.trace = std::move(t);
        }
        report["model_check"] = verdict_json(r);
        res.model_check = std::move(r);
    } else {
        std::unique_ptr<Adversary> adv;
        try {
            adv = make_adversary(s.adversary);
        } catch (const std::exception& e) {
            throw ScenarioError("scenario " + s.id + ": adversary: " + e.what());
        }
        ExecutionTrace trace = run(inst, *proto, *adv, horizon);
        for (const auto& c : s.checks) res.checks.push_back(evaluate(c, s, inst, *proto, trace, horizon));
        res.verdict = combine(res.checks);
        report["casualties"] = to_json(casualty_report(trace));
        res.trace = std::move(trace);
    }
    json checks = json::array();
    for (const auto& c : res.checks) checks.push_back(verdict_json(c));
    report["checks"] = checks;
    report["verdict"] = verdict_name(res.verdict);
    res.report = report;
    return res;
}

}  // namespace bbh
