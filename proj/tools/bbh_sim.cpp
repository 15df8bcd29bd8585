// bbh_sim: run scenarios, suites and model checks, generate graphs, render traces.
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or schema error.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "bbh/generators.hpp"
#include "bbh/graph_io.hpp"
#include "bbh/scenario.hpp"
#include "bbh/trace.hpp"

#ifndef BBH_MANIFEST_DIR
#define BBH_MANIFEST_DIR "manifests"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bbh;

namespace {

struct Overrides {
    std::optional<int> horizon;
    std::optional<std::uint64_t> seed;
};

void apply(Scenario& s, const Overrides& o) {
    if (o.horizon) s.horizon = *o.horizon;
    if (o.seed) s.seed = *o.seed;
}

void write_text(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

// Writes trace and report under dir; returns the trace file name (empty if none).
std::string save_result(const ScenarioResult& r, const fs::path& dir) {
    std::string trace_file;
    if (r.trace) {
        trace_file = r.id + ".trace.jsonl";
        write_text(dir / trace_file, trace_to_jsonl(*r.trace));
    }
    json report = r.report;
    if (!trace_file.empty()) report["trace_file"] = trace_file;
    write_text(dir / (r.id + ".report.json"), report.dump(2) + "\n");
    return trace_file;
}

int jobs_setting(int flag) {
    if (const char* env = std::getenv("BBH_SIM_JOBS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (const std::exception&) {
            throw ScenarioError("BBH_SIM_JOBS must be an integer");
        }
    }
    return std::max(1, flag);
}

fs::path manifest_path(const std::string& arg) {
    if (fs::exists(arg)) return arg;
    fs::path named = fs::path(BBH_MANIFEST_DIR) / (arg + ".json");
    if (fs::exists(named)) return named;
    throw ScenarioError("no manifest '" + arg + "'");
}

int cmd_run(const std::string& file, const Overrides& o, const std::string& out, bool modelcheck) {
    Scenario s = load_scenario_file(file);
    apply(s, o);
    ScenarioResult r = run_scenario(s, modelcheck);
    const std::string trace_file = save_result(r, out);
    json report = r.report;
    if (!trace_file.empty()) report["trace_file"] = trace_file;
    std::cout << report.dump(2) << "\n";
    return r.verdict == Verdict::Pass ? 0 : 1;
}

int cmd_modelcheck(const std::string& file, const Overrides& o, const std::string& out) {
    Scenario s = load_scenario_file(file);
    apply(s, o);
    ScenarioResult r = run_scenario(s, true);
    std::string cx;
    if (r.trace) {
        cx = (fs::path(out) / (r.id + ".counterexample.jsonl")).string();
        write_text(cx, trace_to_jsonl(*r.trace));
    }
    std::cout << verdict_json(*r.model_check, cx).dump(2) << "\n";
    return r.verdict == Verdict::Pass ? 0 : 1;
}

int cmd_suite(const std::string& arg, const Overrides& o, const std::string& out, int jobs) {
    const fs::path path = manifest_path(arg);
    std::ifstream in(path);
    json manifest;
    try {
        in >> manifest;
    } catch (const json::exception& e) {
        throw ScenarioError(path.string() + ": " + e.what());
    }
    if (!manifest.is_object() || !manifest.contains("scenarios") || !manifest.at("scenarios").is_array())
        throw ScenarioError("manifest needs a \"scenarios\" list");
    const std::string base = path.parent_path().string();
    std::vector<Scenario> scenarios;
    for (const auto& entry : manifest.at("scenarios")) {
        Scenario s;
        if (entry.contains("file")) {
            s = load_scenario_file((fs::path(base) / entry.at("file").get<std::string>()).string());
            if (entry.contains("expect")) s.expect = entry.at("expect").get<std::string>();
        } else {
            s = parse_scenario(entry, base);
        }
        apply(s, o);
        scenarios.push_back(std::move(s));
    }
    std::sort(scenarios.begin(), scenarios.end(), [](const Scenario& a, const Scenario& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < scenarios.size(); ++i)
        if (scenarios[i].id == scenarios[i - 1].id) throw ScenarioError("duplicate scenario id " + scenarios[i].id);

    std::vector<std::optional<ScenarioResult>> results(scenarios.size());
    std::vector<std::string> errors(scenarios.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++) {
            try {
                results[i] = run_scenario(scenarios[i]);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(jobs, std::max<std::size_t>(1, scenarios.size()));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    int matched = 0, mismatched = 0, broken = 0;
    json rows = json::array();
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        json row = {{"id", scenarios[i].id}, {"expect", scenarios[i].expect}};
        if (!errors[i].empty()) {
            ++broken;
            row["error"] = errors[i];
        } else {
            const std::string got = verdict_name(results[i]->verdict);
            row["verdict"] = got;
            const bool ok = got == scenarios[i].expect;
            row["match"] = ok;
            (ok ? matched : mismatched)++;
            if (!out.empty()) save_result(*results[i], out);
        }
        rows.push_back(row);
    }
    json summary = {{"manifest", manifest.value("name", path.stem().string())},
                    {"scenarios", rows},
                    {"matched", matched},
                    {"mismatched", mismatched},
                    {"errors", broken}};
    if (!out.empty()) write_text(fs::path(out) / "summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    if (broken > 0) return 2;
    return mismatched == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Black hole search simulator"};
    app.require_subcommand(1);

    Overrides ov;
    std::string out = ".";
    int jobs = 1;
    std::string file;
    int horizon = 0;
    std::uint64_t seed = 0;
    auto common = [&](CLI::App* c) {
        c->add_option("--horizon", horizon, "override the scenario horizon");
        c->add_option("--seed", seed, "override the scenario seed");
        c->add_option("--out", out, "output directory");
        c->add_option("--jobs", jobs, "parallel scenarios (BBH_SIM_JOBS overrides)");
    };

    bool force_mc = false;
    auto* run_cmd = app.add_subcommand("run", "run one scenario and check it");
    run_cmd->add_option("scenario", file, "scenario file")->required();
    run_cmd->add_flag("--modelcheck", force_mc, "model check instead of a single run");
    common(run_cmd);

    auto* mc_cmd = app.add_subcommand("modelcheck", "search all activation schedules of a scenario");
    mc_cmd->add_option("scenario", file, "scenario file")->required();
    common(mc_cmd);

    auto* suite_cmd = app.add_subcommand("suite", "run a manifest and compare with its expectations");
    suite_cmd->add_option("manifest", file, "manifest file or shipped name")->required();
    common(suite_cmd);

    std::string gen_name, bbh_arg = "none";
    int n = 0, home = 0, delta = 0, max_degree = 3;
    std::uint64_t gen_seed = 1;
    std::vector<int> pruefer;
    auto* gen_cmd = app.add_subcommand("gen", "write a graph file");
    gen_cmd->add_option("generator", gen_name, "path | ring | tree | random | bh_lowerbound")->required();
    gen_cmd->add_option("--n", n, "nodes");
    gen_cmd->add_option("--home", home, "home node");
    gen_cmd->add_option("--bbh", bbh_arg, "bbh node or 'none'");
    gen_cmd->add_option("--delta", delta, "degree of the bbh (bh_lowerbound)");
    gen_cmd->add_option("--max-degree", max_degree, "degree bound (random)");
    gen_cmd->add_option("--seed", gen_seed, "seed (random)");
    gen_cmd->add_option("--pruefer", pruefer, "Pruefer sequence (tree)");
    gen_cmd->add_option("--out", out, "graph file, '-' for stdout");

    std::string graph_file, scenario_file, layout = "index";
    auto* render_cmd = app.add_subcommand("render", "ASCII time diagram of a trace");
    render_cmd->add_option("trace", file, "trace file")->required();
    render_cmd->add_option("--graph", graph_file, "graph file");
    render_cmd->add_option("--scenario", scenario_file, "scenario file (for its graph)");
    render_cmd->add_option("--layout", layout, "index | path | bfs");
    render_cmd->add_option("--out", out, "output file, '-' for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (horizon > 0) ov.horizon = horizon;
    if (seed > 0) ov.seed = seed;

    try {
        if (*run_cmd) return cmd_run(file, ov, out, force_mc);
        if (*mc_cmd) return cmd_modelcheck(file, ov, out);
        if (*suite_cmd) return cmd_suite(file, ov, suite_cmd->count("--out") ? out : "", jobs_setting(jobs));
        if (*gen_cmd) {
            json spec = {{"generator", gen_name}, {"n", n}, {"home", home}, {"max_degree", max_degree},
                         {"seed", gen_seed}, {"delta", delta}};
            if (bbh_arg == "none") spec["bbh"] = nullptr;
            else spec["bbh"] = std::stoi(bbh_arg);
            if (!pruefer.empty()) spec["pruefer"] = pruefer;
            if (gen_name == "tree" && pruefer.empty()) throw ScenarioError("tree needs --pruefer");
            const std::string text = dump_instance(build_instance(spec, 1, gen_seed));
            if (!gen_cmd->count("--out") || out == "-") std::cout << text;
            else write_text(out, text);
            return 0;
        }
        if (*render_cmd) {
            std::optional<Instance> inst;
            if (!graph_file.empty()) inst = load_instance_file(graph_file, 1);
            else if (!scenario_file.empty()) {
                Scenario s = load_scenario_file(scenario_file);
                inst = build_instance(s.graph, 1, s.seed, s.base_dir);
            }
            const std::string text = render_time_diagram(read_trace_file(file), inst ? &*inst : nullptr, layout);
            if (!render_cmd->count("--out") || out == "-") std::cout << text;
            else write_text(out, text);
            return 0;
        }
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
