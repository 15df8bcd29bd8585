// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Tolerances are fixed below; nothing is read from the environment except the
// worker count (BBH_SIM_JOBS).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "bbh/adversary.hpp"
#include "bbh/general.hpp"
#include "bbh/generators.hpp"
#include "bbh/pattern.hpp"
#include "bbh/scenario.hpp"
#include "bbh/trace.hpp"
#include "bbh/verify.hpp"

using namespace bbh;
namespace fs = std::filesystem;

namespace {

// Criterion 1
constexpr int kLawMinN = 4, kLawMaxN = 16;
constexpr int kTranslateRounds = 5;
// Criteria 2, 3
constexpr int kSweepMinN = 4, kSweepMaxN = 8;
// Criterion 4
constexpr int kTreeMaxN = 7;
// Criterion 5
constexpr int kDowngradeN = 9;
constexpr int kHomeDowngradeN = 4;
// Criteria 6, 7
constexpr int kGraphSeeds = 20;
constexpr int kGraphDelta = 3;
constexpr int kGraphHorizon = 2000;
constexpr int kCasualtyBound = 2 + 2 * (kGraphDelta - 1);
// Criterion 8
constexpr int kPathN = 5;
constexpr int kPathCasualtyBound = 2;
constexpr int kBhHorizon = 3000;
// Criterion 9
constexpr int kOracleMaxN = 5;
constexpr int kOracleHorizon = 20;
constexpr int kMonotoneTraces = 100;
constexpr int kMonotoneT = 20;

struct Outcome {
    bool pass = true;
    std::string note;
    void fail(const std::string& why) {
        if (pass) note = why;
        pass = false;
    }
};

int workers() {
    if (const char* env = std::getenv("BBH_SIM_JOBS")) return std::max(1, std::atoi(env));
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs f(i) for i in [0, n) on a few threads; results go wherever f puts them.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int t = std::min<std::size_t>(workers(), std::max<std::size_t>(n, 1));
    for (int i = 0; i < t; ++i)
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < n; k = next++) f(k);
        });
    for (auto& th : pool) th.join();
}

// Collects failures from worker threads; keeps the first message.
struct Failures {
    std::mutex mu;
    int count = 0;
    std::string first;
    void add(const std::string& why) {
        std::lock_guard<std::mutex> lock(mu);
        if (count++ == 0) first = why;
    }
    void into(Outcome& o, const std::string& what, int total) {
        if (count > 0) o.fail(std::to_string(count) + "/" + std::to_string(total) + " " + what + "; first: " + first);
        else o.note = std::to_string(total) + " " + what;
    }
};

const PatternMemory* rank0(const WorldState& w) {
    for (const auto& a : w.agents) {
        const auto* m = dynamic_cast<const PatternMemory*>(a.memory.get());
        if (a.alive && m && m->rank == 0) return m;
    }
    return nullptr;
}

// ---------------------------------------------------------------- 1

Outcome five_round_law() {
    Outcome out;
    int subphases = 0;
    PatternProtocol proto(pattern_config("path6"));
    BenignAdversary benign;
    for (int n = kLawMinN; n <= kLawMaxN && out.pass; ++n)
        for (NodeId h = 0; h < n && out.pass; ++h) {
            Instance inst = build_path(n, h, std::nullopt, 6);
            const int horizon = pattern_phase_end(inst, proto, pattern_covering_phase(inst, proto) + 1);
            WorldState w = initial_world(inst, proto, false);
            struct Act {
                int start;
                ActionKind kind;
                int phase;
                bool outward;  // front moves away from home
            };
            std::vector<Act> acts;
            std::vector<std::vector<std::pair<AgentId, NodeId>>> pos = {{}};
            std::vector<std::map<AgentId, std::pair<std::string, NodeId>>> views = {{}};
            for (const auto& a : w.agents) pos[0].emplace_back(a.id, a.position);
            while (w.round < horizon) {
                RoundRecord rec = step(w, inst, proto, benign);
                pos.push_back(rec.positions);
                std::map<AgentId, std::pair<std::string, NodeId>> v;
                for (const auto& x : rec.views) v[x.id] = {x.role, x.node};
                views.push_back(std::move(v));
                const PatternMemory* m = rank0(w);
                if (!m) break;
                const auto& nodes = m->walk.nodes();
                auto depth = [&](int x) { return x >= 0 && x < static_cast<int>(nodes.size()) ? nodes[x].depth : 0; };
                if (m->act.kind != ActionKind::None && (acts.empty() || acts.back().start != m->step_round))
                    acts.push_back({m->step_round, m->act.kind, m->walk.cursor().phase,
                                    depth(m->act.to) > depth(m->act.from)});
            }
            auto at = [&](int round, AgentId id) {
                for (auto [a, v] : pos[round])
                    if (a == id) return v;
                return -1;
            };
            const std::string where = "n=" + std::to_string(n) + " home=" + std::to_string(h);
            // each translation: 5 rounds, the leader moves exactly one edge further out
            for (std::size_t i = 0; i + 1 < acts.size() && out.pass; ++i) {
                if (acts[i].kind != ActionKind::Translate) continue;
                const int s = acts[i].start;
                if (acts[i + 1].start != s + kTranslateRounds) {
                    out.fail(where + ": translation at round " + std::to_string(s) + " took " +
                             std::to_string(acts[i + 1].start - s) + " rounds");
                    break;
                }
                AgentId leader = -1;
                NodeId from = -1;
                for (const auto& [id, rv] : views[s])
                    if (rv.first == "L") {
                        leader = id;
                        from = rv.second;
                    }
                const NodeId to = leader < 0 ? -1 : at(s + kTranslateRounds - 1, leader);
                if (leader < 0 || to < 0 || std::abs(to - from) != 1)
                    out.fail(where + ": translation at round " + std::to_string(s) + " moved the leader from " +
                             std::to_string(from) + " to " + std::to_string(to));
            }
            // sub-phases: one trip out (with the Make that starts it) or back
            // along a home branch; each within 5 * 2^i + 2 rounds
            for (std::size_t i = 0; i < acts.size() && out.pass;) {
                std::size_t j = i + 1;
                while (j < acts.size() && acts[j].kind == ActionKind::Translate && acts[j].phase == acts[i].phase &&
                       acts[j].outward == acts[i].outward)
                    ++j;
                if (j == acts.size()) break;  // unfinished at the horizon
                const int len = acts[j].start - acts[i].start;
                const int bound = 5 * (1 << acts[i].phase) + 2;
                ++subphases;
                if (len > bound)
                    out.fail(where + ": sub-phase from round " + std::to_string(acts[i].start) + " took " +
                             std::to_string(len) + " > " + std::to_string(bound));
                i = j;
            }
        }
    if (out.pass) out.note = std::to_string(subphases) + " sub-phases";
    return out;
}

// ---------------------------------------------------------------- 2, 3

Outcome path_sweep(const std::string& program, CoverageTarget target, bool knowledge) {
    Outcome out;
    struct Item {
        int n, h, b;
    };
    std::vector<Item> items;
    for (int n = kSweepMinN; n <= kSweepMaxN; ++n)
        for (int h = 0; h < n; ++h)
            for (int b = 0; b < n; ++b)
                if (b != h) items.push_back({n, h, b});
    PatternProtocol proto(pattern_config(program));
    const int k = static_cast<int>(proto.config().roles.size());
    Failures f;
    std::atomic<long> branches{0};
    parallel_for(items.size(), [&](std::size_t i) {
        const auto [n, h, b] = items[i];
        Instance inst = build_path(n, h, b, k);
        ModelCheckOptions o;
        o.horizon = pattern_horizon(inst, proto);
        o.knowledge = knowledge;
        o.coverage = CoverageSpec{target, pattern_warmup(inst, proto), pattern_window(inst, proto)};
        const auto r = model_check(inst, proto, o);
        branches += r.branches;
        if (r.verdict.verdict != Verdict::Pass)
            f.add("n=" + std::to_string(n) + " home=" + std::to_string(h) + " bbh=" + std::to_string(b) + " " +
                  verdict_name(r.verdict.verdict) + " " + r.verdict.detail);
    });
    f.into(out, "path instances", static_cast<int>(items.size()));
    if (out.pass) out.note += ", " + std::to_string(branches.load()) + " branches";
    return out;
}

// ---------------------------------------------------------------- 4

Outcome tree_sweep() {
    Outcome out;
    struct Item {
        int n;
        std::vector<std::pair<NodeId, NodeId>> edges;
        int h, b;
    };
    std::vector<Item> items;
    for (int n = 2; n <= kTreeMaxN; ++n)
        for (const auto& edges : nonisomorphic_trees(n))
            for (int h = 0; h < n; ++h)
                for (int b = 0; b < n; ++b)
                    if (b != h) items.push_back({n, edges, h, b});
    Failures f;
    const auto& family = trigger_family();
    for (const auto& [program, target] : {std::pair{std::string("tree6"), CoverageTarget::HomeComponent},
                                          std::pair{std::string("tree4"), CoverageTarget::AnyComponent}}) {
        PatternProtocol proto(pattern_config(program));
        const int k = static_cast<int>(proto.config().roles.size());
        parallel_for(items.size(), [&](std::size_t i) {
            const auto& it = items[i];
            Instance inst = build_tree(it.n, it.edges, it.h, it.b, k);
            CoverageSpec cs{target, pattern_warmup(inst, proto), pattern_window(inst, proto)};
            const int horizon = cs.warmup + 3 * cs.window;
            for (const auto& pred : family) {
                TriggerAdversary adv{Predicate(pred)};
                ExecutionTrace tr = run(inst, proto, adv, horizon);
                const auto c = check_coverage(tr, cs, horizon);
                if (c.verdict != Verdict::Pass)
                    f.add(program + " n=" + std::to_string(it.n) + " home=" + std::to_string(it.h) + " bbh=" +
                          std::to_string(it.b) + " [" + pred + "] " + c.detail);
            }
        });
    }
    f.into(out, "tree runs", static_cast<int>(2 * items.size() * family.size()));
    return out;
}

// ---------------------------------------------------------------- 5

// Searches every home and bbh of a path for a defeating schedule and replays it.
std::string find_defeat(const std::string& program, int n, CoverageTarget target, bool knowledge) {
    PatternProtocol proto(pattern_config(program));
    const int k = static_cast<int>(proto.config().roles.size());
    for (int h = 0; h < n; ++h)
        for (int b = 0; b < n; ++b) {
            if (b == h) continue;
            Instance inst = build_path(n, h, b, k);
            ModelCheckOptions o;
            o.horizon = pattern_horizon(inst, proto);
            o.knowledge = knowledge;
            o.coverage = CoverageSpec{target, pattern_warmup(inst, proto), pattern_window(inst, proto)};
            const auto r = model_check(inst, proto, o);
            if (r.verdict.verdict != Verdict::Fail || !r.verdict.schedule) continue;
            const std::set<int> sched(r.verdict.schedule->begin(), r.verdict.schedule->end());
            if (evaluate_schedule(inst, proto, sched, o).verdict != Verdict::Fail)
                return "!schedule does not replay to a failure";
            std::string s;
            for (int x : sched) s += (s.empty() ? "" : ",") + std::to_string(x);
            return "home=" + std::to_string(h) + " bbh=" + std::to_string(b) + " schedule {" + s + "}";
        }
    return "";
}

Outcome lower_bound_demo() {
    Outcome out;
    const std::string three = find_defeat("path3", kDowngradeN, CoverageTarget::AnyComponent, false);
    const std::string five = find_defeat("path5", kHomeDowngradeN, CoverageTarget::HomeComponent, true);
    if (three.empty() || three[0] == '!') out.fail("3 agents, n=9: " + (three.empty() ? "no defeating schedule" : three));
    if (five.empty() || five[0] == '!') out.fail("5 agents, n=4: " + (five.empty() ? "no defeating schedule" : five));
    if (out.pass) out.note = "3 agents n=9 " + three + "; 5 agents n=4 " + five;
    return out;
}

// ---------------------------------------------------------------- 6, 7

struct GraphRun {
    std::string where;
    int destroyed = 0;
    bool struck = false;
    std::vector<CheckResult> checks;  // a, b, c, lg
};

std::vector<GraphRun> graph_suite() {
    struct Item {
        int seed, trig;
    };
    std::vector<Item> items;
    for (int seed = 1; seed <= kGraphSeeds; ++seed)
        for (int t = 0; t < static_cast<int>(trigger_family().size()); ++t) items.push_back({seed, t});
    std::vector<GraphRun> runs(items.size());
    GraphHomeProtocol proto;
    parallel_for(items.size(), [&](std::size_t i) {
        const int seed = items[i].seed;
        const int n = 6 + seed % 5;
        Instance inst = build_random_bounded(n, kGraphDelta, seed, graph_home_agents(kGraphDelta));
        inst.bbh = 1 + seed % (n - 1);
        TriggerAdversary adv{Predicate(trigger_family()[items[i].trig])};
        ExecutionTrace tr = run(inst, proto, adv, kGraphHorizon);
        GraphRun& g = runs[i];
        g.where = "seed=" + std::to_string(seed) + " n=" + std::to_string(n) + " bbh=" + std::to_string(*inst.bbh) +
                  " [" + trigger_family()[items[i].trig] + "]";
        g.destroyed = casualty_report(tr).destroyed;
        g.struck = g.destroyed > 0;
        g.checks.push_back(check_anchor_soundness(tr));
        g.checks.push_back(check_anchor_progress(tr));
        g.checks.push_back(check_free_survivor(tr));
        g.checks.push_back(check_coverage(tr, settled_coverage(tr, kGraphHorizon), kGraphHorizon));
        g.checks.push_back(check_lg_safety(tr));
    });
    return runs;
}

Outcome graph_criterion(const std::vector<GraphRun>& runs) {
    Outcome out;
    int struck = 0, worst = 0;
    std::set<int> graphs;
    for (const auto& g : runs) {
        worst = std::max(worst, g.destroyed);
        if (g.struck) ++struck;
        // (a)
        for (int c : {0, 1})
            if (g.checks[c].verdict != Verdict::Pass) out.fail(g.where + " " + g.checks[c].detail);
        // (b)
        if (g.destroyed > kCasualtyBound)
            out.fail(g.where + " " + std::to_string(g.destroyed) + " destroyed > " + std::to_string(kCasualtyBound));
        // (c)
        for (int c : {2, 3})
            if (g.checks[c].verdict != Verdict::Pass) out.fail(g.where + " " + g.checks[c].detail);
    }
    if (out.pass)
        out.note = std::to_string(runs.size()) + " runs on " + std::to_string(kGraphSeeds) + " graphs, " +
                   std::to_string(struck) + " with casualties, max destroyed " + std::to_string(worst);
    return out;
}

Outcome lg_criterion(const std::vector<GraphRun>& runs) {
    Outcome out;
    for (const auto& g : runs)
        if (g.checks[4].verdict != Verdict::Pass) out.fail(g.where + " " + g.checks[4].detail);
    if (out.pass) out.note = std::to_string(runs.size()) + " runs";
    return out;
}

// ---------------------------------------------------------------- 8

Outcome classical_bh() {
    Outcome out;
    CautiousBhProtocol proto;
    std::string notes;
    for (int delta : {4, 5}) {
        Instance inst = build_bh_lowerbound_graph(delta, delta + 2);
        AlwaysActiveAdversary adv;
        ExecutionTrace tr = run(inst, proto, adv, kBhHorizon);
        const int d = casualty_report(tr).destroyed;
        if (d != delta) out.fail("delta=" + std::to_string(delta) + ": " + std::to_string(d) + " destroyed");
        const auto map = check_survivor_map(tr);
        if (map.verdict != Verdict::Pass) out.fail("delta=" + std::to_string(delta) + ": " + map.detail);
        // the centre's ports, blocked in the survivor's map
        int blocked = -1;
        for (const auto& a : tr.final_state.agents) {
            const auto* m = dynamic_cast<const GroupMemory*>(a.memory.get());
            if (!a.alive || !m || m->kind == GroupKind::Marker || !m->walk.map_complete()) continue;
            blocked = 0;
            for (const auto& e : m->walk.map())
                for (int x : e.nbr) blocked += x == -2;
        }
        if (blocked != delta)
            out.fail("delta=" + std::to_string(delta) + ": " + std::to_string(blocked) + " blocked ports in the map");
        notes += (notes.empty() ? "" : ", ") + std::string("delta=") + std::to_string(delta) + " lost " +
                 std::to_string(d);
    }
    for (int h = 0; h < kPathN; ++h)
        for (int b = -1; b < kPathN; ++b) {
            if (b == h) continue;
            std::optional<NodeId> bbh;
            if (b >= 0) bbh = b;
            Instance inst = build_path(kPathN, h, bbh, 4);
            AlwaysActiveAdversary adv;
            ExecutionTrace tr = run(inst, proto, adv, kBhHorizon);
            const int d = casualty_report(tr).destroyed;
            const std::string where = "path home=" + std::to_string(h) + " bbh=" + std::to_string(b);
            if (d > (b < 0 ? 0 : kPathCasualtyBound)) out.fail(where + ": " + std::to_string(d) + " destroyed");
            const auto map = check_survivor_map(tr);
            if (map.verdict != Verdict::Pass) out.fail(where + ": " + map.detail);
        }
    if (out.pass) out.note = notes + "; paths n=5 within bounds";
    return out;
}

// ---------------------------------------------------------------- 9

Outcome suspicious_sets() {
    Outcome out;
    const std::vector<std::string> programs = {"path6", "path4", "path3"};
    // S(1) = V \ {home}
    int instances = 0;
    for (const auto& prog : programs) {
        PatternProtocol proto(pattern_config(prog));
        const int k = static_cast<int>(proto.config().roles.size());
        for (int n = 2; n <= kOracleMaxN + 3; ++n)
            for (int h = 0; h < n; ++h)
                for (int b = -1; b < n; ++b) {
                    if (b == h) continue;
                    std::optional<NodeId> bbh;
                    if (b >= 0) bbh = b;
                    Instance inst = build_path(n, h, bbh, k);
                    ++instances;
                    for (AgentId a = 0; a < k; ++a) {
                        const auto p = suspicious_profile(inst, proto, {}, a, 1);
                        std::set<NodeId> want;
                        for (NodeId v = 0; v < n; ++v)
                            if (v != h) want.insert(v);
                        if (p.sets.empty() || p.sets[0] != want)
                            out.fail(prog + " n=" + std::to_string(n) + " home=" + std::to_string(h) + ": S(1) wrong");
                    }
                }
    }
    // monotone along random traces
    std::mt19937_64 rng(20240917);
    int traces = 0;
    for (; traces < kMonotoneTraces && out.pass; ++traces) {
        const auto& prog = programs[rng() % programs.size()];
        PatternProtocol proto(pattern_config(prog));
        const int k = static_cast<int>(proto.config().roles.size());
        const int n = 4 + static_cast<int>(rng() % 4);
        const NodeId h = static_cast<NodeId>(rng() % n);
        NodeId b = static_cast<NodeId>(rng() % n);
        if (b == h) b = (b + 1) % n;
        std::set<int> act;
        for (int t = 1; t <= kMonotoneT; ++t)
            if (rng() % 4 == 0) act.insert(t);
        const AgentId agent = static_cast<AgentId>(rng() % k);
        const auto p = suspicious_profile(build_path(n, h, b, k), proto, act, agent, kMonotoneT);
        const int last = std::min<int>(static_cast<int>(p.sets.size()), p.alive_through.empty() ? 0 : p.alive_through[0]);
        for (int t = 1; t < last; ++t)
            if (!std::includes(p.sets[t - 1].begin(), p.sets[t - 1].end(), p.sets[t].begin(), p.sets[t].end()))
                out.fail(prog + " n=" + std::to_string(n) + " trace " + std::to_string(traces) + ": S grew at t=" +
                         std::to_string(t + 1));
    }
    // pruned and unpruned searches agree
    int compared = 0;
    for (const auto& prog : programs) {
        PatternProtocol proto(pattern_config(prog));
        const int k = static_cast<int>(proto.config().roles.size());
        for (int n = 2; n <= kOracleMaxN; ++n)
            for (int h = 0; h < n; ++h)
                for (int b = -1; b < n; ++b) {
                    if (b == h) continue;
                    std::optional<NodeId> bbh;
                    if (b >= 0) bbh = b;
                    Instance inst = build_path(n, h, bbh, k);
                    for (int horizon : {10, kOracleHorizon}) {
                        ModelCheckOptions o;
                        o.horizon = horizon;
                        o.knowledge = true;
                        o.coverage = CoverageSpec{CoverageTarget::AnyComponent, 0, horizon};
                        o.pruned = true;
                        const auto a = model_check(inst, proto, o);
                        o.pruned = false;
                        const auto c = model_check(inst, proto, o);
                        ++compared;
                        if (a.verdict.verdict != c.verdict.verdict)
                            out.fail(prog + " n=" + std::to_string(n) + " home=" + std::to_string(h) + " bbh=" +
                                     std::to_string(b) + ": pruned " + verdict_name(a.verdict.verdict) +
                                     " vs unpruned " + verdict_name(c.verdict.verdict));
                    }
                }
    }
    if (out.pass)
        out.note = std::to_string(instances) + " instances for S(1), " + std::to_string(traces) +
                   " random traces, " + std::to_string(compared) + " pruned/unpruned pairs";
    return out;
}

// ---------------------------------------------------------------- 10

std::map<std::string, std::string> read_dir(const fs::path& dir) {
    std::map<std::string, std::string> files;
    if (!fs::exists(dir)) return files;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::ifstream in(e.path(), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        files[e.path().filename().string()] = ss.str();
    }
    return files;
}

Outcome determinism() {
    Outcome out;
    const fs::path root = fs::temp_directory_path() / ("bbh_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    int traces = 0;
    for (const std::string manifest : {"appendix-D", "theorems"}) {
        std::vector<std::map<std::string, std::string>> outputs;
        for (const auto& [tag, jobs] : std::vector<std::pair<std::string, int>>{{"a", 1}, {"b", 1}, {"c", 4}}) {
            const fs::path dir = root / (manifest + "_" + tag);
            // BBH_SIM_JOBS would override --jobs, so it is cleared for the child
            const std::string cmd = "env -u BBH_SIM_JOBS \"" + std::string(BBH_SIM_PATH) + "\" suite " + manifest +
                                    " --jobs " + std::to_string(jobs) + " --out \"" + dir.string() + "\" > /dev/null";
            const int rc = std::system(cmd.c_str());
            if (rc != 0) out.fail(manifest + " --jobs " + std::to_string(jobs) + " exited " + std::to_string(rc));
            outputs.push_back(read_dir(dir));
        }
        if (outputs[0].empty()) out.fail(manifest + ": no output");
        for (std::size_t i = 1; i < outputs.size(); ++i)
            if (outputs[i] != outputs[0]) {
                std::string diff = "file sets differ";
                for (const auto& [name, text] : outputs[0]) {
                    auto it = outputs[i].find(name);
                    if (it == outputs[i].end() || it->second != text) {
                        diff = name;
                        break;
                    }
                }
                out.fail(manifest + ": run " + std::to_string(i) + " differs at " + diff);
            }
        for (const auto& [name, text] : outputs[0]) traces += name.find(".trace.jsonl") != std::string::npos;
    }
    fs::remove_all(root);
    if (out.pass) out.note = std::to_string(traces) + " traces byte-identical over 3 runs (jobs 1, 1, 4)";
    return out;
}

}  // namespace

// With arguments, runs only the listed criteria.
int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    auto wanted = [&](int id) { return only.empty() || only.count(id) > 0; };
    int failed = 0;
    auto report = [&](int id, const std::string& name, const std::function<Outcome()>& f) {
        if (!wanted(id)) return;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = f();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        std::printf("%s %d %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), secs, o.note.c_str());
        std::fflush(stdout);
    };
    report(1, "five-round law", five_round_law);
    report(2, "path exhaustive sweep, 6 agents", [] {
        return path_sweep("path6", CoverageTarget::HomeComponent, true);
    });
    report(3, "path exhaustive sweep, 4 agents", [] {
        return path_sweep("path4", CoverageTarget::AnyComponent, false);
    });
    report(4, "tree sweep", tree_sweep);
    report(5, "lower-bound demonstration", lower_bound_demo);
    std::vector<GraphRun> runs;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (wanted(6) || wanted(7)) runs = graph_suite();
    } catch (const std::exception& e) {
        std::printf("graph suite: exception %s\n", e.what());
    }
    const double suite_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(6, "general-graph suite", [&] {
        Outcome o = runs.empty() ? Outcome{false, "suite did not run"} : graph_criterion(runs);
        if (o.pass) o.note += ", suite " + std::to_string(static_cast<int>(suite_secs)) + "s";
        return o;
    });
    report(7, "LG-safety", [&] { return runs.empty() ? Outcome{false, "suite did not run"} : lg_criterion(runs); });
    report(8, "classical black hole", classical_bh);
    report(9, "suspicious-set oracle", suspicious_sets);
    report(10, "determinism", determinism);
    return failed == 0 ? 0 : 1;
}
