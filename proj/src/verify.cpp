#include "bbh/verify.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

#include "bbh/adversary.hpp"

namespace bbh {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

const char* target_name(CoverageTarget t) {
    switch (t) {
        case CoverageTarget::HomeComponent: return "HOME_COMPONENT";
        case CoverageTarget::AnyComponent: return "ANY_COMPONENT";
        case CoverageTarget::WholeGraph: return "WHOLE_GRAPH";
    }
    return "?";
}

CoverageTarget parse_target(const std::string& s) {
    if (s == "HOME_COMPONENT") return CoverageTarget::HomeComponent;
    if (s == "ANY_COMPONENT") return CoverageTarget::AnyComponent;
    if (s == "WHOLE_GRAPH") return CoverageTarget::WholeGraph;
    throw std::invalid_argument("unknown coverage target: " + s);
}

// ---------------------------------------------------------------- coverage

CoverageMonitor::CoverageMonitor(const Instance& inst, const CoverageSpec& spec, int horizon)
    : spec_(spec), horizon_(horizon) {
    if (spec_.window < 1) throw std::invalid_argument("coverage window must be >= 1");
    const int n = inst.graph.node_count();
    if (!inst.bbh || spec_.target == CoverageTarget::WholeGraph) {
        whole_ = true;
        std::vector<NodeId> all(n);
        for (int v = 0; v < n; ++v) all[v] = v;
        components_.push_back(all);
    } else {
        components_ = decompose(inst).components;
    }
    last_.assign(n, spec_.warmup - 1);
    failed_.assign(n, 0);
}

void CoverageMonitor::visit(int round, NodeId v) {
    if (round < spec_.warmup || round > horizon_) return;
    if (round - last_[v] > spec_.window) failed_[v] = 1;
    last_[v] = std::max(last_[v], round);
}

void CoverageMonitor::visit_positions(int round, const WorldState& w) {
    for (const auto& a : w.agents)
        if (a.alive) visit(round, a.position);
}

CheckResult CoverageMonitor::finish() const {
    CheckResult res;
    res.property = std::string("coverage:") + (whole_ ? "WHOLE_GRAPH" : target_name(spec_.target));
    if (horizon_ + 1 < spec_.warmup + spec_.window) {
        res.verdict = Verdict::Inconclusive;
        res.detail = "horizon " + std::to_string(horizon_) + " shorter than one window after warmup";
        return res;
    }
    auto node_ok = [&](NodeId v) { return !failed_[v] && horizon_ + 1 - last_[v] <= spec_.window; };
    auto comp_ok = [&](const std::vector<NodeId>& c, NodeId* bad) {
        for (NodeId v : c)
            if (!node_ok(v)) {
                if (bad) *bad = v;
                return false;
            }
        return true;
    };
    NodeId bad = -1;
    bool ok;
    if (whole_ || spec_.target == CoverageTarget::HomeComponent) {
        ok = comp_ok(components_.at(0), &bad);
    } else {
        ok = false;
        for (const auto& c : components_) ok = ok || comp_ok(c, nullptr);
        if (!ok) comp_ok(components_.at(0), &bad);
    }
    res.verdict = ok ? Verdict::Pass : Verdict::Fail;
    if (!ok) {
        res.detail = ok ? "" : "node " + std::to_string(bad) + " not revisited within window " + std::to_string(spec_.window);
        if (!whole_ && spec_.target == CoverageTarget::AnyComponent) res.detail = "no component covered; e.g. " + res.detail;
    }
    return res;
}

void CoverageMonitor::summarize(Encoder& e, int round) const {
    for (std::size_t v = 0; v < last_.size(); ++v) {
        e.put_bool(failed_[v]);
        e.put(round < spec_.warmup - 1 ? 0 : std::min(round - last_[v], spec_.window + 1));
    }
}

CheckResult check_coverage(const Instance& inst, const std::vector<std::vector<int>>& ledger,
                           const CoverageSpec& spec, int horizon) {
    CoverageMonitor mon(inst, spec, horizon);
    std::vector<std::pair<int, NodeId>> visits;
    for (std::size_t v = 0; v < ledger.size(); ++v)
        for (int r : ledger[v]) visits.emplace_back(r, static_cast<NodeId>(v));
    std::sort(visits.begin(), visits.end());
    for (auto [r, v] : visits) mon.visit(r, v);
    return mon.finish();
}

CheckResult check_coverage(const ExecutionTrace& trace, const CoverageSpec& spec, int horizon) {
    return check_coverage(trace.instance, trace.ledger(), spec, horizon);
}

// ---------------------------------------------------------------- knowledge

namespace {

bool names_bbh(const Instance& inst, const AgentView& v) {
    if (!v.belief || !inst.bbh) return false;
    auto t = belief_target(inst.graph, v.node, *v.belief);
    return t && *t == *inst.bbh;
}

}  // namespace

bool KnowledgeMonitor::observe(const Instance& inst, const WorldState& after, const RoundRecord& rec) {
    if (failed_) return false;
    if (td_ < 0 && !rec.destroyed.empty()) td_ = rec.round;
    if (td_ < 0 || ok_) return true;
    // What an agent learned by the end of round td + within shows in its
    // decision of the following round.
    if (rec.round <= td_ + within_ + 1)
        for (const auto& v : rec.views)
            if (names_bbh(inst, v)) ok_ = true;
    if (!ok_ && (rec.round >= td_ + within_ + 1 || after.alive_count() == 0)) failed_ = true;
    return !failed_;
}

void KnowledgeMonitor::summarize(Encoder& e, int round) const {
    e.put(td_ < 0 ? -1 : std::min(round - td_, within_ + 1));
    e.put_bool(ok_);
    e.put_bool(failed_);
}

CheckResult check_survivor_knowledge(const ExecutionTrace& trace, int within) {
    CheckResult res;
    res.property = "survivor_knowledge";
    KnowledgeMonitor mon(within);
    WorldState dummy;
    for (const auto& rec : trace.rounds) {
        dummy.agents.assign(rec.positions.size(), AgentRecord{});
        dummy.destroyed_count = 0;
        if (!mon.observe(trace.instance, dummy, rec)) {
            res.verdict = Verdict::Fail;
            res.detail = "no surviving agent names the bbh within " + std::to_string(within) +
                         " rounds of the first destruction (round " + std::to_string(mon.deadline() - within - 1) + ")";
            return res;
        }
    }
    if (mon.pending()) {
        res.verdict = Verdict::Inconclusive;
        res.detail = "trace ends before round " + std::to_string(mon.deadline());
    }
    return res;
}

std::optional<std::string> wrong_belief(const Instance& inst, const WorldState&, const RoundRecord& rec) {
    for (const auto& v : rec.views) {
        if (!v.belief) continue;
        if (!names_bbh(inst, v))
            return "agent " + std::to_string(v.id) + " holds a wrong belief in round " + std::to_string(rec.round);
    }
    return std::nullopt;
}

CheckResult check_beliefs(const ExecutionTrace& trace) {
    CheckResult res;
    res.property = "beliefs";
    WorldState dummy;
    for (const auto& rec : trace.rounds)
        if (auto w = wrong_belief(trace.instance, dummy, rec)) {
            res.verdict = Verdict::Fail;
            res.detail = *w;
            return res;
        }
    return res;
}

// ---------------------------------------------------------------- casualties

CasualtyReport casualty_report(const ExecutionTrace& trace) {
    CasualtyReport rep;
    std::vector<std::pair<int, int>> deaths;  // round, count
    for (const auto& rec : trace.rounds) {
        rep.destroyed += static_cast<int>(rec.destroyed.size());
        if (!rec.destroyed.empty()) deaths.emplace_back(rec.round, static_cast<int>(rec.destroyed.size()));
        for (const auto& a : rec.anchors) rep.anchors.push_back(a);
    }
    int prev = 0;
    for (const auto& a : rep.anchors) {
        int c = 0;
        for (auto [r, k] : deaths)
            if (r > prev && r <= a.round) c += k;
        rep.per_anchor.push_back(c);
        prev = a.round;
    }
    for (const auto& a : trace.final_state.agents)
        if (a.alive && !a.memory->anchor_port()) ++rep.free_survivors;
    return rep;
}

nlohmann::json to_json(const CasualtyReport& r) {
    nlohmann::json anchors = nlohmann::json::array();
    for (const auto& a : r.anchors)
        anchors.push_back({{"round", a.round}, {"node", a.node}, {"port", a.port}, {"agent", a.agent}});
    return {{"destroyed", r.destroyed},
            {"per_anchor", r.per_anchor},
            {"anchors", anchors},
            {"free_survivors", r.free_survivors}};
}

// ---------------------------------------------------------------- search helpers

namespace {

// Returns a fixed choice and records whether it could have mattered.
class ChoiceAdversary final : public Adversary {
public:
    bool choice = false;
    bool relevant = false;
    bool decide(const AdversaryView& v) override {
        relevant = v.occupied + v.entering > 0;
        return choice;
    }
    std::unique_ptr<Adversary> clone() const override { return std::make_unique<ChoiceAdversary>(*this); }
    nlohmann::json to_json() const override { return {{"name", "choice"}}; }
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void encode_world(Encoder& e, const WorldState& w) {
    e.put(w.round);
    e.put(w.destroyed_count);
    e.put(w.destruction_time.value_or(-1));
    for (const auto& a : w.agents) {
        e.put_bool(a.alive);
        if (!a.alive) continue;
        e.put(a.position);
        e.put(a.arrival_port);
        e.put(static_cast<std::int64_t>(std::hash<std::string>{}(a.memory->bytes())));
        e.put(static_cast<std::int64_t>(fnv1a(a.memory->bytes())));
    }
}

std::string digest_key(const std::string& s) {
    std::uint64_t a = std::hash<std::string>{}(s), b = fnv1a(s);
    std::string out(16, '\0');
    for (int i = 0; i < 8; ++i) {
        out[i] = static_cast<char>((a >> (8 * i)) & 0xff);
        out[8 + i] = static_cast<char>((b >> (8 * i)) & 0xff);
    }
    return out;
}

}  // namespace

std::string input_digest(const WorldState& w, const Instance& inst, int i) {
    const auto& me = w.agents.at(i);
    Encoder e;
    e.put(inst.graph.degree(me.position));
    e.put(me.arrival_port);
    for (const auto& a : w.agents)
        if (a.alive && a.position == me.position) {
            e.put(a.id);
            e.put_str(a.memory->bytes());
        }
    return e.take();
}

// ---------------------------------------------------------------- suspicious sets

SuspiciousProfile suspicious_profile(const Instance& actual, const Protocol& protocol,
                                     const std::set<int>& activations, AgentId agent, int T, long budget) {
    if (T < 1) throw std::invalid_argument("suspicious_profile needs T >= 1");
    if (actual.graph.node_count() > 12 || T > 60) throw std::invalid_argument("suspicious_profile bounds exceeded");
    StepOptions opt;
    opt.record_views = false;

    WorldState w = initial_world(actual, protocol, false);
    int idx = -1;
    for (std::size_t i = 0; i < w.agents.size(); ++i)
        if (w.agents[i].id == agent) idx = static_cast<int>(i);
    if (idx < 0) throw std::invalid_argument("no such agent");

    std::vector<std::string> hist;  // hist[t-1]: input at round t
    ScriptedAdversary script(activations);
    int alive_until = 0;
    for (int t = 1; t <= T; ++t) {
        if (!w.agents[idx].alive || w.alive_count() == 0) break;
        hist.push_back(input_digest(w, actual, idx));
        alive_until = t;
        step(w, actual, protocol, script, opt);
    }

    SuspiciousProfile prof;
    prof.sets.assign(alive_until, {});
    prof.none_possible.assign(alive_until, false);
    prof.alive_through.assign(1, alive_until);

    long work = 0;
    std::vector<NodeId> cands;
    for (NodeId v = 0; v < actual.graph.node_count(); ++v)
        if (v != actual.home) cands.push_back(v);
    cands.push_back(-1);

    for (NodeId c : cands) {
        Instance inst = actual;
        if (c >= 0) inst.bbh = c;
        else inst.bbh.reset();
        int best = 0;
        std::unordered_set<std::string> seen;
        std::vector<WorldState> stack{initial_world(inst, protocol, false)};
        while (!stack.empty() && best < alive_until) {
            WorldState s = std::move(stack.back());
            stack.pop_back();
            while (true) {
                const int t = s.round + 1;
                if (t > alive_until || !s.agents[idx].alive) break;
                if (input_digest(s, inst, idx) != hist[t - 1]) break;
                best = std::max(best, t);
                if (t == alive_until) break;
                Encoder e;
                encode_world(e, s);
                if (!seen.insert(digest_key(e.take())).second) break;
                if (++work > budget) throw std::runtime_error("suspicious_profile budget exhausted");
                ChoiceAdversary adv;
                WorldState copy = s;
                step(s, inst, protocol, adv, opt);
                if (adv.relevant && inst.bbh) {
                    adv.choice = true;
                    step(copy, inst, protocol, adv, opt);
                    stack.push_back(std::move(copy));
                }
            }
        }
        for (int t = 1; t <= best; ++t) {
            if (c >= 0) prof.sets[t - 1].insert(c);
            else prof.none_possible[t - 1] = true;
        }
    }
    return prof;
}

// ---------------------------------------------------------------- model checker

namespace {

struct Branch {
    WorldState w;
    std::optional<CoverageMonitor> cov;
    KnowledgeMonitor kn;
    std::vector<int> schedule;
};

struct Search {
    const Instance& inst;
    const Protocol& protocol;
    const ModelCheckOptions& opt;
    StepOptions step_opt;
    std::unordered_set<std::string> seen;
    ModelCheckResult res;
    bool out_of_budget = false;

    std::string key(const Branch& b) const {
        Encoder e;
        encode_world(e, b.w);
        if (b.cov) b.cov->summarize(e, b.w.round);
        b.kn.summarize(e, b.w.round);
        return digest_key(e.take());
    }

    bool done(const Branch& b) const {
        if (b.w.alive_count() == 0) return true;
        if (b.w.round < opt.horizon) return false;
        return !(opt.knowledge && b.kn.pending() && b.w.round < b.kn.deadline());
    }

    // Executes one round; returns a failure description if a property broke.
    std::optional<std::string> advance(Branch& b, bool activate, bool* relevant) {
        ChoiceAdversary adv;
        adv.choice = activate;
        RoundRecord rec = step(b.w, inst, protocol, adv, step_opt);
        ++res.rounds;
        if (relevant) *relevant = adv.relevant && inst.bbh.has_value();
        if (activate) b.schedule.push_back(rec.round);
        if (b.cov) b.cov->visit_positions(rec.round, b.w);
        if (opt.beliefs)
            if (auto w = wrong_belief(inst, b.w, rec)) return *w;
        if (opt.knowledge && !b.kn.observe(inst, b.w, rec))
            return "no surviving agent names the bbh within 5 rounds of round " + std::to_string(b.kn.deadline() - 6);
        if (opt.survival && b.w.alive_count() == 0) return "all agents destroyed by round " + std::to_string(rec.round);
        return std::nullopt;
    }

    std::optional<std::string> at_end(const Branch& b) {
        if (b.cov) {
            CheckResult c = b.cov->finish();
            if (c.verdict == Verdict::Fail) return c.property + ": " + c.detail;
        }
        return std::nullopt;
    }

    void fail(const Branch& b, const std::string& why) {
        res.verdict.verdict = Verdict::Fail;
        res.verdict.detail = why;
        res.verdict.schedule = b.schedule;
    }

    // Returns true on FAIL (search stops).
    bool explore(const Branch& start) {
        if (!seen.insert(key(start)).second) {
            ++res.dedup_hits;
            return false;
        }
        ++res.branches;
        res.max_depth = std::max(res.max_depth, static_cast<int>(start.schedule.size()));
        std::vector<Branch> points;
        Branch cur = start;
        bool revisited = false;
        while (!done(cur)) {
            if (res.rounds > opt.budget) {
                out_of_budget = true;
                return false;
            }
            if (cur.w.round != start.w.round && !seen.insert(key(cur)).second) {
                ++res.dedup_hits;
                revisited = true;
                break;
            }
            const bool branchable = cur.w.round < opt.horizon && inst.bbh.has_value();
            Branch before;
            if (branchable) before = cur;
            bool relevant = false;
            if (auto why = advance(cur, false, &relevant)) {
                fail(cur, *why);
                return true;
            }
            if (branchable && (relevant || !opt.pruned)) points.push_back(std::move(before));
        }
        if (!revisited)
            if (auto why = at_end(cur)) {
                fail(cur, *why);
                return true;
            }
        for (auto& p : points) {
            if (auto why = advance(p, true, nullptr)) {
                fail(p, *why);
                return true;
            }
            if (done(p)) {
                if (auto why = at_end(p)) {
                    fail(p, *why);
                    return true;
                }
                continue;
            }
            if (explore(p)) return true;
            if (out_of_budget) return false;
        }
        return false;
    }
};

Branch initial_branch(const Instance& inst, const Protocol& protocol, const ModelCheckOptions& opt) {
    Branch b;
    b.w = initial_world(inst, protocol, false);
    if (opt.coverage) {
        b.cov.emplace(inst, *opt.coverage, opt.horizon);
        b.cov->visit_positions(0, b.w);
    }
    return b;
}

}  // namespace

ModelCheckResult model_check(const Instance& inst, const Protocol& protocol, const ModelCheckOptions& opt) {
    if (opt.horizon < 1) throw std::invalid_argument("model_check needs horizon >= 1");
    Search s{inst, protocol, opt, {}, {}, {}, false};
    s.res.verdict.property = "model_check";
    Branch b = initial_branch(inst, protocol, opt);
    if (opt.coverage && opt.horizon + 1 < opt.coverage->warmup + opt.coverage->window) {
        s.res.verdict.verdict = Verdict::Inconclusive;
        s.res.verdict.detail = "horizon shorter than one window after warmup";
        return s.res;
    }
    s.explore(b);
    if (s.res.verdict.verdict != Verdict::Fail && s.out_of_budget) {
        s.res.verdict.verdict = Verdict::Inconclusive;
        s.res.verdict.detail = "budget of " + std::to_string(opt.budget) + " rounds exhausted";
    }
    return s.res;
}

CheckResult evaluate_schedule(const Instance& inst, const Protocol& protocol, const std::set<int>& schedule,
                              const ModelCheckOptions& opt, ExecutionTrace* trace_out) {
    Search s{inst, protocol, opt, {}, {}, {}, false};
    s.res.verdict.property = "model_check";
    Branch b = initial_branch(inst, protocol, opt);
    ExecutionTrace tr{inst, protocol.name(), {}, {}};
    std::optional<std::string> why;
    while (!s.done(b)) {
        const bool act = schedule.count(b.w.round + 1) > 0;
        ChoiceAdversary adv;
        adv.choice = act;
        RoundRecord rec = step(b.w, inst, protocol, adv, s.step_opt);
        if (act) b.schedule.push_back(rec.round);
        if (b.cov) b.cov->visit_positions(rec.round, b.w);
        if (!why && opt.beliefs) why = wrong_belief(inst, b.w, rec);
        if (!why && opt.knowledge && !b.kn.observe(inst, b.w, rec))
            why = "no surviving agent names the bbh within 5 rounds of round " + std::to_string(b.kn.deadline() - 6);
        if (!why && opt.survival && b.w.alive_count() == 0) why = "all agents destroyed by round " + std::to_string(rec.round);
        if (trace_out) tr.rounds.push_back(std::move(rec));
        if (why && !trace_out) break;
    }
    if (!why) why = s.at_end(b);
    if (trace_out) {
        tr.final_state = b.w;
        *trace_out = std::move(tr);
    }
    CheckResult res;
    res.property = "model_check";
    if (why) {
        res.verdict = Verdict::Fail;
        res.detail = *why;
        res.schedule = b.schedule;
    }
    return res;
}

nlohmann::json verdict_json(const CheckResult& r, const std::string& counterexample_file) {
    nlohmann::ordered_json j;
    j["property"] = r.property;
    j["verdict"] = verdict_name(r.verdict);
    if (!r.detail.empty()) j["detail"] = r.detail;
    if (r.schedule) j["schedule"] = *r.schedule;
    if (!counterexample_file.empty()) j["counterexample_file"] = counterexample_file;
    return nlohmann::json::parse(j.dump());
}

nlohmann::json verdict_json(const ModelCheckResult& r, const std::string& counterexample_file) {
    nlohmann::ordered_json j;
    j["property"] = r.verdict.property;
    j["verdict"] = verdict_name(r.verdict.verdict);
    if (!r.verdict.detail.empty()) j["detail"] = r.verdict.detail;
    if (r.verdict.schedule) j["schedule"] = *r.verdict.schedule;
    if (!counterexample_file.empty()) j["counterexample_file"] = counterexample_file;
    j["stats"] = {{"branches", r.branches}, {"dedup_hits", r.dedup_hits}, {"max_depth", r.max_depth},
                  {"rounds", r.rounds}};
    return nlohmann::json::parse(j.dump());
}

}  // namespace bbh
