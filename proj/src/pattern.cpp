#include "bbh/pattern.hpp"

#include <algorithm>

namespace bbh {

namespace {

// Rounds a knower keeps following the pattern (while safe) so that teammates
// it meets learn the bbh before it leaves.
constexpr int kGrace = 6;
// Rounds of planned moves kept for absence reasoning.
constexpr int kLogRounds = 48;

bool in_sg(Role r) { return r == Role::F || r == Role::I2 || r == Role::I1 || r == Role::L; }

Role flipped(Role r, bool single) {
    switch (r) {
        case Role::F: return Role::L;
        case Role::L: return Role::F;
        case Role::I1: return single ? r : Role::I2;
        case Role::I2: return single ? r : Role::I1;
        default: return r;
    }
}

const PatternMemory* as_pattern(const Memory* m) { return dynamic_cast<const PatternMemory*>(m); }

}  // namespace

const char* role_name(Role r) {
    switch (r) {
        case Role::F: return "F";
        case Role::I2: return "I2";
        case Role::I1: return "I1";
        case Role::L: return "L";
        case Role::F1: return "F1";
        case Role::F2: return "F2";
        case Role::Idle: return "idle";
    }
    return "?";
}

void PatternMemory::encode(Encoder& e) const {
    e.put(id);
    e.put_bool(started);
    e.put_seq(members);
    e.put(rank);
    walk.encode(e);
    e.put(static_cast<int>(act.kind));
    e.put(act.from);
    e.put(act.to);
    e.put(act.back);
    e.put(act.port);
    e.put_bool(act.final_into_home);
    e.put(step_round);
    e.put(pos_key);
    e.put(prev_key);
    e.put_seq(seen);
    e.put_seq(dead);
    e.put_bool(has_candidates);
    e.put_seq(candidates);
    e.put(log_first);
    e.put(static_cast<std::int64_t>(log.size()));
    for (const auto& row : log)
        for (const auto& p : row) {
            e.put(p.from);
            e.put(p.to);
        }
    e.put_bool(knows);
    e.put_bool(free);
    e.put(know_round);
    e.put(bbh_key);
    e.put_seq(path);
    e.put(departure);
    e.put(static_cast<int>(side));
    e.put(home_port);
    e.put(rendezvous);
    e.put_bool(acting);
    e.put_bool(cautious);
    e.put(cautious_start);
    e.put(probe_port);
    e.put(probe_key);
    e.put(anchor);
    e.put_bool(settled);
    e.put_str(role_label);
}

nlohmann::json PatternMemory::to_json() const {
    nlohmann::json j{{"id", id},         {"rank", rank},       {"role", role_label}, {"pos_key", pos_key},
                     {"knows", knows},   {"free", free},       {"bbh_key", bbh_key}, {"path", path},
                     {"cautious", cautious}, {"walk", walk.to_json()}};
    if (has_candidates) j["candidates"] = candidates;
    return j;
}

std::string PatternMemory::group() const {
    if (anchor > 0) return "ANCHOR";
    if (settled) return "FREE";
    if (knows) return "KNOWER";
    if (role_label == "F1" || role_label == "F2") return "HELPER";
    if (role_label == "idle") return "IDLE";
    return "SG";
}

PatternProtocol::PatternProtocol(PatternConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.walk == WalkKind::Ring && cfg_.ring_size < 3)
        throw std::invalid_argument("ring program needs the ring size");
}

int PatternProtocol::step_length(ActionKind k) const {
    switch (k) {
        case ActionKind::Make: return 2;
        case ActionKind::Translate: return 5;
        case ActionKind::Turn: return cfg_.single_intermediate ? 1 : 0;
        case ActionKind::Gather: return 1;
        case ActionKind::None: return 1;
    }
    return 1;
}

MemoryPtr PatternProtocol::initial_memory(AgentId id, int) const {
    auto m = std::make_shared<PatternMemory>();
    m->id = id;
    m->walk = Walk(cfg_.walk, cfg_.ring_size);
    return m;
}

namespace {

struct Ctx {
    const PatternConfig& cfg;
    const PatternProtocol& proto;
    PatternMemory& m;
    const RoundInput& in;

    int r() const { return in.round; }

    Role base_role(int rank) const {
        return rank >= 0 && rank < static_cast<int>(cfg.roles.size()) ? cfg.roles[rank] : Role::Idle;
    }
    Role role_now(const Walk& w, int rank) const {
        Role b = base_role(rank);
        if (in_sg(b) && (w.cursor().flips & 1)) return flipped(b, cfg.single_intermediate);
        return b;
    }
    int rank_of(AgentId id) const {
        auto it = std::lower_bound(m.members.begin(), m.members.end(), id);
        if (it == m.members.end() || *it != id) return -1;
        return static_cast<int>(it - m.members.begin());
    }
    int rank_with(Role base) const {
        for (int j = 0; j < static_cast<int>(m.members.size()); ++j)
            if (base_role(j) == base) return j;
        return -1;
    }
    bool colocated(int rank) const {
        if (rank < 0) return false;
        for (const auto& c : in.colocated)
            if (c.id == m.members[rank]) return true;
        return false;
    }
    const std::vector<PlanEntry>* log_at(int round) const {
        int i = round - m.log_first;
        if (i < 0 || i >= static_cast<int>(m.log.size())) return nullptr;
        return &m.log[i];
    }
};

PlanEntry plan_for(Role role, const WalkAction& a, int s, bool single) {
    (void)single;
    switch (a.kind) {
        case ActionKind::Make: {
            const int k0 = a.from, k1 = a.to;
            if (role == Role::F) return {k0, k0};
            if (s == 1) return {k0, k1};
            if (role == Role::I2) return {k1, k0};
            return {k1, k1};
        }
        case ActionKind::Translate: {
            const int k0 = a.back, k1 = a.from, k2 = a.to;
            switch (s) {
                case 1:
                    if (role == Role::L) return {k1, k2};
                    return role == Role::I1 ? PlanEntry{k1, k1} : PlanEntry{k0, k0};
                case 2:
                    if (role == Role::L) return {k2, k1};
                    if (role == Role::I2) return {k0, k1};
                    return role == Role::I1 ? PlanEntry{k1, k1} : PlanEntry{k0, k0};
                case 3:
                    if (role == Role::L) return {k1, k2};
                    if (role == Role::I2) return {k1, k0};
                    return role == Role::I1 ? PlanEntry{k1, k1} : PlanEntry{k0, k0};
                case 4:
                    if (role == Role::L) return {k2, k2};
                    if (role == Role::I1) return {k1, k1};
                    return {k0, k1};
                default:
                    if (role == Role::L) return {k2, k2};
                    if (role == Role::I1) return {k1, k2};
                    return {k1, a.final_into_home ? k2 : k1};
            }
        }
        case ActionKind::Turn:
            // single-intermediate turn: I2 walks from the new front to the new back
            if (role == Role::I2) return {a.to, a.from};
            if (role == Role::F) return {a.from, a.from};
            return {a.to, a.to};
        case ActionKind::Gather:
            if (role == Role::F || role == Role::I2) return {a.back, 0};
            return {0, 0};
        case ActionKind::None: break;
    }
    return {-1, -1};
}

Side side_of(const Walk& w, int key, int bbh) {
    if (key == bbh) return Side::On;
    if (w.kind() != WalkKind::Ring && w.is_ancestor(bbh, key)) return Side::Far;
    return Side::Home;
}

Port sweep_port(const RoundInput& in, const PatternMemory& m, int ring_size) {
    const int deg = in.degree;
    Port blocked = m.path.size() == 1 ? m.path[0] : 0;
    // on a ring the long way round ends next to the bbh as well
    if (ring_size > 0 && deg == 2 && static_cast<int>(m.path.size()) == ring_size - 1) blocked = m.path[0] == 1 ? 2 : 1;
    if (deg - (blocked ? 1 : 0) <= 0) return 0;
    Port p = in.arrival_port % deg + 1;
    if (p == blocked) p = p % deg + 1;
    return p;
}

// Round at which F1, walking cautiously from the deadline, first enters the bbh key.
int rendezvous_round(const Walk& w, int bbh) {
    const WalkCursor& ps = w.phase_start();
    if (ps.phase < 1) return -1;
    const int deadline = ps.start_round + Walk::phase_bound(w.kind(), ps, w.nodes()[0].degree);
    const auto seq = front_sequence(w, 1 << 14);
    auto it = std::find(seq.begin(), seq.end(), bbh);
    if (it == seq.end()) return -1;
    return deadline + 3 * static_cast<int>(it - seq.begin());
}

}  // namespace

Decision PatternProtocol::decide(AgentId self, const RoundInput& in, const Memory& own) const {
    const auto* prev = as_pattern(&own);
    if (!prev) throw ProtocolFault("pattern program given a foreign memory");
    auto mp = std::make_shared<PatternMemory>(*prev);
    PatternMemory& m = *mp;
    Ctx cx{cfg_, *this, m, in};
    const int r = in.round;

    if (!m.started) {
        m.started = true;
        for (const auto& c : in.colocated) m.members.push_back(c.id);
        m.rank = cx.rank_of(self);
        m.seen.assign(m.members.size(), 0);
        m.dead.assign(m.members.size(), 0);
        m.log_first = r;
    }
    const Role base = cx.base_role(m.rank);
    if (base == Role::Idle) {
        m.role_label = "idle";
        return {0, mp};
    }

    // own observation, or port tracking once free
    if (!m.free) {
        int mark = -1;
        if (cfg_.marker) {
            mark = 0;
            for (const auto& c : in.colocated)
                if (c.id == m.members.back()) mark = 1;
        }
        m.walk.observe(m.pos_key, in.degree, in.arrival_port, m.departure > 0 ? m.prev_key : -1, mark);
    } else if (m.departure > 0) {
        if (!m.path.empty() && m.path[0] == m.departure) m.path.erase(m.path.begin());
        else m.path.insert(m.path.begin(), in.arrival_port);
    }

    // what co-located agents know
    const PatternMemory* knower = nullptr;
    const PatternMemory* newest = nullptr;
    for (const auto& c : in.colocated) {
        const int j = cx.rank_of(c.id);
        if (j >= 0) m.seen[j] = r;
        if (c.id == self) continue;
        const auto* q = as_pattern(c.memory);
        if (!q || !q->started) continue;
        for (std::size_t i = 0; i < m.seen.size() && i < q->seen.size(); ++i) {
            m.seen[i] = std::max(m.seen[i], q->seen[i]);
            m.dead[i] = m.dead[i] || q->dead[i];
        }
        if (q->has_candidates) {
            if (!m.has_candidates) {
                m.candidates = q->candidates;
                m.has_candidates = true;
            } else {
                std::set<int> both;
                std::set_intersection(m.candidates.begin(), m.candidates.end(), q->candidates.begin(),
                                      q->candidates.end(), std::inserter(both, both.begin()));
                m.candidates = std::move(both);
            }
        }
        if (q->knows && q->bbh_key >= 0 && (!knower || q->id < knower->id)) knower = q;
        const Role qb = cx.base_role(q->rank);
        const bool source = !q->free && (in_sg(qb) || (!in_sg(base) && (qb == Role::F1 || qb == Role::F2)));
        if (source && !m.free && (!newest || q->walk.version() > newest->walk.version())) newest = q;
    }
    if (newest && !m.free && newest->walk.version() > m.walk.version()) {
        m.walk = newest->walk;
        if (in_sg(base)) {
            m.act = newest->act;
            m.step_round = newest->step_round;
        }
    }

    auto learn = [&](int bbh) {
        auto p = m.walk.path(m.pos_key, bbh);
        if (!p) return false;
        m.knows = true;
        m.know_round = r;
        m.bbh_key = bbh;
        m.path = *p;
        m.home_port = bbh < static_cast<int>(m.walk.nodes().size()) ? m.walk.nodes()[bbh].parent_port : 0;
        return true;
    };
    auto release = [&] {
        m.free = true;
        if (auto p = m.walk.path(m.pos_key, m.bbh_key)) m.path = *p;
        m.side = side_of(m.walk, m.pos_key, m.bbh_key);
        m.rendezvous = -1;
        if (m.side == Side::Far && cx.rank_with(Role::F1) >= 0) m.rendezvous = rendezvous_round(m.walk, m.bbh_key);
    };

    if (!m.knows && knower) {
        if (!learn(knower->bbh_key) && knower->departure == 0 && knower->free) {
            m.knows = true;
            m.know_round = r;
            m.bbh_key = knower->bbh_key;
            m.path = knower->path;
            m.home_port = knower->home_port;
        }
        if (m.knows && m.home_port == 0) m.home_port = knower->home_port;
    }

    // absence reasoning for pattern members
    if (!m.knows && in_sg(base) && r >= 2) {
        if (const auto* last = cx.log_at(r - 1)) {
            std::vector<int> missing;
            for (int j = 0; j < static_cast<int>(m.members.size()); ++j) {
                if (j == m.rank || m.dead[j] || !in_sg(cx.base_role(j))) continue;
                const int expected = (*last)[j].to;
                if (expected >= 0 && expected == m.pos_key && m.seen[j] != r) missing.push_back(j);
            }
            for (int b : missing) {
                m.dead[b] = 1;
                std::set<int> cand;
                bool ok = m.seen[b] >= m.log_first;
                for (int t = m.seen[b]; ok && t <= r - 1; ++t) {
                    const auto* row = cx.log_at(t);
                    if (!row || (*row)[b].from < 0 || (*row)[b].to < 0) {
                        ok = false;
                        break;
                    }
                    for (int x : {(*row)[b].from, (*row)[b].to}) {
                        if (x == 0) continue;
                        bool cleared = false;
                        for (int c = 0; c < static_cast<int>(m.members.size()) && !cleared; ++c) {
                            if (c == b || !in_sg(cx.base_role(c))) continue;
                            if (c != m.rank && m.seen[c] < t + 1) continue;
                            if ((*row)[c].from == x || (*row)[c].to == x) cleared = true;
                        }
                        if (!cleared) cand.insert(x);
                    }
                }
                if (!ok) continue;
                if (!m.has_candidates) {
                    m.candidates = cand;
                    m.has_candidates = true;
                } else {
                    std::set<int> both;
                    std::set_intersection(m.candidates.begin(), m.candidates.end(), cand.begin(), cand.end(),
                                          std::inserter(both, both.begin()));
                    m.candidates = std::move(both);
                }
            }
            if (m.has_candidates && m.candidates.size() == 1) learn(*m.candidates.begin());
        }
    }

    auto finish = [&](Port p) {
        m.departure = p;
        return Decision{p, mp};
    };

    // F1 out on a probe still returns first, so that F2 does not read its absence as a death
    const bool probing = m.cautious && base == Role::F1 && (r - m.cautious_start) % 3 == 1 && m.departure > 0;
    if (m.knows && !m.free && !in_sg(base)) {
        if (probing) {
            std::swap(m.prev_key, m.pos_key);
            return finish(in.arrival_port);
        }
        release();
    }

    if (in_sg(base) && !m.free) {
        // follow the pattern
        auto len = [&](const WalkAction& a) { return step_length(a.kind); };
        if (m.act.kind == ActionKind::None || r >= m.step_round + len(m.act)) {
            WalkAction a = m.walk.next(r);
            for (int guard = 0; a.kind == ActionKind::Turn && step_length(ActionKind::Turn) == 0 && guard < 8; ++guard)
                a = m.walk.next(r);
            m.act = a;
            m.step_round = r;
        }
        const int s = r - m.step_round + 1;
        std::vector<PlanEntry> row(m.members.size());
        for (int j = 0; j < static_cast<int>(m.members.size()); ++j)
            if (in_sg(cx.base_role(j))) row[j] = plan_for(cx.role_now(m.walk, j), m.act, s, cfg_.single_intermediate);
        if (m.log.empty()) m.log_first = r;
        m.log.push_back(row);
        while (static_cast<int>(m.log.size()) > kLogRounds) {
            m.log.erase(m.log.begin());
            ++m.log_first;
        }
        const Role now = cx.role_now(m.walk, m.rank);
        m.role_label = role_name(now);
        PlanEntry mine = row[m.rank];
        if (m.knows) {
            // nobody left to tell: on the map walk another key may name the bbh too
            bool all_told = m.walk.kind() == WalkKind::Map;
            for (int j = 0; all_told && j < static_cast<int>(m.members.size()); ++j) {
                if (j == m.rank || m.dead[j] || m.seen[j] < r - kGrace || !in_sg(cx.base_role(j))) continue;
                bool told = false;
                for (const auto& c : in.colocated) {
                    const auto* q = as_pattern(c.memory);
                    if (c.id == m.members[j] && q && q->knows) told = true;
                }
                all_told = told;
            }
            const bool unsafe = mine.from == m.bbh_key || mine.to == m.bbh_key || mine.from < 0 || all_told;
            if (unsafe || r >= m.know_round + kGrace) release();
        }
        if (!m.free) {
            if (m.knows) {
                if (auto path = m.walk.path(m.pos_key, m.bbh_key)) m.path = *path;
            }
            Port p = 0;
            if (mine.from >= 0 && mine.to >= 0 && mine.to != m.pos_key) {
                p = m.walk.port_between(m.pos_key, mine.to);
                if (p == 0 && m.act.kind == ActionKind::Translate && s == 2 && now == Role::L) p = in.arrival_port;
            }
            if (p > 0) {
                m.prev_key = m.pos_key;
                m.pos_key = mine.to;
            }
            return finish(p);
        }
    }

    if (!m.free) {
        // F1 / F2: wait at home, then walk cautiously once the deadline passes
        m.role_label = role_name(base);
        const int f1 = cx.rank_with(Role::F1);
        if (!m.cautious) {
            const WalkCursor& ps = m.walk.phase_start();
            bool sg_here = false;
            for (const auto& c : in.colocated) {
                const auto* q = as_pattern(c.memory);
                if (q && q->started && !q->free && in_sg(cx.base_role(q->rank))) sg_here = true;
            }
            if (ps.phase >= 1 && !sg_here && r >= ps.start_round + Walk::phase_bound(m.walk.kind(), ps, m.walk.nodes()[0].degree)) {
                m.cautious = true;
                m.cautious_start = r;
                m.walk.restart_phase();
            } else {
                return finish(0);
            }
        }
        const int sub = (r - m.cautious_start) % 3;
        if (sub == 0) {
            WalkAction a = m.walk.next(r);
            for (int guard = 0; a.kind == ActionKind::Gather && guard < 8; ++guard) a = m.walk.next(r);
            if (a.kind == ActionKind::None) {
                m.probe_port = 0;
                return finish(0);
            }
            m.probe_port = a.port;
            m.probe_key = a.to;
            if (base == Role::F1) {
                m.prev_key = m.pos_key;
                m.pos_key = a.to;
                return finish(a.port);
            }
            return finish(0);
        }
        if (sub == 1) {
            if (base == Role::F1 && m.departure > 0) {
                std::swap(m.prev_key, m.pos_key);
                return finish(in.arrival_port);
            }
            return finish(0);
        }
        if (base == Role::F2 && m.probe_port > 0 && !cx.colocated(f1)) {
            m.knows = true;
            m.know_round = r;
            m.bbh_key = m.probe_key;
            m.path = {m.probe_port};
            m.free = true;
            m.side = Side::Home;
            m.home_port = m.walk.nodes()[m.probe_key].parent_port;
        } else {
            if (m.probe_port > 0) {
                m.prev_key = m.pos_key;
                m.pos_key = m.probe_key;
            }
            return finish(m.probe_port);
        }
    }

    if (cfg_.anchor_knowers) {
        // walk to the last node before the bbh and block the port into it
        if (m.anchor > 0) {
            m.role_label = "A";
            return finish(0);
        }
        if (m.settled) {
            m.role_label = "free";
            return finish(0);
        }
        m.role_label = "K";
        if (m.path.size() > 1) return finish(m.path[0]);
        if (m.path.size() == 1) {
            bool taken = false;
            for (const auto& c : in.colocated)
                if (c.id != self && c.memory->anchor_port()) taken = true;
            if (taken) m.settled = true;
            else m.anchor = m.path[0];
            return finish(0);
        }
        Port p = in.arrival_port > 0 ? in.arrival_port : m.home_port;
        return finish(p > 0 && p <= in.degree ? p : (in.degree > 0 ? 1 : 0));
    }

    // free knower
    m.role_label = "K";
    if (m.path.empty()) {
        Port p = m.home_port;
        if (p <= 0 || p > in.degree) p = in.arrival_port;
        if (p <= 0 || p > in.degree) p = in.degree > 0 ? 1 : 0;
        m.side = Side::Home;
        return finish(p);
    }
    if (m.side == Side::Far && m.rendezvous >= 0) {
        for (const auto& c : in.colocated) {
            const auto* q = as_pattern(c.memory);
            if (q && q->id < m.id && q->free && q->side == Side::Far && q->rendezvous >= 0) m.acting = false;
        }
        if (m.acting && r < m.rendezvous) {
            if (m.path.size() > 1) return finish(m.path[0]);
            return finish(0);
        }
        if (m.acting && r == m.rendezvous && m.path.size() == 1) {
            m.rendezvous = -1;
            m.side = Side::On;
            return finish(m.path[0]);
        }
        m.rendezvous = -1;
    }
    return finish(sweep_port(in, m, cfg_.walk == WalkKind::Ring ? cfg_.ring_size : 0));
}

PatternConfig pattern_config(const std::string& name, int ring_size) {
    using R = Role;
    PatternConfig c;
    c.name = name;
    if (name == "path6") {
        c.walk = WalkKind::Path;
        c.roles = {R::F, R::I2, R::I1, R::L, R::F1, R::F2};
    } else if (name == "path5") {
        c.walk = WalkKind::Path;
        c.roles = {R::F, R::I2, R::I1, R::L, R::F1};
    } else if (name == "path4") {
        c.walk = WalkKind::Path;
        c.roles = {R::F, R::I2, R::I1, R::L};
    } else if (name == "path3") {
        c.walk = WalkKind::Path;
        c.roles = {R::F, R::I2, R::L};
        c.single_intermediate = true;
    } else if (name == "tree6") {
        c.walk = WalkKind::Tree;
        c.roles = {R::F, R::I2, R::I1, R::L, R::F1, R::F2};
    } else if (name == "tree4") {
        c.walk = WalkKind::Tree;
        c.roles = {R::F, R::I2, R::I1, R::L};
    } else if (name == "graph_sg") {
        c.walk = WalkKind::Map;
        c.roles = {R::F, R::I2, R::I1, R::L};
        c.marker = true;
        c.anchor_knowers = true;
    } else if (name == "ring4") {
        c.walk = WalkKind::Ring;
        c.ring_size = ring_size;
        c.roles = {R::F, R::I2, R::I1, R::L};
    } else {
        throw std::invalid_argument("unknown pattern program: " + name);
    }
    return c;
}

}  // namespace bbh

namespace bbh {

int pattern_phase_end(const Instance& inst, const PatternProtocol& protocol, int phase, int limit) {
    Instance benign = inst;
    benign.bbh.reset();
    WorldState w = initial_world(benign, protocol, false);
    struct Idle final : Adversary {
        bool decide(const AdversaryView&) override { return false; }
        std::unique_ptr<Adversary> clone() const override { return std::make_unique<Idle>(); }
        nlohmann::json to_json() const override { return {{"name", "benign"}}; }
    } idle;
    StepOptions opt;
    opt.record_views = false;
    while (w.round < limit) {
        step(w, benign, protocol, idle, opt);
        for (const auto& a : w.agents) {
            const auto* m = dynamic_cast<const PatternMemory*>(a.memory.get());
            if (m && m->walk.cursor().phase > phase) return m->walk.cursor().start_round - 1;
        }
    }
    return -1;
}

int pattern_covering_phase(const Instance& inst, const PatternProtocol& protocol) {
    const int n = inst.graph.node_count();
    if (protocol.config().walk == WalkKind::Ring) return 1;
    const int span = protocol.config().walk == WalkKind::Tree ? 2 * (n - 1) : n;
    int j = 1;
    while ((1 << j) < span) ++j;
    return j;
}

int pattern_window(const Instance& inst, const PatternProtocol& protocol) {
    const int n = inst.graph.node_count();
    if (protocol.config().walk == WalkKind::Ring) return 5 * n + n;
    return 5 * (2 << pattern_covering_phase(inst, protocol)) + n;
}

int pattern_warmup(const Instance& inst, const PatternProtocol& protocol, int limit) {
    Instance benign = inst;
    benign.bbh.reset();
    WorldState w = initial_world(benign, protocol, false);
    struct Idle final : Adversary {
        bool decide(const AdversaryView&) override { return false; }
        std::unique_ptr<Adversary> clone() const override { return std::make_unique<Idle>(); }
        nlohmann::json to_json() const override { return {{"name", "benign"}}; }
    } idle;
    StepOptions opt;
    opt.record_views = false;
    std::vector<char> seen(benign.graph.node_count(), 0);
    seen[benign.home] = 1;
    int missing = benign.graph.node_count() - 1;
    while (missing > 0 && w.round < limit) {
        step(w, benign, protocol, idle, opt);
        for (const auto& a : w.agents)
            if (a.alive && !seen[a.position]) {
                seen[a.position] = 1;
                --missing;
            }
    }
    return missing > 0 ? -1 : w.round;
}

int pattern_horizon(const Instance& inst, const PatternProtocol& protocol) {
    if (protocol.config().walk == WalkKind::Path)
        return pattern_phase_end(inst, protocol, pattern_covering_phase(inst, protocol) + 2);
    return pattern_warmup(inst, protocol) + 3 * pattern_window(inst, protocol);
}

}  // namespace bbh
