#include "bbh/walk.hpp"

#include <algorithm>
#include <deque>

namespace bbh {

Walk::Walk(WalkKind kind, int ring_size) : kind_(kind), ring_size_(ring_size) {
    if (kind_ == WalkKind::Ring) {
        if (ring_size < 3) throw std::invalid_argument("ring walk needs the ring size (>= 3)");
        auto& nodes = mut();
        nodes.resize(ring_size);
        for (int k = 0; k < ring_size; ++k) {
            nodes[k].parent = (k + ring_size - 1) % ring_size;
            nodes[k].depth = k;
        }
        // home's forward port is 1 by convention, so its backward port is 2
        nodes[0].parent_port = 2;
    } else {
        mut().resize(1);
    }
}

std::vector<WalkNode>& Walk::mut() {
    if (nodes_.use_count() > 1) nodes_ = std::make_shared<const std::vector<WalkNode>>(*nodes_);
    return const_cast<std::vector<WalkNode>&>(*nodes_);
}

bool Walk::operator==(const Walk& o) const {
    return kind_ == o.kind_ && ring_size_ == o.ring_size_ && *nodes_ == *o.nodes_ && map_ == o.map_ &&
           blocked_ == o.blocked_ && complete_ == o.complete_ && cur_ == o.cur_ &&
           phase_start_ == o.phase_start_ && version_ == o.version_;
}

void Walk::observe(int key, int degree, Port arrival, int from, int mark) {
    const auto& cn = *nodes_;
    const int n = static_cast<int>(cn.size());
    if (key < 0 || key >= n) return;
    const auto& nd = cn[key];
    const bool set_degree = nd.degree < 0;
    const bool set_mark = mark >= 0 && nd.mark < 0;
    bool set_parent = false, set_child = false;
    if (from >= 0 && from < n && arrival > 0) {
        if (from == nd.parent && nd.parent_port == 0) set_parent = true;
        else if (cn[from].parent == key && !nd.children.count(arrival)) set_child = true;
    }
    if (!set_degree && !set_mark && !set_parent && !set_child) return;
    auto& m = mut()[key];
    if (set_degree) m.degree = degree;
    if (set_mark) m.mark = mark;
    if (set_parent) m.parent_port = arrival;
    if (set_child) m.children[arrival] = from;
    ++version_;
}

int Walk::child_key(int parent, Port p) {
    {
        const auto& ch = (*nodes_)[parent].children;
        auto it = ch.find(p);
        if (it != ch.end()) return it->second;
    }
    auto& nodes = mut();
    int key;
    if (kind_ == WalkKind::Ring) {
        key = (parent + 1) % ring_size_;
        nodes[key].port_from_parent = p;
    } else {
        key = static_cast<int>(nodes.size());
        WalkNode nd;
        nd.parent = parent;
        nd.port_from_parent = p;
        nd.depth = nodes[parent].depth + 1;
        nodes.push_back(nd);
    }
    nodes[parent].children[p] = key;
    return key;
}

void Walk::begin_phase(int round) {
    if (cur_.phase > 0) {
        cur_.prev_duration = round - cur_.start_round;
        cur_.prev_truncated = cur_.truncated;
        cur_.branches.emplace_back(round - cur_.branch_start, cur_.branch_truncated);
        cur_.prev_branches = std::move(cur_.branches);
        cur_.branches.clear();
    }
    if (kind_ != WalkKind::Map || cur_.phase == 0 || cur_.truncated) ++cur_.phase;
    cur_.prev_tour = cur_.tour;
    cur_.tour = complete_;
    cur_.start_round = round;
    cur_.front = 0;
    cur_.back = -1;
    cur_.index = 0;
    cur_.returning = false;
    cur_.truncated = false;
    cur_.last_root_port = 0;
    phase_start_ = cur_;
}

Port Walk::next_child_port(int f) const {
    const auto& nd = (*nodes_)[f];
    if (kind_ == WalkKind::Ring) return nd.parent_port == 1 ? 2 : 1;
    Port start = 0;
    if (f == 0) {
        start = cur_.last_root_port;
    } else if (cur_.back >= 0 && cur_.back != nd.parent) {
        start = port_between(f, cur_.back);
    } else if (kind_ == WalkKind::Path && nd.depth >= (1 << cur_.phase)) {
        return 0;
    }
    for (Port p = start + 1; p <= nd.degree; ++p)
        if (f == 0 || p != nd.parent_port) return p;
    return 0;
}

bool Walk::can_advance() const {
    if (cur_.back < 0) return known(0);
    if (cur_.front == 0) return true;
    return known(cur_.front);
}

WalkAction Walk::next(int round) {
    if (kind_ == WalkKind::Map) return next_map(round);
    auto count = [&] {
        ++cur_.index;
        if (kind_ == WalkKind::Tree && cur_.index >= (1 << cur_.phase)) {
            cur_.returning = true;
            cur_.truncated = true;
            cur_.branch_truncated = true;
        }
    };
    if (cur_.back < 0) {
        if (!known(0)) return {};
        Port p = 0;
        if (cur_.phase > 0 && !(cur_.returning && kind_ == WalkKind::Tree)) p = next_child_port(0);
        if (p == 0) {
            begin_phase(round);
            p = kind_ == WalkKind::Ring ? 1 : next_child_port(0);
            if (p == 0) return {};
        } else {
            cur_.branches.emplace_back(round - cur_.branch_start, cur_.branch_truncated);
        }
        cur_.branch_start = round;
        cur_.branch_truncated = false;
        int child = child_key(0, p);
        cur_.last_root_port = p;
        cur_.back = 0;
        cur_.front = child;
        count();
        ++version_;
        return {ActionKind::Make, 0, child, 0, p, false};
    }
    const int f = cur_.front;
    if (f == 0 && kind_ != WalkKind::Ring) {
        WalkAction a{ActionKind::Gather, 0, 0, cur_.back, port_between(cur_.back, 0), false};
        cur_.back = -1;
        ++version_;
        return a;
    }
    if (!known(f)) return {};
    int target = -1;
    Port port = 0;
    if (!cur_.returning) {
        Port c = next_child_port(f);
        if (c) {
            target = child_key(f, c);
            port = c;
        } else if (kind_ == WalkKind::Path && f != 0 && (*nodes_)[f].depth >= (1 << cur_.phase) &&
                   (*nodes_)[f].degree > 1) {
            cur_.truncated = true;
            cur_.branch_truncated = true;
        }
    }
    if (target < 0) {
        target = (*nodes_)[f].parent;
        port = (*nodes_)[f].parent_port;
    }
    if (target == cur_.back) {
        WalkAction a{ActionKind::Turn, f, cur_.back, f, port, false};
        std::swap(cur_.front, cur_.back);
        ++cur_.flips;
        if (!cur_.returning) count();
        ++version_;
        return a;
    }
    if (port == 0) return {};
    if (!cur_.returning) count();
    const bool final_step = (target == 0 && kind_ != WalkKind::Ring);
    WalkAction a{ActionKind::Translate, f, target, cur_.back, port, final_step};
    if (final_step) {
        cur_.front = 0;
        cur_.back = -1;
    } else {
        cur_.back = f;
        cur_.front = target;
    }
    ++version_;
    return a;
}

Port Walk::port_between(int x, int y) const {
    if (x < 0 || y < 0 || x >= static_cast<int>(nodes_->size()) || y >= static_cast<int>(nodes_->size())) return 0;
    for (const auto& [p, c] : (*nodes_)[x].children)
        if (c == y) return p;
    if ((*nodes_)[x].parent == y) return (*nodes_)[x].parent_port;
    return 0;
}

std::optional<std::vector<Port>> Walk::path(int x, int y) const {
    const int n = static_cast<int>(nodes_->size());
    if (x < 0 || y < 0 || x >= n || y >= n) return std::nullopt;
    std::vector<int> prev(n, -2);
    std::vector<Port> via(n, 0);
    std::deque<int> q{x};
    prev[x] = -1;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        if (v == y) break;
        auto push = [&](int u, Port p) {
            if (u < 0 || p == 0 || prev[u] != -2) return;
            prev[u] = v;
            via[u] = p;
            q.push_back(u);
        };
        for (const auto& [p, c] : (*nodes_)[v].children) push(c, p);
        if (v != 0 || kind_ == WalkKind::Ring) push((*nodes_)[v].parent, (*nodes_)[v].parent_port);
    }
    if (prev[y] == -2) return std::nullopt;
    std::vector<Port> out;
    for (int v = y; v != x; v = prev[v]) out.insert(out.begin(), via[v]);
    return out;
}

int Walk::parent_of(int key) const {
    if (key <= 0 && kind_ != WalkKind::Ring) return -1;
    if (key < 0 || key >= static_cast<int>(nodes_->size())) return -1;
    return (*nodes_)[key].parent;
}

bool Walk::is_ancestor(int a, int x) const {
    if (kind_ == WalkKind::Ring) return false;
    for (int v = parent_of(x); v >= 0; v = parent_of(v))
        if (v == a) return true;
    return false;
}

int Walk::phase_bound(WalkKind kind, const WalkCursor& c, int home_degree) {
    if (c.phase <= 0) return 0;
    if (kind == WalkKind::Map) {
        // a tour of a finished map repeats exactly
        if (c.tour && c.prev_tour && !c.prev_truncated && c.prev_duration > 0) return c.prev_duration;
    } else if (!c.prev_truncated && c.prev_duration > 0) {
        return c.prev_duration;
    }
    const int d = 1 << c.phase;
    const int full = 10 * d - 8;  // one branch out to depth 2^i and back
    switch (kind) {
        case WalkKind::Path: {
            int total = 0;
            for (auto [rounds, truncated] : c.prev_branches) total += truncated ? full : rounds;
            const int missing = std::max(1, home_degree) - static_cast<int>(c.prev_branches.size());
            return total + std::max(0, missing) * full;
        }
        case WalkKind::Tree: return 10 * d - 4;
        case WalkKind::Map: return 10 * d - 4;
        case WalkKind::Ring: return 0;
    }
    return 0;
}

void Walk::encode(Encoder& e) const {
    e.put(static_cast<int>(kind_));
    e.put(ring_size_);
    e.put(static_cast<std::int64_t>(nodes_->size()));
    for (const auto& nd : *nodes_) {
        e.put(nd.degree);
        e.put(nd.mark);
        e.put(nd.parent);
        e.put(nd.parent_port);
        e.put(nd.port_from_parent);
        e.put(nd.depth);
        e.put(static_cast<std::int64_t>(nd.children.size()));
        for (auto [p, c] : nd.children) {
            e.put(p);
            e.put(c);
        }
    }
    for (const WalkCursor* c : {&cur_, &phase_start_}) {
        e.put(c->phase);
        e.put(c->start_round);
        e.put(c->front);
        e.put(c->back);
        e.put(c->index);
        e.put_bool(c->returning);
        e.put_bool(c->truncated);
        e.put(c->last_root_port);
        e.put(c->flips);
        e.put(c->prev_duration);
        e.put_bool(c->prev_truncated);
        e.put(c->branch_start);
        e.put_bool(c->branch_truncated);
        e.put_bool(c->tour);
        e.put_bool(c->prev_tour);
        for (const auto* list : {&c->branches, &c->prev_branches}) {
            e.put(static_cast<std::int64_t>(list->size()));
            for (auto [rounds, truncated] : *list) {
                e.put(rounds);
                e.put_bool(truncated);
            }
        }
    }
    e.put(static_cast<std::int64_t>(map_.size()));
    for (const auto& me : map_) {
        e.put(me.key);
        e.put(me.degree);
        e.put_seq(me.path);
        e.put_seq(me.back);
        e.put_seq(me.nbr);
    }
    e.put(static_cast<std::int64_t>(blocked_.size()));
    for (auto [k, p] : blocked_) {
        e.put(k);
        e.put(p);
    }
    e.put_bool(complete_);
    e.put(version_);
}

nlohmann::json Walk::to_json() const {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& nd : *nodes_) nodes.push_back({nd.degree, nd.parent, nd.parent_port, nd.depth});
    return {{"phase", cur_.phase},     {"start", cur_.start_round}, {"front", cur_.front},
            {"back", cur_.back},       {"index", cur_.index},       {"returning", cur_.returning},
            {"flips", cur_.flips},     {"version", version_},       {"nodes", nodes},
            {"map_nodes", map_.size()}, {"map_complete", complete_}};
}

int Walk::step_key(int key, Port p) {
    const auto& nd = (*nodes_)[key];
    if (key != 0 && p != 0 && p == nd.parent_port) return nd.parent;
    return child_key(key, p);
}

int Walk::map_index(int key) const {
    for (int i = 0; i < static_cast<int>(map_.size()); ++i)
        if (map_[i].key == key) return i;
    return -1;
}

void Walk::block(int key, Port p) {
    if (!blocked_.insert({key, p}).second) return;
    ++version_;
}

int Walk::map_target() {
    if (complete_) return -1;
    if (!known(0)) return 0;
    if (map_.empty()) {
        MapEntry h;
        h.key = 0;
        h.degree = (*nodes_)[0].degree;
        h.nbr.assign(h.degree, -1);
        map_.push_back(h);
        ++version_;
    }
    for (;;) {
        int u = -1;
        Port p = 0;
        for (int i = 0; i < static_cast<int>(map_.size()) && u < 0; ++i)
            for (Port q = 1; q <= map_[i].degree; ++q)
                if (map_[i].nbr[q - 1] == -1) {
                    u = i;
                    p = q;
                    break;
                }
        if (u < 0) {
            complete_ = true;
            ++version_;
            return -1;
        }
        const int uk = map_[u].key;
        if (blocked(uk, p)) {
            map_[u].nbr[p - 1] = -2;
            ++version_;
            continue;
        }
        const int wk = step_key(uk, p);
        if (!known(wk)) return wk;
        const int degree = (*nodes_)[wk].degree;
        const Port a = (*nodes_)[wk].parent_port;
        int match = -1;
        if ((*nodes_)[wk].mark == 1) {
            match = 0;
        } else {
            // replay the reversed home path of each candidate; only the real one ends at the marker
            for (int x = 1; x < static_cast<int>(map_.size()) && match < 0; ++x) {
                const MapEntry& cand = map_[x];
                if (x == u || cand.degree != degree || cand.nbr[a - 1] != -1) continue;
                int k = wk;
                bool ok = true;
                for (int j = static_cast<int>(cand.path.size()) - 1; j >= 0 && ok; --j) {
                    const Port q = cand.back[j];
                    if (q > (*nodes_)[k].degree || blocked(k, q)) {
                        ok = false;
                        break;
                    }
                    const int nk = step_key(k, q);
                    if (!known(nk)) return nk;
                    const bool up = nk == (*nodes_)[k].parent && k != 0;
                    const Port arrival = up ? (*nodes_)[k].port_from_parent : (*nodes_)[nk].parent_port;
                    if (arrival != cand.path[j]) ok = false;
                    k = nk;
                }
                if (ok && (*nodes_)[k].mark == 1) match = x;
            }
        }
        if (match >= 0) {
            map_[u].nbr[p - 1] = match;
            map_[match].nbr[a - 1] = u;
        } else {
            MapEntry e;
            e.key = wk;
            e.degree = degree;
            e.path = map_[u].path;
            e.path.push_back(p);
            e.back = map_[u].back;
            e.back.push_back(a);
            e.nbr.assign(degree, -1);
            e.nbr[a - 1] = u;
            map_[u].nbr[p - 1] = static_cast<int>(map_.size());
            map_.push_back(std::move(e));
        }
        ++version_;
    }
}

int Walk::tour_next(int key, int prev) const {
    const int u = map_index(key);
    if (u < 0) return key == 0 ? -1 : parent_of(key);
    const auto& nodes = *nodes_;
    Port start = 0;
    if (prev > 0 && prev < static_cast<int>(nodes.size()) && nodes[prev].parent == key) start = nodes[prev].port_from_parent;
    for (Port p = start + 1; p <= map_[u].degree; ++p) {
        const int c = map_[u].nbr[p - 1];
        if (c < 0) continue;
        const int ck = map_[c].key;
        if (nodes[ck].parent == key && nodes[ck].port_from_parent == p) return ck;
    }
    return key == 0 ? -1 : nodes[key].parent;
}

int Walk::map_step(int f) {
    const int t = map_target();
    if (t < 0) return 0;
    auto route = path(f, t);
    if (!route || route->empty()) return 0;
    return (*route)[0];
}

WalkAction Walk::next_map(int round) {
    auto count = [&] {
        ++cur_.index;
        if (cur_.index >= (1 << cur_.phase)) {
            cur_.returning = true;
            cur_.truncated = true;
        }
    };
    if (cur_.back < 0) {
        if (!known(0)) return {};
        int child = -1;
        if (cur_.phase > 0 && cur_.tour && !cur_.returning && cur_.last_root_port > 0)
            child = tour_next(0, child_key(0, cur_.last_root_port));
        if (child < 0) {
            begin_phase(round);
            if (cur_.tour) {
                child = tour_next(0, -1);
            } else if (Port p = map_step(0)) {
                child = step_key(0, p);
            }
            if (child < 0) return {};
        }
        const Port p = (*nodes_)[child].port_from_parent;
        cur_.last_root_port = p;
        cur_.back = 0;
        cur_.front = child;
        count();
        ++version_;
        return {ActionKind::Make, 0, child, 0, p, false};
    }
    const int f = cur_.front;
    if (f == 0 && (cur_.returning || cur_.tour)) {
        WalkAction a{ActionKind::Gather, 0, 0, cur_.back, port_between(cur_.back, 0), false};
        cur_.back = -1;
        ++version_;
        return a;
    }
    if (!known(f)) return {};
    int target = -1;
    Port port = 0;
    if (!cur_.returning) {
        if (cur_.tour) {
            target = tour_next(f, cur_.back);
            if (target >= 0) port = port_between(f, target);
        } else if (Port q = map_step(f)) {
            target = step_key(f, q);
            port = q;
        } else {
            cur_.returning = true;
        }
    }
    if (target < 0) {
        target = (*nodes_)[f].parent;
        port = (*nodes_)[f].parent_port;
    }
    if (target == cur_.back) {
        WalkAction a{ActionKind::Turn, f, cur_.back, f, port, false};
        std::swap(cur_.front, cur_.back);
        ++cur_.flips;
        if (!cur_.returning) count();
        ++version_;
        return a;
    }
    if (port == 0) return {};
    if (!cur_.returning) count();
    const bool final_step = target == 0 && (cur_.returning || cur_.tour);
    WalkAction a{ActionKind::Translate, f, target, cur_.back, port, final_step};
    if (final_step) {
        cur_.front = 0;
        cur_.back = -1;
    } else {
        cur_.back = f;
        cur_.front = target;
    }
    ++version_;
    return a;
}

std::vector<int> front_sequence(Walk w, int limit) {
    w.restart_phase();
    std::vector<int> out;
    for (int guard = 0; static_cast<int>(out.size()) < limit && guard < 4 * limit + 8; ++guard) {
        WalkAction a = w.next(0);
        if (a.kind == ActionKind::None) break;
        if (a.kind == ActionKind::Gather) continue;
        out.push_back(a.to);
    }
    return out;
}

}  // namespace bbh
