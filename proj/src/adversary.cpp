#include "bbh/adversary.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <vector>

namespace bbh {

struct Predicate::Node {
    enum Kind { Const, Or, And, Not, Cmp, Range, Mod } kind = Const;
    bool value = false;
    std::string name;
    std::string op;
    long a = 0, b = 0, m = 0;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodeP = std::shared_ptr<const Predicate::Node>;

const std::vector<std::string> kNames = {"round",  "entering",    "occupied",   "relevant",
                                         "destroyed", "alive",    "entries",    "activations",
                                         "since_first_destruction"};

struct Lexer {
    std::vector<std::string> toks;
    size_t pos = 0;

    explicit Lexer(const std::string& s) {
        size_t i = 0;
        while (i < s.size()) {
            char c = s[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                size_t j = i;
                while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
                toks.push_back(s.substr(i, j - i));
                i = j;
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
                size_t j = i + 1;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                toks.push_back(s.substr(i, j - i));
                i = j;
            } else if (s.compare(i, 2, "..") == 0 || s.compare(i, 2, "==") == 0 || s.compare(i, 2, "!=") == 0 ||
                       s.compare(i, 2, "<=") == 0 || s.compare(i, 2, ">=") == 0) {
                toks.push_back(s.substr(i, 2));
                i += 2;
            } else if (c == '(' || c == ')' || c == '<' || c == '>' || c == '%') {
                toks.push_back(std::string(1, c));
                ++i;
            } else {
                throw PredicateError(std::string("unexpected character '") + c + "' in predicate");
            }
        }
    }
    bool done() const { return pos >= toks.size(); }
    const std::string& peek() const {
        static const std::string end;
        return done() ? end : toks[pos];
    }
    std::string next() {
        if (done()) throw PredicateError("predicate ends early");
        return toks[pos++];
    }
    void expect(const std::string& t) {
        if (next() != t) throw PredicateError("expected '" + t + "' in predicate");
    }
    long integer() {
        std::string t = next();
        try {
            size_t used = 0;
            long v = std::stol(t, &used);
            if (used != t.size()) throw PredicateError("bad integer '" + t + "'");
            return v;
        } catch (const std::logic_error&) {
            throw PredicateError("expected integer, got '" + t + "'");
        }
    }
};

bool is_cmp(const std::string& t) {
    return t == "==" || t == "!=" || t == "<" || t == "<=" || t == ">" || t == ">=";
}

NodeP parse_or(Lexer& lx);

NodeP parse_factor(Lexer& lx) {
    std::string t = lx.next();
    auto n = std::make_shared<Predicate::Node>();
    if (t == "not") {
        n->kind = Predicate::Node::Not;
        n->lhs = parse_factor(lx);
        return n;
    }
    if (t == "(") {
        NodeP inner = parse_or(lx);
        lx.expect(")");
        return inner;
    }
    if (t == "true" || t == "false") {
        n->kind = Predicate::Node::Const;
        n->value = (t == "true");
        return n;
    }
    if (std::find(kNames.begin(), kNames.end(), t) == kNames.end())
        throw PredicateError("unknown name '" + t + "' in predicate");
    n->name = t;
    if (lx.peek() == "in") {
        lx.next();
        n->kind = Predicate::Node::Range;
        n->a = lx.integer();
        lx.expect("..");
        n->b = lx.integer();
    } else if (lx.peek() == "%") {
        lx.next();
        n->kind = Predicate::Node::Mod;
        n->m = lx.integer();
        if (n->m <= 0) throw PredicateError("modulus must be positive");
        n->op = lx.next();
        if (!is_cmp(n->op)) throw PredicateError("expected comparison after modulus");
        n->a = lx.integer();
    } else if (is_cmp(lx.peek())) {
        n->kind = Predicate::Node::Cmp;
        n->op = lx.next();
        n->a = lx.integer();
    } else {
        n->kind = Predicate::Node::Cmp;
        n->op = "!=";
        n->a = 0;
    }
    return n;
}

NodeP parse_and(Lexer& lx) {
    NodeP left = parse_factor(lx);
    while (lx.peek() == "and") {
        lx.next();
        auto n = std::make_shared<Predicate::Node>();
        n->kind = Predicate::Node::And;
        n->lhs = left;
        n->rhs = parse_factor(lx);
        left = n;
    }
    return left;
}

NodeP parse_or(Lexer& lx) {
    NodeP left = parse_and(lx);
    while (lx.peek() == "or") {
        lx.next();
        auto n = std::make_shared<Predicate::Node>();
        n->kind = Predicate::Node::Or;
        n->lhs = left;
        n->rhs = parse_and(lx);
        left = n;
    }
    return left;
}

long lookup(const std::string& name, const AdversaryView& v) {
    if (name == "round") return v.round;
    if (name == "entering") return v.entering;
    if (name == "occupied") return v.occupied;
    if (name == "relevant") return v.entering + v.occupied;
    if (name == "destroyed") return v.world.destroyed_count;
    if (name == "alive") return v.world.alive_count();
    if (name == "entries") return v.world.entry_rounds;
    if (name == "activations") return v.world.activations;
    if (name == "since_first_destruction")
        return v.world.destruction_time ? v.round - *v.world.destruction_time : -1;
    return 0;
}

bool compare(long x, const std::string& op, long y) {
    if (op == "==") return x == y;
    if (op == "!=") return x != y;
    if (op == "<") return x < y;
    if (op == "<=") return x <= y;
    if (op == ">") return x > y;
    return x >= y;
}

bool eval_node(const Predicate::Node& n, const AdversaryView& v) {
    switch (n.kind) {
        case Predicate::Node::Const: return n.value;
        case Predicate::Node::Or: return eval_node(*n.lhs, v) || eval_node(*n.rhs, v);
        case Predicate::Node::And: return eval_node(*n.lhs, v) && eval_node(*n.rhs, v);
        case Predicate::Node::Not: return !eval_node(*n.lhs, v);
        case Predicate::Node::Cmp: return compare(lookup(n.name, v), n.op, n.a);
        case Predicate::Node::Range: {
            long x = lookup(n.name, v);
            return x >= n.a && x <= n.b;
        }
        case Predicate::Node::Mod: return compare(lookup(n.name, v) % n.m, n.op, n.a);
    }
    return false;
}

}  // namespace

Predicate::Predicate(const std::string& text) : text_(text) {
    Lexer lx(text);
    if (lx.done()) throw PredicateError("empty predicate");
    root_ = parse_or(lx);
    if (!lx.done()) throw PredicateError("trailing token '" + lx.peek() + "' in predicate");
}

bool Predicate::eval(const AdversaryView& v) const { return eval_node(*root_, v); }

nlohmann::json ScriptedAdversary::to_json() const {
    return {{"name", "scripted"}, {"rounds", std::vector<int>(rounds_.begin(), rounds_.end())}};
}

bool BudgetedAdversary::decide(const AdversaryView& v) {
    if (used_ >= max_ || !pred_.eval(v)) return false;
    ++used_;
    return true;
}

std::unique_ptr<Adversary> make_adversary(const nlohmann::json& spec) {
    if (!spec.is_object() || !spec.contains("name") || !spec["name"].is_string())
        throw PredicateError("adversary spec needs a string 'name'");
    const std::string name = spec["name"];
    if (name == "benign") return std::make_unique<BenignAdversary>();
    if (name == "always_active") return std::make_unique<AlwaysActiveAdversary>();
    if (name == "scripted") {
        std::set<int> rounds;
        if (spec.contains("rounds"))
            for (const auto& r : spec["rounds"]) rounds.insert(r.get<int>());
        return std::make_unique<ScriptedAdversary>(std::move(rounds));
    }
    if (name == "trigger") return std::make_unique<TriggerAdversary>(Predicate(spec.at("predicate").get<std::string>()));
    if (name == "budgeted")
        return std::make_unique<BudgetedAdversary>(spec.at("max").get<int>(),
                                                   Predicate(spec.value("predicate", std::string("relevant"))));
    throw PredicateError("unknown adversary '" + name + "'");
}

const std::vector<std::string>& trigger_family() {
    static const std::vector<std::string> family = {
        "relevant",
        "entering > 0",
        "entering > 0 and entries == 0",
        "entering > 0 and entries == 1",
        "entering > 0 and entries == 2",
        "relevant and round % 2 == 0",
        "relevant and round % 3 == 1",
        "relevant and activations < 1",
        "relevant and entries >= 3",
        "relevant and (activations < 1 or since_first_destruction in 1..6)",
        "occupied > 0 and entering == 0",
    };
    return family;
}

}  // namespace bbh
