#pragma once

#include <memory>
#include <set>
#include <string>

#include <json.hpp>

#include "bbh/engine.hpp"

namespace bbh {

class PredicateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Boolean trigger predicates over the adversary view.
//
//   expr    := term ('or' term)*
//   term    := factor ('and' factor)*
//   factor  := 'not' factor | '(' expr ')' | 'true' | 'false' | atom
//   atom    := NAME                       (nonzero value)
//            | NAME CMP INT
//            | NAME 'in' INT '..' INT
//            | NAME '%' INT CMP INT
//   CMP     := == != < <= > >=
//
// Names: round, entering, occupied, relevant, destroyed, alive, entries
// (earlier rounds with an entry into the bbh), activations (earlier
// activations), since_first_destruction (-1 before any).
class Predicate {
public:
    struct Node;
    explicit Predicate(const std::string& text);
    bool eval(const AdversaryView& v) const;
    const std::string& text() const { return text_; }

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

class BenignAdversary final : public Adversary {
public:
    bool decide(const AdversaryView&) override { return false; }
    std::unique_ptr<Adversary> clone() const override { return std::make_unique<BenignAdversary>(); }
    nlohmann::json to_json() const override { return {{"name", "benign"}}; }
};

class AlwaysActiveAdversary final : public Adversary {
public:
    bool decide(const AdversaryView&) override { return true; }
    std::unique_ptr<Adversary> clone() const override { return std::make_unique<AlwaysActiveAdversary>(); }
    nlohmann::json to_json() const override { return {{"name", "always_active"}}; }
};

class ScriptedAdversary final : public Adversary {
public:
    explicit ScriptedAdversary(std::set<int> rounds) : rounds_(std::move(rounds)) {}
    bool decide(const AdversaryView& v) override { return rounds_.count(v.round) > 0; }
    std::unique_ptr<Adversary> clone() const override { return std::make_unique<ScriptedAdversary>(rounds_); }
    nlohmann::json to_json() const override;
    const std::set<int>& rounds() const { return rounds_; }

private:
    std::set<int> rounds_;
};

class TriggerAdversary final : public Adversary {
public:
    explicit TriggerAdversary(Predicate p) : pred_(std::move(p)) {}
    bool decide(const AdversaryView& v) override { return pred_.eval(v); }
    std::unique_ptr<Adversary> clone() const override { return std::make_unique<TriggerAdversary>(pred_); }
    nlohmann::json to_json() const override { return {{"name", "trigger"}, {"predicate", pred_.text()}}; }

private:
    Predicate pred_;
};

// Activates when the predicate holds, at most max_activations times.
class BudgetedAdversary final : public Adversary {
public:
    BudgetedAdversary(int max_activations, Predicate p) : max_(max_activations), pred_(std::move(p)) {}
    bool decide(const AdversaryView& v) override;
    std::unique_ptr<Adversary> clone() const override { return std::make_unique<BudgetedAdversary>(*this); }
    std::string state_key() const override { return std::to_string(used_); }
    nlohmann::json to_json() const override {
        return {{"name", "budgeted"}, {"max", max_}, {"predicate", pred_.text()}};
    }

private:
    int max_;
    int used_ = 0;
    Predicate pred_;
};

// {"name": "benign"} | {"name": "always_active"} | {"name": "scripted", "rounds": [...]}
// | {"name": "trigger", "predicate": "..."} | {"name": "budgeted", "max": m, "predicate": "..."}
std::unique_ptr<Adversary> make_adversary(const nlohmann::json& spec);

// Trigger predicates used by the sweeps: strike on the first, second or
// third entry, every entry, on a round parity, and a first strike followed by
// a burst of activations.
const std::vector<std::string>& trigger_family();

}  // namespace bbh
