#include "ipl/engine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_set>

namespace ipl::engine {

using lj::LjProof;
using lj::RuleInstance;
using lj::RuleName;
using tactics::Trace;
using tactics::TraceStep;

Sequent capped(const Sequent& s, std::size_t cap) {
    Sequent c = canonical(s);
    std::vector<Formula> kept;
    for (const auto& f : c.context) {
        std::size_t have = 0;
        for (auto it = kept.rbegin(); it != kept.rend() && *it == f; ++it) ++have;
        if (have < cap) kept.push_back(f);
    }
    c.context = std::move(kept);
    return c;
}

// ---------------------------------------------------------------------------
// Decision oracle

namespace {

/// Every context formula repeated `n` times.
Sequent repeated(const Sequent& key, std::size_t n) {
    Sequent out{{}, key.succedent};
    for (const auto& f : key.context)
        for (std::size_t k = 0; k < n; ++k) out.context.push_back(f);
    return out;
}

}  // namespace

Decider::Decider(std::size_t cap) {
    if (cap < 2) throw std::invalid_argument("decision needs a contraction cap of at least 2");
    policy_.contraction_cap = cap;
    policy_.maximal_splits = true;
}

std::size_t Decider::intern(const Sequent& key, std::vector<std::size_t>& fresh) {
    auto [it, inserted] = index_.emplace(key, nodes_.size());
    if (inserted) {
        keys_.push_back(key);
        nodes_.emplace_back();
        fresh.push_back(it->second);
    }
    return it->second;
}

std::optional<bool> Decider::known(const Sequent& s) const {
    auto it = index_.find(capped(s, 1));
    if (it == index_.end() || !nodes_[it->second].settled) return std::nullopt;
    return nodes_[it->second].provable;
}

bool Decider::operator()(const Sequent& s) {
    if (auto k = known(s)) return *k;
    std::vector<std::size_t> fresh;
    std::size_t root = intern(capped(s, 1), fresh);
    for (std::size_t i = 0; i < fresh.size(); ++i) {
        std::size_t id = fresh[i];
        // The set form reaches ax and botL; the repeated form lets impL share the context.
        Sequent key = keys_[id];
        std::vector<std::vector<std::size_t>> instances;
        for (const auto& form : {key, repeated(key, cap())}) {
            for (const auto& inst : lj::rule_instances(form, policy_)) {
                std::vector<std::size_t> premises;
                for (const auto& p : inst.premises) premises.push_back(intern(capped(p, 1), fresh));
                instances.push_back(std::move(premises));
            }
        }
        nodes_[id].instances = std::move(instances);
    }

    // Least fixpoint over the fresh nodes; settled nodes act as constants.
    std::unordered_map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> waiting;
    std::unordered_map<std::size_t, std::vector<std::size_t>> pending;
    std::deque<std::size_t> proved;
    for (auto id : fresh) {
        auto& counts = pending[id];
        for (std::size_t k = 0; k < nodes_[id].instances.size(); ++k) {
            std::size_t open = 0;
            bool dead = false;
            for (auto p : nodes_[id].instances[k]) {
                if (nodes_[p].settled) {
                    dead = dead || !nodes_[p].provable;
                } else {
                    ++open;
                    waiting[p].emplace_back(id, k);
                }
            }
            counts.push_back(dead ? SIZE_MAX : open);
            if (!dead && open == 0) proved.push_back(id);
        }
    }
    std::unordered_set<std::size_t> done;
    while (!proved.empty()) {
        std::size_t id = proved.front();
        proved.pop_front();
        if (!done.insert(id).second) continue;
        for (auto [parent, k] : waiting[id]) {
            auto& c = pending[parent][k];
            if (c != SIZE_MAX && c > 0 && --c == 0) proved.push_back(parent);
        }
    }
    for (auto id : fresh) {
        nodes_[id].settled = true;
        nodes_[id].provable = done.count(id) > 0;
        nodes_[id].instances.clear();
        nodes_[id].instances.shrink_to_fit();
    }
    return nodes_[root].provable;
}

Decider& shared_decider(std::size_t cap) {
    static std::map<std::size_t, Decider> deciders;
    auto it = deciders.find(cap);
    if (it == deciders.end()) it = deciders.emplace(cap, Decider(cap)).first;
    return it->second;
}

bool decide(const Sequent& s, std::size_t cap) { return shared_decider(cap)(s); }

std::string_view status_name(Status s) {
    switch (s) {
        case Status::Proved: return "proved";
        case Status::Unprovable: return "unprovable";
        case Status::Exhausted: return "exhausted";
        case Status::Remaining: return "remaining";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Search

namespace {

bool is_right_rule(RuleName r) {
    return r == RuleName::andR || r == RuleName::orR1 || r == RuleName::orR2 || r == RuleName::impR ||
           r == RuleName::negR;
}

class Searcher {
public:
    Searcher(const SearchOptions& options) : options_(options), oracle_(shared_decider(options.policy.contraction_cap)) {}

    std::optional<Trace> prove(const Sequent& s, std::size_t remaining, bool root) {
        ++nodes_;
        if (remaining == 0) return std::nullopt;
        Sequent key = capped(s, options_.policy.contraction_cap);
        if (branch_.count(key)) return std::nullopt;
        auto failed = failed_.find(key);
        if (failed != failed_.end() && failed->second >= remaining) return std::nullopt;
        branch_.insert(key);
        std::optional<Trace> found;
        for (const auto& inst : lj::rule_instances(s, options_.policy)) {
            if (root && options_.intro_final && !is_right_rule(inst.rule)) continue;
            bool viable = std::all_of(inst.premises.begin(), inst.premises.end(),
                                      [&](const Sequent& p) { return oracle_(p); });
            if (!viable) continue;
            Trace t{s, TraceStep{std::string(lj::rule_name(inst.rule)), lj::instance_id(inst), {}}};
            bool ok = true;
            for (const auto& p : inst.premises) {
                auto child = prove(p, remaining - 1, false);
                if (!child) {
                    ok = false;
                    break;
                }
                t.step->children.push_back(std::move(*child));
            }
            if (ok) {
                found = std::move(t);
                break;
            }
        }
        branch_.erase(key);
        if (!found) {
            auto& rec = failed_[key];
            rec = std::max(rec, remaining);
        }
        return found;
    }

    std::size_t nodes() const { return nodes_; }

private:
    const SearchOptions& options_;
    Decider& oracle_;
    std::unordered_set<Sequent, SequentHash> branch_;
    std::unordered_map<Sequent, std::size_t, SequentHash> failed_;
    std::size_t nodes_ = 0;
};

void complete(SearchOutcome& out, Trace trace) {
    out.proof = synthesize(trace);
    out.argument = tactics::interpret_trace(trace);
    out.trace = std::move(trace);
    out.status = Status::Proved;
}

}  // namespace

SearchOutcome search(const Sequent& goal, const SearchOptions& options) {
    if (options.depth < 1) throw std::invalid_argument("search depth must be at least 1");
    SearchOutcome out;
    out.goal = goal;
    out.depth = options.depth;
    Decider& oracle = shared_decider(options.policy.contraction_cap);
    if (!oracle(goal)) {
        out.status = Status::Unprovable;
        return out;
    }
    Searcher searcher(options);
    auto trace = searcher.prove(goal, options.depth, true);
    out.nodes = searcher.nodes();
    if (!trace) {
        bool any_viable = false;
        for (const auto& inst : lj::rule_instances(goal, options.policy))
            if (!options.intro_final || is_right_rule(inst.rule))
                any_viable = any_viable || std::all_of(inst.premises.begin(), inst.premises.end(),
                                                       [&](const Sequent& p) { return oracle(p); });
        out.status = any_viable ? Status::Exhausted : Status::Unprovable;
        return out;
    }
    complete(out, std::move(*trace));
    return out;
}

// ---------------------------------------------------------------------------
// Synthesis

namespace {

std::string render_path(const std::vector<std::size_t>& path) {
    if (path.empty()) return "root";
    std::string out;
    for (auto i : path) out += (out.empty() ? "" : ".") + std::to_string(i);
    return out;
}

LjProof synthesize_at(const Trace& t, std::vector<std::size_t>& path) {
    if (!t.step) throw SynthesisFailure(path, "goal " + render(t.goal) + " is open");
    const TraceStep& step = *t.step;
    std::vector<LjProof> proofs;
    for (std::size_t i = 0; i < step.children.size(); ++i) {
        path.push_back(i);
        proofs.push_back(synthesize_at(step.children[i], path));
        path.pop_back();
    }
    if (step.proc == "id") {
        if (proofs.size() != 1 || step.children[0].goal != t.goal)
            throw SynthesisFailure(path, "identity record changes the goal");
        return proofs.front();
    }
    auto parsed = lj::parse_instance_id(step.proc);
    if (!parsed) throw SynthesisFailure(path, "unknown procedure '" + step.proc + "'");
    RuleInstance inst{parsed->rule, {}, parsed->permutation};
    for (const auto& c : step.children) inst.premises.push_back(c.goal);
    if (inst.premises.size() != lj::premise_count(inst.rule))
        throw SynthesisFailure(path, step.proc + " does not take " + std::to_string(inst.premises.size()) + " premises");
    try {
        return lj::apply_instance(t.goal, inst, std::move(proofs));
    } catch (const lj::KernelError& e) {
        throw SynthesisFailure(path, e.what());
    } catch (const std::exception& e) {
        throw SynthesisFailure(path, e.what());
    }
}

}  // namespace

SynthesisFailure::SynthesisFailure(std::vector<std::size_t> path, const std::string& what)
    : std::runtime_error("at " + render_path(path) + ": " + what), path_(std::move(path)) {}

LjProof synthesize(const Trace& trace) {
    std::vector<std::size_t> path;
    return synthesize_at(trace, path);
}

SearchOutcome run_script(const tactics::Tactic& t, const Sequent& goal) {
    SearchOutcome out;
    out.goal = goal;
    auto r = t(goal);
    if (!r) {
        out.status = Status::Remaining;
        out.remaining = {goal};
        out.trace = Trace::open(goal);
        return out;
    }
    out.nodes = r->trace.steps();
    if (!r->subgoals.empty()) {
        out.status = Status::Remaining;
        out.remaining = r->subgoals;
        out.trace = std::move(r->trace);
        return out;
    }
    complete(out, std::move(r->trace));
    return out;
}

// ---------------------------------------------------------------------------
// Coherence audit

namespace {

std::vector<Sequent> readings(const Sequent& g) {
    Sequent e = nj::ergo(tactics::interpret_goal(g));
    std::vector<Sequent> out{e};
    if (e.succedent && e.succedent->is_bot()) out.push_back(Sequent{e.context, std::nullopt});
    return out;
}

bool coheres(const Sequent& goal, const std::vector<Sequent>& subgoals, const lj::InstanceId& id) {
    std::vector<std::vector<Sequent>> options{readings(goal)};
    for (const auto& s : subgoals) options.push_back(readings(s));
    std::vector<std::size_t> idx(options.size(), 0);
    for (;;) {
        RuleInstance inst{id.rule, {}, id.permutation};
        for (std::size_t i = 1; i < options.size(); ++i) inst.premises.push_back(options[i][idx[i]]);
        if (lj::instance_checks(options[0][idx[0]], inst)) return true;
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == options[k].size()) idx[k++] = 0;
        if (k == idx.size()) return false;
    }
}

void audit_at(const Trace& t, std::vector<std::size_t>& path, AuditReport& report) {
    if (!t.step) return;
    ++report.records;
    const TraceStep& step = *t.step;
    std::vector<Sequent> subgoals;
    for (const auto& c : step.children) subgoals.push_back(c.goal);
    auto violation = [&](std::string problem) {
        report.violations.push_back(AuditViolation{path, t.goal, step.proc, std::move(problem)});
    };
    if (step.proc == "id") {
        if (subgoals.size() != 1 || !is_permutation(subgoals[0].context, t.goal.context) ||
            subgoals[0].succedent != t.goal.succedent)
            violation("identity record changes the goal");
    } else if (auto id = lj::parse_instance_id(step.proc)) {
        if (subgoals.size() != lj::premise_count(id->rule))
            violation(step.proc + " does not take " + std::to_string(subgoals.size()) + " premises");
        else if (!coheres(t.goal, subgoals, *id))
            violation("no " + std::string(lj::rule_name(id->rule)) + " inference from the subgoals to the goal");
    } else {
        violation("unknown procedure '" + step.proc + "'");
    }
    for (std::size_t i = 0; i < step.children.size(); ++i) {
        path.push_back(i);
        audit_at(step.children[i], path, report);
        path.pop_back();
    }
}

}  // namespace

AuditReport audit_coherence(const Trace& trace) {
    AuditReport report;
    std::vector<std::size_t> path;
    audit_at(trace, path, report);
    return report;
}

tactics::Prover search_prover(std::size_t depth) {
    return [depth](const Sequent& s) -> std::optional<LjProof> {
        SearchOptions options;
        options.depth = depth;
        auto out = search(s, options);
        return out.proof;
    };
}

}  // namespace ipl::engine
