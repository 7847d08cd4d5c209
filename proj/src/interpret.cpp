#include <algorithm>
#include <unordered_map>

#include "ipl/tactics.hpp"

namespace ipl::tactics {

using lj::LjProof;
using lj::RuleName;
using nj::Argument;

// ---------------------------------------------------------------------------
// Validity of tactics

namespace {

/// Distinct sub-contexts (as subsequences) of `ctx`.
std::vector<std::vector<Formula>> sub_contexts(const std::vector<Formula>& ctx) {
    std::vector<std::vector<Formula>> out;
    std::size_t n = ctx.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::vector<Formula> c;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) c.push_back(ctx[i]);
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

ValidityReport check_tactic_valid(const Tactic& t, const std::vector<Goal>& goals, const Prover& prover,
                                  std::size_t max_tuples) {
    ValidityReport report;
    report.tactic = t.name;
    std::unordered_map<Sequent, std::optional<LjProof>, SequentHash> memo;
    auto prove = [&](const Sequent& s) -> const std::optional<LjProof>& {
        auto it = memo.find(s);
        if (it == memo.end()) it = memo.emplace(s, prover(s)).first;
        return it->second;
    };
    for (const auto& g : goals) {
        ++report.goals;
        auto r = t(g);
        if (!r) continue;
        ++report.fired;
        std::vector<std::vector<Event>> options;
        for (const auto& sg : r->subgoals) {
            std::vector<Event> evs;
            for (auto& c : sub_contexts(sg.context)) {
                const auto& proof = prove(Sequent{c, sg.succedent});
                if (proof) evs.push_back(Event::of(*proof));
            }
            options.push_back(std::move(evs));
        }
        bool empty = std::any_of(options.begin(), options.end(), [](const auto& o) { return o.empty(); });
        if (empty) continue;
        std::vector<std::size_t> idx(options.size(), 0);
        for (std::size_t count = 0; count < max_tuples; ++count) {
            std::vector<Event> tuple;
            for (std::size_t i = 0; i < options.size(); ++i) tuple.push_back(options[i][idx[i]]);
            ++report.tuples;
            auto violation = [&](std::string problem) {
                Violation v{g, r->subgoals, {}, std::move(problem)};
                for (const auto& e : tuple) v.events.push_back(e.sequent);
                report.violations.push_back(std::move(v));
            };
            try {
                Event e = run_procedure(r->procedure, tuple);
                if (!achieves(e, g)) violation("result " + render(e.sequent) + " does not achieve the goal");
            } catch (const ProcedureMismatch& ex) {
                violation(std::string("procedure rejected the events: ") + ex.what());
            }
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == options[k].size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Arguments from traces

Argument interpret_goal(const Goal& g) {
    std::vector<Argument> leaves;
    for (const auto& f : g.context) leaves.push_back(Argument::assume(f));
    return Argument::infer(g.succedent.value_or(Formula::bot()), std::move(leaves));
}

namespace {

bool is_one_step(const Argument& a) {
    return !a.is_assumption() && std::all_of(a.children.begin(), a.children.end(), [](const Argument& c) {
        return c.is_assumption() && c.label == 0;
    });
}

}  // namespace

std::vector<Goal> decode_goal(const Argument& a) {
    Sequent s;
    if (is_one_step(a)) {
        s.succedent = a.formula;
        for (const auto& c : a.children) s.context.push_back(c.formula);
    } else {
        s = nj::ergo(a);
        if (!s.succedent) s.succedent = Formula::bot();
    }
    std::vector<Goal> out{s};
    if (s.succedent->is_bot()) out.push_back(Sequent{s.context, std::nullopt});
    return out;
}

namespace {

class Skeleton {
public:
    Argument build(const Trace& t, std::vector<Argument> feeders) {
        const Goal& g = t.goal;
        Formula chi = g.succedent.value_or(Formula::bot());
        if (feeders.size() != g.context.size()) throw std::invalid_argument("trace goal " + render(g) + " is malformed");
        if (!t.step) return Argument::infer(chi, std::move(feeders));
        const TraceStep& step = *t.step;
        if (step.proc == "id") {
            if (step.children.size() != 1) throw std::invalid_argument("id step needs one child");
            return build(step.children[0], match(feeders, g.context, step.children[0].goal.context));
        }
        auto parsed = lj::parse_instance_id(step.proc);
        if (!parsed) throw std::invalid_argument("unknown procedure '" + step.proc + "'");
        if (step.children.size() != lj::premise_count(parsed->rule))
            throw std::invalid_argument("step " + step.proc + " has the wrong number of children");
        std::vector<Formula> ctx = g.context;
        if (!parsed->permutation.empty()) {
            if (parsed->permutation.size() != feeders.size()) throw std::invalid_argument("bad permutation");
            std::vector<Argument> f2;
            std::vector<Formula> c2;
            for (auto i : parsed->permutation) {
                if (i >= feeders.size()) throw std::invalid_argument("bad permutation");
                f2.push_back(feeders[i]);
                c2.push_back(ctx[i]);
            }
            feeders = std::move(f2);
            ctx = std::move(c2);
        }
        const auto& kids = step.children;
        auto rest = [&] { return std::vector<Argument>(feeders.begin() + 1, feeders.end()); };
        auto head = [&]() -> const Argument& {
            if (feeders.empty()) throw std::invalid_argument("step " + step.proc + " has no principal formula");
            return feeders.front();
        };
        switch (parsed->rule) {
            case RuleName::ax:
            case RuleName::botL:
                return head();
            case RuleName::andR:
                return Argument::infer(chi, {build(kids[0], feeders), build(kids[1], feeders)});
            case RuleName::orR1:
            case RuleName::orR2:
                return Argument::infer(chi, {build(kids[0], feeders)});
            case RuleName::impR:
            case RuleName::negR: {
                unsigned u = ++next_;
                std::vector<Argument> f{Argument::assume(chi.left(), u)};
                f.insert(f.end(), feeders.begin(), feeders.end());
                return Argument::infer(chi, {build(kids[0], std::move(f))}, {u});
            }
            case RuleName::wR:
                return Argument::infer(chi, {build(kids[0], feeders)});
            case RuleName::andL1:
            case RuleName::andL2: {
                const Argument& m = head();
                Formula part = parsed->rule == RuleName::andL1 ? m.formula.left() : m.formula.right();
                std::vector<Argument> f{Argument::infer(part, {m})};
                auto r = rest();
                f.insert(f.end(), r.begin(), r.end());
                return build(kids[0], std::move(f));
            }
            case RuleName::orL: {
                const Argument& m = head();
                unsigned u = ++next_;
                unsigned v = ++next_;
                std::vector<Argument> f0{Argument::assume(m.formula.left(), u)};
                std::vector<Argument> f1{Argument::assume(m.formula.right(), v)};
                auto r = rest();
                f0.insert(f0.end(), r.begin(), r.end());
                f1.insert(f1.end(), r.begin(), r.end());
                return Argument::infer(chi, {m, build(kids[0], std::move(f0)), build(kids[1], std::move(f1))}, {u, v});
            }
            case RuleName::impL: {
                const Argument& m = head();
                auto r = rest();
                std::size_t k = kids[0].goal.context.size();
                if (k > r.size()) throw std::invalid_argument("impL split out of range");
                std::vector<Argument> g1(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(k));
                Argument app = Argument::infer(m.formula.right(), {build(kids[0], std::move(g1)), m});
                std::vector<Argument> f{std::move(app)};
                f.insert(f.end(), r.begin() + static_cast<std::ptrdiff_t>(k), r.end());
                return build(kids[1], std::move(f));
            }
            case RuleName::negL: {
                const Argument& m = head();
                return Argument::infer(Formula::bot(), {build(kids[0], rest()), m});
            }
            case RuleName::wL:
                head();
                return build(kids[0], rest());
            case RuleName::cL: {
                std::vector<Argument> f{head()};
                f.insert(f.end(), feeders.begin(), feeders.end());
                return build(kids[0], std::move(f));
            }
            case RuleName::e:
                return build(kids[0], match(feeders, ctx, kids[0].goal.context));
            case RuleName::cut: {
                std::size_t k = kids[0].goal.context.size();
                if (k > feeders.size()) throw std::invalid_argument("cut split out of range");
                std::vector<Argument> delta(feeders.begin(), feeders.begin() + static_cast<std::ptrdiff_t>(k));
                std::vector<Argument> f{build(kids[0], std::move(delta))};
                f.insert(f.end(), feeders.begin() + static_cast<std::ptrdiff_t>(k), feeders.end());
                return build(kids[1], std::move(f));
            }
        }
        throw std::invalid_argument("unsupported rule");
    }

private:
    /// Feeders reordered to follow `to`, a permutation of `from`.
    static std::vector<Argument> match(const std::vector<Argument>& feeders, const std::vector<Formula>& from,
                                       const std::vector<Formula>& to) {
        if (!is_permutation(from, to)) throw std::invalid_argument("exchange does not permute the context");
        std::vector<bool> used(from.size(), false);
        std::vector<Argument> out;
        for (const auto& f : to)
            for (std::size_t i = 0; i < from.size(); ++i)
                if (!used[i] && from[i] == f) {
                    used[i] = true;
                    out.push_back(feeders[i]);
                    break;
                }
        return out;
    }

    unsigned next_ = 0;
};

}  // namespace

Argument interpret_trace(const Trace& t) {
    std::vector<Argument> leaves;
    for (const auto& f : t.goal.context) leaves.push_back(Argument::assume(f));
    return nj::relabel(Skeleton().build(t, std::move(leaves)));
}

Aro interpret_tactic(const Tactic& t) {
    return [t](const Argument& a) -> std::optional<AroResult> {
        for (const auto& g : decode_goal(a)) {
            auto r = t(g);
            if (!r) continue;
            std::vector<Argument> feeders;
            if (is_one_step(a)) {
                feeders = a.children;
            } else {
                for (const auto& f : g.context) feeders.push_back(Argument::assume(f));
            }
            AroResult out{nj::relabel(Skeleton().build(r->trace, std::move(feeders))), {}};
            for (const auto& sg : r->subgoals) out.subgoal_arguments.push_back(interpret_goal(sg));
            return out;
        }
        return std::nullopt;
    };
}

}  // namespace ipl::tactics
