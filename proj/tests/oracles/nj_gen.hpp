#pragma once

// Random NJ derivations biased toward detours.

#include <utility>
#include <vector>

#include "generators.hpp"
#include "ipl/nj.hpp"

namespace gen {

class DerivationGen {
public:
    explicit DerivationGen(std::uint64_t seed) : rng_(seed) {}

    /// A derivation of a random conclusion; open assumptions appear as unlabeled leaves.
    ipl::nj::Argument next(int budget = 25) {
        next_label_ = 0;
        budget_ = budget;
        auto goal = formula(rng_, 2, {"p", "q"});
        return build(goal, {}, 3);
    }

private:
    using Hyp = std::pair<ipl::Formula, unsigned>;

    ipl::nj::Argument leaf(const ipl::Formula& goal, const std::vector<Hyp>& hyps) {
        for (auto it = hyps.rbegin(); it != hyps.rend(); ++it)
            if (it->first == goal && pick(rng_, 4) != 0) return ipl::nj::Argument::assume(goal, it->second);
        return ipl::nj::Argument::assume(goal);
    }

    ipl::nj::Argument build(const ipl::Formula& goal, const std::vector<Hyp>& hyps, int depth) {
        using ipl::Formula;
        using ipl::nj::Argument;
        --budget_;
        if (budget_ <= 2 || depth <= 0) return leaf(goal, hyps);
        auto side = [&] { return formula(rng_, 1, {"p", "q"}); };
        switch (pick(rng_, 9)) {
            case 0:
            case 1: {  // detour on conjunction
                auto other = side();
                bool first = pick(rng_, 2) == 0;
                auto c = first ? Formula::conj(goal, other) : Formula::conj(other, goal);
                auto l = build(c.left(), hyps, depth - 1);
                auto r = build(c.right(), hyps, depth - 1);
                return Argument::infer(goal, {Argument::infer(c, {l, r})});
            }
            case 2:
            case 3: {  // detour on implication
                auto a = side();
                unsigned u = ++next_label_;
                auto inner = hyps;
                inner.emplace_back(a, u);
                auto body = build(goal, inner, depth - 1);
                auto minor = build(a, hyps, depth - 1);
                return Argument::infer(goal, {minor, Argument::infer(Formula::imp(a, goal), {body}, {u})});
            }
            case 4: {  // detour on disjunction
                auto a = side(), b = side();
                bool first = pick(rng_, 2) == 0;
                unsigned u = ++next_label_, v = ++next_label_;
                auto d = Formula::disj(a, b);
                auto inj = Argument::infer(d, {build(first ? a : b, hyps, depth - 1)});
                auto h1 = hyps, h2 = hyps;
                h1.emplace_back(a, u);
                h2.emplace_back(b, v);
                return Argument::infer(goal, {inj, build(goal, h1, depth - 1), build(goal, h2, depth - 1)}, {u, v});
            }
            default: break;
        }
        switch (goal.kind()) {
            case ipl::Connective::And:
                return Argument::infer(goal, {build(goal.left(), hyps, depth - 1), build(goal.right(), hyps, depth - 1)});
            case ipl::Connective::Or: {
                bool first = pick(rng_, 2) == 0;
                return Argument::infer(goal, {build(first ? goal.left() : goal.right(), hyps, depth - 1)});
            }
            case ipl::Connective::Imp: {
                unsigned u = ++next_label_;
                auto inner = hyps;
                inner.emplace_back(goal.left(), u);
                return Argument::infer(goal, {build(goal.right(), inner, depth - 1)}, {u});
            }
            default:
                if (pick(rng_, 3) == 0) return Argument::infer(goal, {build(Formula::bot(), hyps, depth - 1)});
                return leaf(goal, hyps);
        }
    }

    Rng rng_;
    unsigned next_label_ = 0;
    int budget_ = 0;
};

}  // namespace gen
