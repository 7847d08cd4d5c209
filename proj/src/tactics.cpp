#include "ipl/tactics.hpp"

#include <algorithm>
#include <numeric>

#include "ipl/sexpr.hpp"

namespace ipl::tactics {

using lj::LjProof;
using lj::RuleInstance;
using lj::RuleName;

Event Event::of(LjProof proof) {
    Sequent s = proof.conclusion();
    return Event{std::move(s), std::move(proof)};
}

bool achieves(const Event& e, const Goal& g) {
    if (e.sequent.succedent != g.succedent) return false;
    if (!context_subset(e.sequent.context, g.context)) return false;
    if (e.certificate.conclusion() != e.sequent) return false;
    return lj::check_proof(e.certificate.tree()).accepted;
}

// ---------------------------------------------------------------------------
// Procedures

Procedure Procedure::identity() { return Procedure{}; }

Procedure Procedure::of_rule(Goal goal, RuleInstance instance) {
    Procedure p;
    p.kind = Kind::Rule;
    p.goal = std::move(goal);
    p.instance = std::move(instance);
    return p;
}

Procedure Procedure::compose(Procedure outer, std::vector<Procedure> inner) {
    if (inner.size() != outer.arity())
        throw ProcedureMismatch("composition needs " + std::to_string(outer.arity()) + " inner procedures, got " +
                                std::to_string(inner.size()));
    bool all_identity = std::all_of(inner.begin(), inner.end(), [](const Procedure& p) { return p.kind == Kind::Identity; });
    if (all_identity) return outer;
    if (outer.kind == Kind::Identity) return std::move(inner.front());
    Procedure p;
    p.kind = Kind::Composite;
    p.outer = std::make_shared<const Procedure>(std::move(outer));
    p.inner = std::move(inner);
    return p;
}

std::size_t Procedure::arity() const {
    switch (kind) {
        case Kind::Identity: return 1;
        case Kind::Rule: return instance.premises.size();
        case Kind::Composite: {
            std::size_t n = 0;
            for (const auto& p : inner) n += p.arity();
            return n;
        }
    }
    return 0;
}

std::string Procedure::describe() const {
    switch (kind) {
        case Kind::Identity: return "id";
        case Kind::Rule: return lj::instance_id(instance);
        case Kind::Composite: {
            std::string out = outer->describe() + " . (";
            for (std::size_t i = 0; i < inner.size(); ++i) {
                if (i) out += " * ";
                out += inner[i].describe();
            }
            return out + ")";
        }
    }
    return "?";
}

namespace {

std::vector<Formula> dedup(const std::vector<Formula>& xs) {
    std::vector<Formula> out;
    for (const auto& x : xs)
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    return out;
}

std::vector<Formula> without(std::vector<Formula> xs, const Formula& f) {
    xs.erase(std::remove(xs.begin(), xs.end(), f), xs.end());
    return xs;
}

std::vector<Formula> cons(const Formula& f, const std::vector<Formula>& xs) {
    std::vector<Formula> out{f};
    out.insert(out.end(), xs.begin(), xs.end());
    return out;
}

std::vector<Formula> concat(std::vector<Formula> a, const std::vector<Formula>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

LjProof reorder(const LjProof& p, std::vector<Formula> order) {
    if (order == p.conclusion().context) return p;
    return LjProof::infer(RuleName::e, Sequent{std::move(order), p.conclusion().succedent}, {p});
}

/// Rebuilds `p` over exactly `target` (as a multiset, in that order) by contraction,
/// weakening and exchange. Needs every formula of p's context to occur in `target`.
LjProof fit(LjProof p, const std::vector<Formula>& target) {
    for (;;) {
        const auto& ctx = p.conclusion().context;
        std::optional<Formula> dup;
        for (std::size_t i = 0; i < ctx.size() && !dup; ++i)
            if (std::count(ctx.begin(), ctx.end(), ctx[i]) > 1) dup = ctx[i];
        if (!dup) break;
        std::vector<Formula> order{*dup, *dup};
        int skip = 2;
        for (const auto& f : ctx) {
            if (f == *dup && skip > 0) {
                --skip;
                continue;
            }
            order.push_back(f);
        }
        p = reorder(p, order);
        order.erase(order.begin());
        p = LjProof::infer(RuleName::cL, Sequent{order, p.conclusion().succedent}, {p});
    }
    std::vector<Formula> have = p.conclusion().context;
    for (const auto& f : have)
        if (std::find(target.begin(), target.end(), f) == target.end())
            throw ProcedureMismatch("event context formula " + render(f) + " is not available");
    std::vector<Formula> missing = target;
    for (const auto& f : have) missing.erase(std::find(missing.begin(), missing.end(), f));
    for (const auto& f : missing)
        p = LjProof::infer(RuleName::wL, Sequent{cons(f, p.conclusion().context), p.conclusion().succedent}, {p});
    return reorder(p, target);
}

LjProof forward(const Procedure& proc, const std::vector<Event>& events) {
    const RuleInstance& inst = proc.instance;
    Sequent head = lj::head_form(proc.goal, inst);
    const auto& succ = head.succedent;
    auto ctx_of = [&](std::size_t i) { return events[i].sequent.context; };
    auto cert = [&](std::size_t i) { return events[i].certificate; };
    auto main_formula = [&]() -> const Formula& {
        if (head.context.empty()) throw ProcedureMismatch("rule needs a principal formula");
        return head.context.front();
    };
    switch (inst.rule) {
        case RuleName::ax:
        case RuleName::botL:
            return lj::apply_instance(proc.goal, inst, {});
        case RuleName::wL: {
            Sequent c{cons(main_formula(), ctx_of(0)), events[0].sequent.succedent};
            return LjProof::infer(RuleName::wL, c, {cert(0)});
        }
        case RuleName::wR:
            return LjProof::infer(RuleName::wR, Sequent{ctx_of(0), succ}, {cert(0)});
        case RuleName::cL:
            return fit(cert(0), dedup(ctx_of(0)));
        case RuleName::e:
            return cert(0);
        case RuleName::andR: {
            auto delta = dedup(concat(ctx_of(0), ctx_of(1)));
            return LjProof::infer(RuleName::andR, Sequent{delta, succ}, {fit(cert(0), delta), fit(cert(1), delta)});
        }
        case RuleName::orR1:
        case RuleName::orR2:
            return LjProof::infer(inst.rule, Sequent{ctx_of(0), succ}, {cert(0)});
        case RuleName::impR:
        case RuleName::negR: {
            const Formula& a = succ->left();
            auto rest = without(dedup(ctx_of(0)), a);
            return LjProof::infer(inst.rule, Sequent{rest, succ}, {fit(cert(0), cons(a, rest))});
        }
        case RuleName::andL1:
        case RuleName::andL2: {
            const Formula& m = main_formula();
            const Formula& part = inst.rule == RuleName::andL1 ? m.left() : m.right();
            auto rest = without(dedup(ctx_of(0)), part);
            return LjProof::infer(inst.rule, Sequent{cons(m, rest), succ}, {fit(cert(0), cons(part, rest))});
        }
        case RuleName::orL: {
            const Formula& m = main_formula();
            auto rest = dedup(concat(without(ctx_of(0), m.left()), without(ctx_of(1), m.right())));
            return LjProof::infer(RuleName::orL, Sequent{cons(m, rest), succ},
                                  {fit(cert(0), cons(m.left(), rest)), fit(cert(1), cons(m.right(), rest))});
        }
        case RuleName::impL: {
            const Formula& m = main_formula();
            auto g1 = dedup(ctx_of(0));
            auto g2 = without(dedup(ctx_of(1)), m.right());
            auto node = LjProof::infer(RuleName::impL, Sequent{cons(m, concat(g1, g2)), succ},
                                       {fit(cert(0), g1), fit(cert(1), cons(m.right(), g2))});
            return fit(node, dedup(node.conclusion().context));
        }
        case RuleName::negL: {
            const Formula& m = main_formula();
            auto g = dedup(ctx_of(0));
            return LjProof::infer(RuleName::negL, Sequent{cons(m, g), std::nullopt}, {fit(cert(0), g)});
        }
        case RuleName::cut: {
            const Formula& a = *inst.premises[0].succedent;
            auto rest = without(dedup(ctx_of(1)), a);
            return lj::cut(cert(0), fit(cert(1), cons(a, rest)), a);
        }
    }
    throw ProcedureMismatch("unsupported rule");
}

Event run_rule(const Procedure& p, const std::vector<Event>& events) {
    const auto& inst = p.instance;
    if (events.size() != inst.premises.size())
        throw ProcedureMismatch(std::string(lj::rule_name(inst.rule)) + " expects " +
                                std::to_string(inst.premises.size()) + " events, got " + std::to_string(events.size()));
    bool exact = true;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& e = events[i];
        if (e.certificate.conclusion() != e.sequent) throw ProcedureMismatch("event certificate does not match its sequent");
        if (e.sequent.succedent != inst.premises[i].succedent)
            throw ProcedureMismatch("event " + render(e.sequent) + " does not have the succedent of " +
                                    render(inst.premises[i]));
        exact = exact && e.sequent == inst.premises[i];
    }
    std::vector<LjProof> certs;
    for (const auto& e : events) certs.push_back(e.certificate);
    try {
        if (exact) return Event::of(lj::apply_instance(p.goal, inst, std::move(certs)));
        return Event::of(forward(p, events));
    } catch (const lj::KernelError& e) {
        throw ProcedureMismatch(e.what());
    } catch (const lj::CutMismatch& e) {
        throw ProcedureMismatch(e.what());
    }
}

}  // namespace

Event run_procedure(const Procedure& p, const std::vector<Event>& events) {
    switch (p.kind) {
        case Procedure::Kind::Identity:
            if (events.size() != 1)
                throw ProcedureMismatch("identity expects 1 event, got " + std::to_string(events.size()));
            return events.front();
        case Procedure::Kind::Rule:
            return run_rule(p, events);
        case Procedure::Kind::Composite: {
            if (events.size() != p.arity())
                throw ProcedureMismatch("procedure expects " + std::to_string(p.arity()) + " events, got " +
                                        std::to_string(events.size()));
            std::vector<Event> mid;
            std::size_t at = 0;
            for (const auto& q : p.inner) {
                std::vector<Event> part(events.begin() + at, events.begin() + at + q.arity());
                at += q.arity();
                mid.push_back(run_procedure(q, part));
            }
            return run_procedure(*p.outer, mid);
        }
    }
    throw ProcedureMismatch("unknown procedure");
}

}  // namespace ipl::tactics
