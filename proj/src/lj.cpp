#include "ipl/lj.hpp"

#include <algorithm>
#include <unordered_map>
#include <array>
#include <numeric>
#include <set>
#include <sstream>

#include "ipl/sexpr.hpp"

namespace ipl::lj {

namespace {

struct RuleInfo {
    RuleName rule;
    std::string_view name;
    std::size_t premises;
};

constexpr std::array<RuleInfo, 17> kRules{{
    {RuleName::wL, "wL", 1},     {RuleName::wR, "wR", 1},     {RuleName::cL, "cL", 1},
    {RuleName::e, "e", 1},       {RuleName::andR, "andR", 2}, {RuleName::andL1, "andL1", 1},
    {RuleName::andL2, "andL2", 1}, {RuleName::negR, "negR", 1}, {RuleName::negL, "negL", 1},
    {RuleName::orL, "orL", 2},   {RuleName::orR1, "orR1", 1}, {RuleName::orR2, "orR2", 1},
    {RuleName::impR, "impR", 1}, {RuleName::impL, "impL", 2}, {RuleName::ax, "ax", 0},
    {RuleName::botL, "botL", 0}, {RuleName::cut, "cut", 2},
}};

const RuleInfo& info(RuleName r) {
    for (const auto& i : kRules)
        if (i.rule == r) return i;
    throw std::logic_error("unknown rule");
}

std::vector<Formula> tail(const std::vector<Formula>& ctx) {
    return {ctx.begin() + 1, ctx.end()};
}

std::vector<Formula> cons(const Formula& head, const std::vector<Formula>& rest) {
    std::vector<Formula> out;
    out.reserve(rest.size() + 1);
    out.push_back(head);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

bool is(const std::optional<Formula>& f, Connective k) { return f && f->kind() == k; }

}  // namespace

std::string_view rule_name(RuleName r) { return info(r).name; }

std::optional<RuleName> parse_rule_name(std::string_view s) {
    for (const auto& i : kRules)
        if (i.name == s) return i.rule;
    return std::nullopt;
}

std::vector<RuleName> all_rules() {
    std::vector<RuleName> out;
    for (const auto& i : kRules) out.push_back(i.rule);
    return out;
}

std::size_t premise_count(RuleName r) { return info(r).premises; }

bool is_admissible_extension(RuleName r) { return r == RuleName::cut; }

bool check_rule(RuleName rule, const Sequent& c, const std::vector<Sequent>& ps) {
    if (ps.size() != premise_count(rule)) return false;
    const auto& ctx = c.context;
    switch (rule) {
        case RuleName::ax:
            return ctx.size() == 1 && c.succedent && ctx[0] == *c.succedent;
        case RuleName::botL:
            return ctx.size() == 1 && ctx[0].is_bot() && !c.succedent;
        case RuleName::wL:
            return !ctx.empty() && ps[0].context == tail(ctx) && ps[0].succedent == c.succedent;
        case RuleName::wR:
            return c.succedent && ps[0].context == ctx && !ps[0].succedent;
        case RuleName::cL:
            return !ctx.empty() && ps[0].context == cons(ctx[0], ctx) && ps[0].succedent == c.succedent;
        case RuleName::e:
            return is_permutation(ctx, ps[0].context) && ps[0].succedent == c.succedent;
        case RuleName::andR:
            return is(c.succedent, Connective::And) &&
                   ps[0] == Sequent{ctx, c.succedent->left()} && ps[1] == Sequent{ctx, c.succedent->right()};
        case RuleName::andL1:
        case RuleName::andL2: {
            if (ctx.empty() || ctx[0].kind() != Connective::And) return false;
            const Formula& part = rule == RuleName::andL1 ? ctx[0].left() : ctx[0].right();
            return ps[0] == Sequent{cons(part, tail(ctx)), c.succedent};
        }
        case RuleName::negR:
            return c.succedent && c.succedent->is_negation() &&
                   ps[0] == Sequent{cons(c.succedent->left(), ctx), std::nullopt};
        case RuleName::negL:
            return !ctx.empty() && ctx[0].is_negation() && !c.succedent &&
                   ps[0] == Sequent{tail(ctx), ctx[0].left()};
        case RuleName::orL:
            return !ctx.empty() && ctx[0].kind() == Connective::Or &&
                   ps[0] == Sequent{cons(ctx[0].left(), tail(ctx)), c.succedent} &&
                   ps[1] == Sequent{cons(ctx[0].right(), tail(ctx)), c.succedent};
        case RuleName::orR1:
        case RuleName::orR2: {
            if (!is(c.succedent, Connective::Or)) return false;
            const Formula& part = rule == RuleName::orR1 ? c.succedent->left() : c.succedent->right();
            return ps[0] == Sequent{ctx, part};
        }
        case RuleName::impR:
            return is(c.succedent, Connective::Imp) &&
                   ps[0] == Sequent{cons(c.succedent->left(), ctx), c.succedent->right()};
        case RuleName::impL: {
            if (ctx.empty() || ctx[0].kind() != Connective::Imp) return false;
            const auto& g1 = ps[0].context;
            if (ps[0].succedent != ctx[0].left()) return false;
            if (ps[1].succedent != c.succedent) return false;
            const auto& p2 = ps[1].context;
            if (p2.empty() || p2[0] != ctx[0].right()) return false;
            if (g1.size() + p2.size() - 1 != ctx.size() - 1) return false;
            return std::equal(g1.begin(), g1.end(), ctx.begin() + 1) &&
                   std::equal(p2.begin() + 1, p2.end(), ctx.begin() + 1 + g1.size());
        }
        case RuleName::cut: {
            if (!ps[0].succedent) return false;
            const auto& delta = ps[0].context;
            const auto& p2 = ps[1].context;
            if (p2.empty() || p2[0] != *ps[0].succedent) return false;
            if (ps[1].succedent != c.succedent) return false;
            if (delta.size() + p2.size() - 1 != ctx.size()) return false;
            return std::equal(delta.begin(), delta.end(), ctx.begin()) &&
                   std::equal(p2.begin() + 1, p2.end(), ctx.begin() + delta.size());
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Checked proofs

struct LjProof::Node {
    RuleName rule;
    Sequent conclusion;
    std::vector<LjProof> premises;
    bool uses_cut;
    std::size_t size;
    std::size_t height;
};

LjProof LjProof::infer(RuleName rule, Sequent conclusion, std::vector<LjProof> premises) {
    std::vector<Sequent> ps;
    ps.reserve(premises.size());
    for (const auto& p : premises) ps.push_back(p.conclusion());
    if (!check_rule(rule, conclusion, ps)) {
        std::ostringstream os;
        os << "not an instance of " << rule_name(rule) << ": " << render(conclusion);
        for (const auto& p : ps) os << " <= " << render(p);
        throw KernelError(os.str());
    }
    bool cut_used = rule == RuleName::cut;
    std::size_t size = 1, height = 0;
    for (const auto& p : premises) {
        cut_used = cut_used || p.uses_cut();
        size += p.size();
        height = std::max(height, p.height());
    }
    return LjProof(std::make_shared<const Node>(
        Node{rule, std::move(conclusion), std::move(premises), cut_used, size, height + 1}));
}

RuleName LjProof::rule() const { return node_->rule; }
const Sequent& LjProof::conclusion() const { return node_->conclusion; }
const std::vector<LjProof>& LjProof::premises() const { return node_->premises; }
bool LjProof::uses_cut() const { return node_->uses_cut; }
std::size_t LjProof::size() const { return node_->size; }
std::size_t LjProof::height() const { return node_->height; }

ProofTree LjProof::tree() const {
    ProofTree t{rule(), conclusion(), {}};
    for (const auto& p : premises()) t.premises.push_back(p.tree());
    return t;
}

namespace {

std::optional<LjProof> check_node(const ProofTree& t, std::vector<std::size_t>& path, LjVerdict& v) {
    std::vector<Sequent> ps;
    for (const auto& p : t.premises) ps.push_back(p.conclusion);
    if (!check_rule(t.rule, t.conclusion, ps)) {
        v.failing_path = path;
        v.reason = std::string("not an instance of ") + std::string(rule_name(t.rule)) + " at " +
                   render(t.conclusion);
        return std::nullopt;
    }
    std::vector<LjProof> premises;
    for (std::size_t i = 0; i < t.premises.size(); ++i) {
        path.push_back(i);
        auto sub = check_node(t.premises[i], path, v);
        path.pop_back();
        if (!sub) return std::nullopt;
        premises.push_back(std::move(*sub));
    }
    return LjProof::infer(t.rule, t.conclusion, std::move(premises));
}

}  // namespace

LjVerdict check_proof(const ProofTree& tree) {
    LjVerdict v;
    std::vector<std::size_t> path;
    v.proof = check_node(tree, path, v);
    v.accepted = v.proof.has_value();
    if (v.proof) v.uses_cut = v.proof->uses_cut();
    return v;
}

// ---------------------------------------------------------------------------
// Backward enumeration

Sequent head_form(const Sequent& goal, const RuleInstance& inst) {
    if (inst.permutation.empty()) return goal;
    Sequent out{{}, goal.succedent};
    for (auto i : inst.permutation) out.context.push_back(goal.context.at(i));
    return out;
}

bool instance_checks(const Sequent& goal, const RuleInstance& inst) {
    if (!inst.permutation.empty()) {
        std::vector<std::size_t> sorted = inst.permutation;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i)
            if (sorted[i] != i) return false;
        if (sorted.size() != goal.context.size()) return false;
    }
    Sequent head = head_form(goal, inst);
    if (!check_rule(inst.rule, head, inst.premises)) return false;
    return inst.permutation.empty() || check_rule(RuleName::e, goal, {head});
}

namespace {

bool identity(const std::vector<std::size_t>& perm) {
    for (std::size_t i = 0; i < perm.size(); ++i)
        if (perm[i] != i) return false;
    return true;
}

/// Moves index `i` to the front, keeping the rest in order.
std::vector<std::size_t> rotate_to_front(std::size_t n, std::size_t i) {
    std::vector<std::size_t> perm{i};
    for (std::size_t j = 0; j < n; ++j)
        if (j != i) perm.push_back(j);
    return perm;
}

class Enumerator {
public:
    Enumerator(const Sequent& goal, const EnumerationPolicy& policy) : goal_(goal), policy_(policy) {}

    std::vector<RuleInstance> run() {
        const auto& ctx = goal_.context;
        const auto& succ = goal_.succedent;
        std::size_t n = ctx.size();

        if (n == 1 && succ && ctx[0] == *succ) add(RuleName::ax, {}, {});
        if (n == 1 && ctx[0].is_bot() && !succ) add(RuleName::botL, {}, {});

        if (succ) {
            switch (succ->kind()) {
                case Connective::And:
                    add(RuleName::andR, {{ctx, succ->left()}, {ctx, succ->right()}}, {});
                    break;
                case Connective::Or:
                    add(RuleName::orR1, {{ctx, succ->left()}}, {});
                    add(RuleName::orR2, {{ctx, succ->right()}}, {});
                    break;
                case Connective::Imp:
                    add(RuleName::impR, {{cons(succ->left(), ctx), succ->right()}}, {});
                    if (succ->is_negation()) add(RuleName::negR, {{cons(succ->left(), ctx), std::nullopt}}, {});
                    break;
                default: break;
            }
        }

        for (std::size_t i = 0; i < n; ++i) {
            if (seen_before(i)) continue;
            const Formula& f = ctx[i];
            auto perm = rotate_to_front(n, i);
            auto rest = rest_of(perm);
            switch (f.kind()) {
                case Connective::And:
                    add(RuleName::andL1, {{cons(f.left(), rest), succ}}, perm);
                    add(RuleName::andL2, {{cons(f.right(), rest), succ}}, perm);
                    break;
                case Connective::Or:
                    add(RuleName::orL, {{cons(f.left(), rest), succ}, {cons(f.right(), rest), succ}}, perm);
                    break;
                case Connective::Imp:
                    implication_splits(i, f, succ);
                    if (f.is_negation() && !succ) add(RuleName::negL, {{rest, f.left()}}, perm);
                    break;
                default: break;
            }
        }

        structural();
        return std::move(out_);
    }

private:
    bool seen_before(std::size_t i) const {
        return std::find(goal_.context.begin(), goal_.context.begin() + i, goal_.context[i]) !=
               goal_.context.begin() + i;
    }

    std::vector<Formula> rest_of(const std::vector<std::size_t>& perm) const {
        std::vector<Formula> rest;
        for (std::size_t k = 1; k < perm.size(); ++k) rest.push_back(goal_.context[perm[k]]);
        return rest;
    }

    void implication_splits(std::size_t i, const Formula& f, const std::optional<Formula>& succ) {
        const auto& ctx = goal_.context;
        std::vector<std::size_t> others;
        for (std::size_t j = 0; j < ctx.size(); ++j)
            if (j != i) others.push_back(j);
        if (policy_.maximal_splits) {
            // Copies are shared between the premises; only single formulas are split.
            std::vector<std::size_t> half1, half2, singles;
            for (std::size_t k = 0; k < others.size(); ++k) {
                const Formula& g = ctx[others[k]];
                std::size_t seen = 0, total = 0;
                for (std::size_t j = 0; j < others.size(); ++j)
                    if (ctx[others[j]] == g) {
                        if (j < k) ++seen;
                        ++total;
                    }
                if (total == 1) singles.push_back(others[k]);
                else if (seen < (total + 1) / 2) half1.push_back(others[k]);
                else half2.push_back(others[k]);
            }
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << std::min<std::size_t>(singles.size(), 62)); ++mask) {
                std::vector<std::size_t> perm{i};
                std::vector<Formula> g1, g2;
                for (auto j : half1) {
                    perm.push_back(j);
                    g1.push_back(ctx[j]);
                }
                for (std::size_t k = 0; k < singles.size(); ++k)
                    if (mask >> k & 1) {
                        perm.push_back(singles[k]);
                        g1.push_back(ctx[singles[k]]);
                    }
                for (auto j : half2) {
                    perm.push_back(j);
                    g2.push_back(ctx[j]);
                }
                for (std::size_t k = 0; k < singles.size(); ++k)
                    if (!(mask >> k & 1)) {
                        perm.push_back(singles[k]);
                        g2.push_back(ctx[singles[k]]);
                    }
                add(RuleName::impL, {{g1, f.left()}, {cons(f.right(), g2), succ}}, perm);
            }
            return;
        }
        std::size_t m = others.size();
        std::vector<std::uint64_t> masks;
        if (m <= policy_.split_cap && m < 63) {
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) masks.push_back(mask);
        } else {
            masks = {0, ~std::uint64_t{0}};
        }
        for (auto mask : masks) {
            std::vector<std::size_t> perm{i};
            std::vector<Formula> g1, g2;
            for (std::size_t k = 0; k < m; ++k)
                if (mask >> k & 1) {
                    perm.push_back(others[k]);
                    g1.push_back(ctx[others[k]]);
                }
            for (std::size_t k = 0; k < m; ++k)
                if (!(mask >> k & 1)) {
                    perm.push_back(others[k]);
                    g2.push_back(ctx[others[k]]);
                }
            add(RuleName::impL, {{g1, f.left()}, {cons(f.right(), g2), succ}}, perm);
        }
    }

    // Weakening only where it makes progress toward ax/botL or a negation step;
    // contraction only up to the cap.
    void structural() {
        const auto& ctx = goal_.context;
        const auto& succ = goal_.succedent;
        std::size_t n = ctx.size();
        bool has_bot = std::any_of(ctx.begin(), ctx.end(), [](const Formula& f) { return f.is_bot(); });
        bool has_neg = std::any_of(ctx.begin(), ctx.end(), [](const Formula& f) { return f.is_negation(); });

        if (succ && (has_bot || has_neg)) add(RuleName::wR, {{ctx, std::nullopt}}, {});

        auto weaken_towards = [&](const Formula& keep) {
            if (n < 2) return;
            std::size_t drop = n;
            for (std::size_t j = 0; j < n && drop == n; ++j)
                if (ctx[j] != keep) drop = j;
            if (drop == n) drop = 0;  // all copies of `keep`: drop a duplicate
            auto perm = rotate_to_front(n, drop);
            add(RuleName::wL, {{rest_of(perm), succ}}, perm);
        };
        if (succ && std::find(ctx.begin(), ctx.end(), *succ) != ctx.end()) weaken_towards(*succ);
        if (has_bot && !succ) weaken_towards(Formula::bot());

        for (std::size_t i = 0; i < n; ++i) {
            if (seen_before(i)) continue;
            auto copies = static_cast<std::size_t>(std::count(ctx.begin(), ctx.end(), ctx[i]));
            if (copies >= policy_.contraction_cap) continue;
            auto perm = rotate_to_front(n, i);
            add(RuleName::cL, {{cons(ctx[i], cons(ctx[i], rest_of(perm))), succ}}, perm);
        }
    }

    void add(RuleName rule, std::vector<Sequent> premises, std::vector<std::size_t> perm) {
        if (identity(perm)) perm.clear();
        std::vector<Sequent> key;
        std::size_t h = static_cast<std::size_t>(rule);
        for (const auto& p : premises) {
            key.push_back(canonical(p));
            h = h * 1000003u ^ key.back().hash();
        }
        auto& bucket = seen_[h];
        for (const auto& [r, k] : bucket)
            if (r == rule && k == key) return;
        bucket.emplace_back(rule, std::move(key));
        out_.push_back(RuleInstance{rule, std::move(premises), std::move(perm)});
    }

    const Sequent& goal_;
    const EnumerationPolicy& policy_;
    std::vector<RuleInstance> out_;
    std::unordered_map<std::size_t, std::vector<std::pair<RuleName, std::vector<Sequent>>>> seen_;
};

}  // namespace

std::vector<RuleInstance> rule_instances(const Sequent& goal, const EnumerationPolicy& policy) {
    return Enumerator(goal, policy).run();
}

LjProof apply_instance(const Sequent& goal, const RuleInstance& inst, std::vector<LjProof> premises) {
    Sequent head = head_form(goal, inst);
    LjProof node = LjProof::infer(inst.rule, head, std::move(premises));
    if (inst.permutation.empty()) return node;
    return LjProof::infer(RuleName::e, goal, {std::move(node)});
}

std::string instance_id(const RuleInstance& inst) {
    std::string id(rule_name(inst.rule));
    if (!inst.permutation.empty()) {
        id += '@';
        for (std::size_t i = 0; i < inst.permutation.size(); ++i) {
            if (i) id += '.';
            id += std::to_string(inst.permutation[i]);
        }
    }
    return id;
}

std::optional<InstanceId> parse_instance_id(std::string_view id) {
    auto at = id.find('@');
    auto rule = parse_rule_name(id.substr(0, at));
    if (!rule) return std::nullopt;
    InstanceId out{*rule, {}};
    if (at == std::string_view::npos) return out;
    std::string_view rest = id.substr(at + 1);
    while (!rest.empty()) {
        auto dot = rest.find('.');
        auto part = rest.substr(0, dot);
        if (part.empty() || !std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; }))
            return std::nullopt;
        out.permutation.push_back(std::stoul(std::string(part)));
        if (dot == std::string_view::npos) break;
        rest = rest.substr(dot + 1);
        if (rest.empty()) return std::nullopt;
    }
    return out;
}

LjProof cut(const LjProof& left, const LjProof& right, const Formula& cut_formula) {
    const Sequent& l = left.conclusion();
    const Sequent& r = right.conclusion();
    if (l.succedent != cut_formula)
        throw CutMismatch("left premise does not conclude the cut formula " + render(cut_formula));
    if (r.context.empty() || r.context.front() != cut_formula)
        throw CutMismatch("right premise context does not start with the cut formula " + render(cut_formula));
    Sequent conclusion{l.context, r.succedent};
    conclusion.context.insert(conclusion.context.end(), r.context.begin() + 1, r.context.end());
    return LjProof::infer(RuleName::cut, std::move(conclusion), {left, right});
}

// ---------------------------------------------------------------------------
// Text format

namespace {

void write(std::string& out, const ProofTree& t) {
    out += '(';
    out += rule_name(t.rule);
    out += ' ';
    out += sexpr::quote(render(t.conclusion));
    for (const auto& p : t.premises) {
        out += ' ';
        write(out, p);
    }
    out += ')';
}

ProofTree from_node(const sexpr::Node& n) {
    if (!n.is_list() || n.items.size() < 2 || !n.items[0].is_symbol() || !n.items[1].is_string())
        throw sexpr::SyntaxError(n.offset, "expected (rule \"sequent\" child*)");
    auto rule = parse_rule_name(n.items[0].text);
    if (!rule) throw sexpr::SyntaxError(n.items[0].offset, "unknown rule '" + n.items[0].text + "'");
    ProofTree t{*rule, parse_sequent(n.items[1].text), {}};
    for (std::size_t i = 2; i < n.items.size(); ++i) t.premises.push_back(from_node(n.items[i]));
    return t;
}

}  // namespace

std::string to_sexpr(const ProofTree& tree) {
    std::string out;
    write(out, tree);
    return out;
}

std::string to_sexpr(const LjProof& proof) { return to_sexpr(proof.tree()); }

ProofTree parse_proof(std::string_view text) { return from_node(sexpr::read_one(text)); }

}  // namespace ipl::lj
