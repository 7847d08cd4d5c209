#include "ipl/nj.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ipl/sexpr.hpp"

namespace ipl::nj {

Argument Argument::assume(Formula f, unsigned label) {
    Argument a;
    a.kind = Kind::Assume;
    a.formula = std::move(f);
    a.label = label;
    return a;
}

Argument Argument::infer(Formula f, std::vector<Argument> children, std::vector<unsigned> discharges) {
    Argument a;
    a.kind = Kind::Infer;
    a.formula = std::move(f);
    a.children = std::move(children);
    a.discharges = std::move(discharges);
    return a;
}

std::size_t Argument::size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
}

const Argument& Argument::at(const Path& path) const {
    const Argument* node = this;
    for (auto i : path) {
        if (i >= node->children.size()) throw std::out_of_range("no node at path");
        node = &node->children[i];
    }
    return *node;
}

std::string_view rule_name(NjRule r) {
    switch (r) {
        case NjRule::Assumption: return "assumption";
        case NjRule::AndI: return "andI";
        case NjRule::AndE1: return "andE1";
        case NjRule::AndE2: return "andE2";
        case NjRule::OrI1: return "orI1";
        case NjRule::OrI2: return "orI2";
        case NjRule::OrE: return "orE";
        case NjRule::ImpI: return "impI";
        case NjRule::ImpE: return "impE";
        case NjRule::BotE: return "botE";
        case NjRule::BaseRule: return "base";
    }
    return "?";
}

bool is_introduction(NjRule r) {
    return r == NjRule::AndI || r == NjRule::OrI1 || r == NjRule::OrI2 || r == NjRule::ImpI;
}

namespace {

/// Leaves under `a` whose label is in `labels` and not rebound on the way down.
void bound_leaves(const Argument& a, std::set<unsigned> labels, std::vector<const Argument*>& out) {
    if (labels.empty()) return;
    if (a.is_assumption()) {
        if (a.label && labels.count(a.label)) out.push_back(&a);
        return;
    }
    for (auto l : a.discharges) labels.erase(l);
    for (const auto& c : a.children) bound_leaves(c, labels, out);
}

std::vector<const Argument*> bound_in(const Argument& binder, std::size_t child) {
    std::vector<const Argument*> out;
    bound_leaves(binder.children[child], {binder.discharges.begin(), binder.discharges.end()}, out);
    return out;
}

void require_bound(const Argument& a, std::vector<unsigned>& scope) {
    if (a.is_assumption()) {
        if (a.label && std::find(scope.begin(), scope.end(), a.label) == scope.end())
            throw UnboundDischarge("assumption " + render(a.formula) + " carries label " + std::to_string(a.label) +
                                   " with no discharging ancestor");
        return;
    }
    auto mark = scope.size();
    scope.insert(scope.end(), a.discharges.begin(), a.discharges.end());
    for (const auto& c : a.children) require_bound(c, scope);
    scope.resize(mark);
}

bool all_bound_are(const Argument& binder, std::size_t child, const Formula& f) {
    for (const Argument* leaf : bound_in(binder, child))
        if (leaf->formula != f) return false;
    return true;
}

std::optional<std::size_t> base_match(const Argument& a, const Base& base) {
    if (!a.formula.is_atom() || !a.discharges.empty()) return std::nullopt;
    for (const auto& c : a.children)
        if (!c.formula.is_atom()) return std::nullopt;
    const auto& rules = base.rules();
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const auto& r = rules[i];
        if (r.conclusion != a.formula.name() || r.premises.size() != a.children.size()) continue;
        bool ok = true;
        for (std::size_t k = 0; k < r.premises.size() && ok; ++k) ok = r.premises[k] == a.children[k].formula.name();
        if (ok) return i;
    }
    return std::nullopt;
}

/// Shape test for one rule; `discharge` also checks the formulas of bound leaves.
bool fits(NjRule r, const Argument& a, bool discharge) {
    const auto& f = a.formula;
    const auto& cs = a.children;
    auto child = [&](std::size_t i) -> const Formula& { return cs[i].formula; };
    bool binds = !a.discharges.empty();
    switch (r) {
        case NjRule::AndI:
            return !binds && f.kind() == Connective::And && cs.size() == 2 && child(0) == f.left() &&
                   child(1) == f.right();
        case NjRule::OrI1:
        case NjRule::OrI2:
            return !binds && f.kind() == Connective::Or && cs.size() == 1 &&
                   child(0) == (r == NjRule::OrI1 ? f.left() : f.right());
        case NjRule::ImpI:
            return f.kind() == Connective::Imp && cs.size() == 1 && child(0) == f.right() &&
                   (!discharge || all_bound_are(a, 0, f.left()));
        case NjRule::AndE1:
        case NjRule::AndE2:
            return !binds && cs.size() == 1 && child(0).kind() == Connective::And &&
                   (r == NjRule::AndE1 ? child(0).left() : child(0).right()) == f;
        case NjRule::ImpE:
            return !binds && cs.size() == 2 && child(1).kind() == Connective::Imp && child(1).left() == child(0) &&
                   child(1).right() == f;
        case NjRule::OrE:
            return cs.size() == 3 && child(0).kind() == Connective::Or && child(1) == f && child(2) == f &&
                   (!discharge || (bound_in(a, 0).empty() && all_bound_are(a, 1, child(0).left()) &&
                                   all_bound_are(a, 2, child(0).right())));
        case NjRule::BotE:
            return !binds && cs.size() == 1 && child(0).is_bot();
        default:
            return false;
    }
}

constexpr NjRule kPriority[] = {NjRule::AndI,  NjRule::OrI1,  NjRule::OrI2, NjRule::ImpI, NjRule::AndE1,
                                NjRule::AndE2, NjRule::ImpE,  NjRule::OrE,  NjRule::BotE};

std::optional<Justification> justify(const Argument& a, const Base& base, bool discharge) {
    if (a.is_assumption()) return Justification{NjRule::Assumption, 0};
    for (auto r : kPriority)
        if (fits(r, a, discharge)) return Justification{r, 0};
    if (auto i = base_match(a, base)) return Justification{NjRule::BaseRule, *i};
    return std::nullopt;
}

bool check_node(const Argument& a, const Base& base, Path& path, NjVerdict& v) {
    auto j = justify(a, base, true);
    if (!j) {
        v.failing_path = path;
        v.reason = "no rule licenses " + render(a.formula);
        if (!a.children.empty()) {
            v.reason += " from";
            for (const auto& c : a.children) v.reason += " [" + render(c.formula) + "]";
        }
        return false;
    }
    v.justifications.push_back(*j);
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        path.push_back(i);
        bool ok = check_node(a.children[i], base, path, v);
        path.pop_back();
        if (!ok) return false;
    }
    return true;
}

void collect_open(const Argument& a, std::vector<unsigned>& scope, std::vector<Formula>& out) {
    if (a.is_assumption()) {
        if (!a.label || std::find(scope.begin(), scope.end(), a.label) == scope.end()) out.push_back(a.formula);
        return;
    }
    auto mark = scope.size();
    scope.insert(scope.end(), a.discharges.begin(), a.discharges.end());
    for (const auto& c : a.children) collect_open(c, scope, out);
    scope.resize(mark);
}

std::optional<Connective> detour_at(const Argument& a) {
    if (a.is_assumption()) return std::nullopt;
    auto r = classify(a);
    if (!r) return std::nullopt;
    auto child_rule = [&](std::size_t i) { return classify(a.children[i]); };
    switch (*r) {
        case NjRule::AndE1:
        case NjRule::AndE2:
            if (child_rule(0) == NjRule::AndI) return Connective::And;
            break;
        case NjRule::ImpE:
            if (child_rule(1) == NjRule::ImpI) return Connective::Imp;
            break;
        case NjRule::OrE: {
            auto c = child_rule(0);
            if (c == NjRule::OrI1 || c == NjRule::OrI2) return Connective::Or;
            break;
        }
        default: break;
    }
    return std::nullopt;
}

void detours_pre(const Argument& a, Path& path, std::vector<Detour>& out) {
    if (auto c = detour_at(a)) out.push_back(Detour{path, *c});
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        path.push_back(i);
        detours_pre(a.children[i], path, out);
        path.pop_back();
    }
}

std::optional<Detour> first_post(const Argument& a, Path& path) {
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        path.push_back(i);
        auto d = first_post(a.children[i], path);
        path.pop_back();
        if (d) return d;
    }
    if (auto c = detour_at(a)) return Detour{path, *c};
    return std::nullopt;
}

/// Replaces leaves bound to labels in `labels` (not rebound below) by `with`.
Argument graft(const Argument& a, std::set<unsigned> labels, const Argument& with) {
    if (a.is_assumption()) return a.label && labels.count(a.label) ? with : a;
    Argument out = a;
    for (auto l : a.discharges) labels.erase(l);
    if (labels.empty()) return out;
    for (auto& c : out.children) c = graft(c, labels, with);
    return out;
}

Argument contract(const Argument& node, Connective k) {
    switch (k) {
        case Connective::And: {
            bool first = classify(node) == NjRule::AndE1;
            return node.children[0].children[first ? 0 : 1];
        }
        case Connective::Imp: {
            const Argument& minor = node.children[0];
            const Argument& intro = node.children[1];
            return graft(intro.children[0], {intro.discharges.begin(), intro.discharges.end()}, minor);
        }
        case Connective::Or: {
            const Argument& inj = node.children[0];
            std::size_t branch = classify(inj) == NjRule::OrI1 ? 1 : 2;
            return graft(node.children[branch], {node.discharges.begin(), node.discharges.end()}, inj.children[0]);
        }
        default: throw NotADetour("no detour of this connective");
    }
}

Argument replace_at(const Argument& a, const Path& path, std::size_t depth, const Argument& with) {
    if (depth == path.size()) return with;
    Argument out = a;
    out.children[path[depth]] = replace_at(a.children[path[depth]], path, depth + 1, with);
    return out;
}

void renumber(Argument& a, std::map<unsigned, unsigned> scope, unsigned& next) {
    if (a.is_assumption()) {
        if (a.label) {
            auto it = scope.find(a.label);
            if (it == scope.end())
                throw UnboundDischarge("assumption " + render(a.formula) + " carries label " +
                                       std::to_string(a.label) + " with no discharging ancestor");
            a.label = it->second;
        }
        return;
    }
    for (auto& l : a.discharges) {
        unsigned fresh = ++next;
        scope[l] = fresh;
        l = fresh;
    }
    for (auto& c : a.children) renumber(c, scope, next);
}

void write(std::string& out, const Argument& a) {
    if (a.is_assumption()) {
        out += "(assume " + sexpr::quote(render(a.formula));
        if (a.label) out += " " + std::to_string(a.label);
        out += ")";
        return;
    }
    out += "(node " + sexpr::quote(render(a.formula));
    for (auto l : a.discharges) out += " " + std::to_string(l);
    for (const auto& c : a.children) {
        out += " ";
        write(out, c);
    }
    out += ")";
}

unsigned parse_label(const sexpr::Node& n) {
    const auto& t = n.text;
    if (t.empty() || t.size() > 9 || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw sexpr::SyntaxError(n.offset, "expected a label, found '" + t + "'");
    unsigned v = static_cast<unsigned>(std::stoul(t));
    if (v == 0) throw sexpr::SyntaxError(n.offset, "labels are positive");
    return v;
}

Argument from_node(const sexpr::Node& n) {
    if (!n.is_list() || n.items.size() < 2 || !n.items[0].is_symbol() || !n.items[1].is_string())
        throw sexpr::SyntaxError(n.offset, "expected (node \"formula\" ...) or (assume \"formula\" ...)");
    Formula f = parse_formula(n.items[1].text);
    if (n.items[0].text == "assume") {
        if (n.items.size() > 3) throw sexpr::SyntaxError(n.offset, "assume takes at most one label");
        unsigned label = 0;
        if (n.items.size() == 3) {
            if (!n.items[2].is_symbol()) throw sexpr::SyntaxError(n.items[2].offset, "expected a label");
            label = parse_label(n.items[2]);
        }
        return Argument::assume(f, label);
    }
    if (n.items[0].text != "node") throw sexpr::SyntaxError(n.items[0].offset, "unknown form '" + n.items[0].text + "'");
    std::vector<unsigned> labels;
    std::vector<Argument> children;
    for (std::size_t i = 2; i < n.items.size(); ++i) {
        const auto& item = n.items[i];
        if (item.is_symbol()) {
            if (!children.empty()) throw sexpr::SyntaxError(item.offset, "labels must precede children");
            labels.push_back(parse_label(item));
        } else {
            children.push_back(from_node(item));
        }
    }
    return Argument::infer(f, std::move(children), std::move(labels));
}

}  // namespace

std::optional<NjRule> classify(const Argument& node, const Base& base) {
    auto j = justify(node, base, false);
    if (!j) return std::nullopt;
    return j->rule;
}

NjVerdict check_derivation(const Argument& a, const Base& base) {
    std::vector<unsigned> scope;
    require_bound(a, scope);
    NjVerdict v;
    Path path;
    v.accepted = check_node(a, base, path, v);
    if (!v.accepted) v.justifications.clear();
    return v;
}

Sequent ergo(const Argument& a) {
    Sequent s;
    std::vector<unsigned> scope;
    collect_open(a, scope, s.context);
    s.succedent = a.formula;
    return s;
}

bool argues_for(const Sequent& argued, const Sequent& goal) {
    auto norm = [](const std::optional<Formula>& f) { return f ? *f : Formula::bot(); };
    return norm(argued.succedent) == norm(goal.succedent) && context_subset(argued.context, goal.context);
}

std::vector<Detour> find_detours(const Argument& a) {
    std::vector<Detour> out;
    Path path;
    detours_pre(a, path, out);
    return out;
}

bool is_canonical(const Argument& a) { return find_detours(a).empty(); }

Argument reduce_step(const Argument& a, const Detour& d) {
    const Argument* node;
    try {
        node = &a.at(d.position);
    } catch (const std::out_of_range&) {
        throw NotADetour("no node at the detour position");
    }
    if (detour_at(*node) != d.connective) throw NotADetour("no detour at the given position");
    Argument fresh = relabel(a);
    Argument result = replace_at(fresh, d.position, 0, contract(fresh.at(d.position), d.connective));
    return relabel(result);
}

Argument normalize(const Argument& a, const NormalizeOptions& options, std::size_t* steps) {
    Argument cur = relabel(a);
    std::size_t n = 0;
    for (;;) {
        std::optional<Detour> d;
        if (options.strategy == Strategy::Innermost) {
            Path path;
            d = first_post(cur, path);
        } else {
            auto all = find_detours(cur);
            if (!all.empty()) d = all.front();
        }
        if (!d) break;
        if (n >= options.fuel) throw FuelExhausted("normalization exceeded " + std::to_string(options.fuel) + " steps");
        cur = reduce_step(cur, *d);
        ++n;
    }
    if (steps) *steps = n;
    return cur;
}

Argument relabel(const Argument& a) {
    Argument out = a;
    unsigned next = 0;
    renumber(out, {}, next);
    return out;
}

unsigned max_label(const Argument& a) {
    unsigned m = a.label;
    for (auto l : a.discharges) m = std::max(m, l);
    for (const auto& c : a.children) m = std::max(m, max_label(c));
    return m;
}

std::string to_sexpr(const Argument& a) {
    std::string out;
    write(out, a);
    return out;
}

Argument parse_argument(std::string_view text) {
    Argument a = from_node(sexpr::read_one(text));
    std::vector<unsigned> scope;
    require_bound(a, scope);
    return a;
}

}  // namespace ipl::nj
