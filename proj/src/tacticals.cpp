#include <algorithm>
#include <cctype>

#include "ipl/tactics.hpp"

namespace ipl::tactics {

using lj::RuleInstance;
using lj::RuleName;

std::optional<TacticResult> apply_tactic(const Tactic& t, const Goal& g) { return t(g); }

namespace {

Trace graft(const Trace& t, const std::vector<Trace>& replacements, std::size_t& next) {
    if (!t.step) return replacements.at(next++);
    Trace out{t.goal, TraceStep{t.step->tactic, t.step->proc, {}}};
    for (const auto& c : t.step->children) out.step->children.push_back(graft(c, replacements, next));
    return out;
}

std::vector<Formula> rest_after(const std::vector<Formula>& ctx, std::size_t i) {
    std::vector<Formula> out;
    for (std::size_t j = 0; j < ctx.size(); ++j)
        if (j != i) out.push_back(ctx[j]);
    return out;
}

std::vector<Formula> cons(const Formula& f, std::vector<Formula> xs) {
    xs.insert(xs.begin(), f);
    return xs;
}

std::vector<std::size_t> to_front(std::size_t n, std::size_t i) {
    if (i == 0) return {};
    std::vector<std::size_t> perm{i};
    for (std::size_t j = 0; j < n; ++j)
        if (j != i) perm.push_back(j);
    return perm;
}

/// Leftmost context formula satisfying `pred`, with the rest of the context.
template <class Pred>
std::optional<std::pair<std::size_t, std::vector<Formula>>> leftmost(const Goal& g, Pred pred) {
    for (std::size_t i = 0; i < g.context.size(); ++i)
        if (pred(g.context[i])) return std::make_pair(i, rest_after(g.context, i));
    return std::nullopt;
}

using Pick = std::function<std::optional<RuleInstance>(const Goal&)>;

Pick right_rule(RuleName rule, Connective k, std::function<std::vector<Sequent>(const Goal&)> premises) {
    return [=](const Goal& g) -> std::optional<RuleInstance> {
        if (!g.succedent || g.succedent->kind() != k) return std::nullopt;
        return RuleInstance{rule, premises(g), {}};
    };
}

Pick left_rule(RuleName rule, std::function<bool(const Goal&, const Formula&)> pred,
               std::function<std::vector<Sequent>(const Goal&, const Formula&, const std::vector<Formula>&)> premises) {
    return [=](const Goal& g) -> std::optional<RuleInstance> {
        auto hit = leftmost(g, [&](const Formula& f) { return pred(g, f); });
        if (!hit) return std::nullopt;
        const Formula& m = g.context[hit->first];
        return RuleInstance{rule, premises(g, m, hit->second), to_front(g.context.size(), hit->first)};
    };
}

bool is(const Formula& f, Connective k) { return f.kind() == k; }

std::map<std::string, Tactic, std::less<>> build_primitives() {
    std::map<std::string, Tactic, std::less<>> out;
    auto add = [&](const std::string& name, RuleName rule, Pick pick) {
        out.emplace(name, rule_tactic(name, rule, std::move(pick)));
    };
    add("ax", RuleName::ax, [](const Goal& g) -> std::optional<RuleInstance> {
        if (g.context.size() != 1 || g.succedent != g.context[0]) return std::nullopt;
        return RuleInstance{RuleName::ax, {}, {}};
    });
    add("bot_l", RuleName::botL, [](const Goal& g) -> std::optional<RuleInstance> {
        if (g.context.size() != 1 || !g.context[0].is_bot() || g.succedent) return std::nullopt;
        return RuleInstance{RuleName::botL, {}, {}};
    });
    add("and_r", RuleName::andR, right_rule(RuleName::andR, Connective::And, [](const Goal& g) {
            return std::vector<Sequent>{{g.context, g.succedent->left()}, {g.context, g.succedent->right()}};
        }));
    add("or_r1", RuleName::orR1, right_rule(RuleName::orR1, Connective::Or, [](const Goal& g) {
            return std::vector<Sequent>{{g.context, g.succedent->left()}};
        }));
    add("or_r2", RuleName::orR2, right_rule(RuleName::orR2, Connective::Or, [](const Goal& g) {
            return std::vector<Sequent>{{g.context, g.succedent->right()}};
        }));
    add("imp_r", RuleName::impR, right_rule(RuleName::impR, Connective::Imp, [](const Goal& g) {
            return std::vector<Sequent>{{cons(g.succedent->left(), g.context), g.succedent->right()}};
        }));
    add("neg_r", RuleName::negR, [](const Goal& g) -> std::optional<RuleInstance> {
        if (!g.succedent || !g.succedent->is_negation()) return std::nullopt;
        return RuleInstance{RuleName::negR, {{cons(g.succedent->left(), g.context), std::nullopt}}, {}};
    });
    auto any_goal = [](Connective k) { return [k](const Goal&, const Formula& f) { return is(f, k); }; };
    add("and_l1", RuleName::andL1,
        left_rule(RuleName::andL1, any_goal(Connective::And), [](const Goal& g, const Formula& m, const auto& rest) {
            return std::vector<Sequent>{{cons(m.left(), rest), g.succedent}};
        }));
    add("and_l2", RuleName::andL2,
        left_rule(RuleName::andL2, any_goal(Connective::And), [](const Goal& g, const Formula& m, const auto& rest) {
            return std::vector<Sequent>{{cons(m.right(), rest), g.succedent}};
        }));
    add("or_l", RuleName::orL,
        left_rule(RuleName::orL, any_goal(Connective::Or), [](const Goal& g, const Formula& m, const auto& rest) {
            return std::vector<Sequent>{{cons(m.left(), rest), g.succedent}, {cons(m.right(), rest), g.succedent}};
        }));
    add("neg_l", RuleName::negL,
        left_rule(
            RuleName::negL, [](const Goal& g, const Formula& f) { return !g.succedent && f.is_negation(); },
            [](const Goal&, const Formula& m, const auto& rest) { return std::vector<Sequent>{{rest, m.left()}}; }));
    out.emplace("imp_l", imp_l());
    add("w_l", RuleName::wL, [](const Goal& g) -> std::optional<RuleInstance> {
        if (g.context.empty()) return std::nullopt;
        return RuleInstance{RuleName::wL, {{rest_after(g.context, 0), g.succedent}}, {}};
    });
    add("w_r", RuleName::wR, [](const Goal& g) -> std::optional<RuleInstance> {
        if (!g.succedent) return std::nullopt;
        return RuleInstance{RuleName::wR, {{g.context, std::nullopt}}, {}};
    });
    add("c_l", RuleName::cL, [](const Goal& g) -> std::optional<RuleInstance> {
        if (g.context.empty()) return std::nullopt;
        return RuleInstance{RuleName::cL, {{cons(g.context[0], g.context), g.succedent}}, {}};
    });
    out.emplace("id", id());
    out.emplace("fail", fail());
    return out;
}

const std::map<std::string, Tactic, std::less<>>& primitives() {
    static const auto table = build_primitives();
    return table;
}

}  // namespace

Tactic rule_tactic(std::string name, RuleName rule, std::function<std::optional<RuleInstance>(const Goal&)> pick) {
    Tactic t;
    t.name = name;
    t.fn = [name, rule, pick = std::move(pick)](const Goal& g) -> std::optional<TacticResult> {
        auto inst = pick(g);
        if (!inst || inst->rule != rule || !lj::instance_checks(g, *inst)) return std::nullopt;
        TacticResult r;
        r.subgoals = inst->premises;
        r.trace = Trace{g, TraceStep{name, lj::instance_id(*inst), {}}};
        for (const auto& s : inst->premises) r.trace.step->children.push_back(Trace::open(s));
        r.procedure = Procedure::of_rule(g, std::move(*inst));
        return r;
    };
    return t;
}

Tactic imp_l(std::optional<std::size_t> split) {
    return rule_tactic("imp_l", RuleName::impL, [split](const Goal& g) -> std::optional<RuleInstance> {
        auto hit = leftmost(g, [](const Formula& f) { return is(f, Connective::Imp); });
        if (!hit) return std::nullopt;
        const Formula& m = g.context[hit->first];
        const auto& rest = hit->second;
        std::size_t k = split.value_or(rest.size());
        if (k > rest.size()) return std::nullopt;
        std::vector<Formula> g1(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(k));
        std::vector<Formula> g2(rest.begin() + static_cast<std::ptrdiff_t>(k), rest.end());
        return RuleInstance{RuleName::impL, {{g1, m.left()}, {cons(m.right(), g2), g.succedent}},
                            to_front(g.context.size(), hit->first)};
    });
}

Tactic id() {
    return Tactic{"id", [](const Goal& g) -> std::optional<TacticResult> {
                      return TacticResult{{g}, Procedure::identity(), Trace::open(g)};
                  }};
}

Tactic fail() {
    return Tactic{"fail", [](const Goal&) -> std::optional<TacticResult> { return std::nullopt; }};
}

Tactic then(Tactic t1, Tactic t2) {
    std::string name = t1.name + "; " + t2.name;
    return Tactic{name, [t1 = std::move(t1), t2 = std::move(t2)](const Goal& g) -> std::optional<TacticResult> {
                      auto r1 = t1(g);
                      if (!r1) return std::nullopt;
                      if (r1->subgoals.empty()) return r1;
                      TacticResult out;
                      std::vector<Procedure> inner;
                      std::vector<Trace> traces;
                      bool fired = false;
                      for (const auto& sg : r1->subgoals) {
                          auto r2 = t2(sg);
                          if (!r2) r2 = TacticResult{{sg}, Procedure::identity(), Trace::open(sg)};
                          else fired = true;
                          out.subgoals.insert(out.subgoals.end(), r2->subgoals.begin(), r2->subgoals.end());
                          inner.push_back(std::move(r2->procedure));
                          traces.push_back(std::move(r2->trace));
                      }
                      if (!fired) return std::nullopt;
                      out.procedure = Procedure::compose(std::move(r1->procedure), std::move(inner));
                      std::size_t next = 0;
                      out.trace = graft(r1->trace, traces, next);
                      return out;
                  }};
}

Tactic then_on(std::size_t i, Tactic t1, Tactic t2) {
    std::string name = t1.name + "; " + std::to_string(i) + ":" + t2.name;
    return Tactic{name, [i, t1 = std::move(t1), t2 = std::move(t2)](const Goal& g) -> std::optional<TacticResult> {
                      auto r1 = t1(g);
                      if (!r1 || i >= r1->subgoals.size()) return std::nullopt;
                      auto r2 = t2(r1->subgoals[i]);
                      if (!r2) return std::nullopt;
                      TacticResult out;
                      std::vector<Procedure> inner;
                      std::vector<Trace> traces;
                      for (std::size_t k = 0; k < r1->subgoals.size(); ++k) {
                          const auto& sg = r1->subgoals[k];
                          if (k == i) {
                              out.subgoals.insert(out.subgoals.end(), r2->subgoals.begin(), r2->subgoals.end());
                              inner.push_back(r2->procedure);
                              traces.push_back(r2->trace);
                          } else {
                              out.subgoals.push_back(sg);
                              inner.push_back(Procedure::identity());
                              traces.push_back(Trace::open(sg));
                          }
                      }
                      out.procedure = Procedure::compose(std::move(r1->procedure), std::move(inner));
                      std::size_t next = 0;
                      out.trace = graft(r1->trace, traces, next);
                      return out;
                  }};
}

Tactic orelse(Tactic t1, Tactic t2) {
    std::string name = "(" + t1.name + " | " + t2.name + ")";
    return Tactic{name, [t1 = std::move(t1), t2 = std::move(t2)](const Goal& g) -> std::optional<TacticResult> {
                      if (auto r = t1(g)) return r;
                      return t2(g);
                  }};
}

Tactic repeat(Tactic t, std::size_t cap) {
    std::string name = "repeat " + t.name;
    return Tactic{name, [t = std::move(t), cap](const Goal& g) -> std::optional<TacticResult> {
                      if (cap > 0)
                          if (auto r = then(t, repeat(t, cap - 1))(g)) return r;
                      return id()(g);
                  }};
}

std::optional<Tactic> primitive(std::string_view name) {
    const auto& table = primitives();
    auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> primitive_names() {
    std::vector<std::string> out;
    for (const auto& [name, t] : primitives()) out.push_back(name);
    return out;
}

// ---------------------------------------------------------------------------
// Registration

void Registry::add(const Tactic& t) {
    for (const auto& g : validation_sample()) {
        auto r = t(g);
        if (!r) continue;
        const auto& p = r->procedure;
        std::string where = "tactic " + t.name + " at " + render(g) + ": ";
        if (p.kind == Procedure::Kind::Identity) {
            if (r->subgoals != std::vector<Goal>{g}) throw SynthesizerViolation(where + "identity changes the goal");
            continue;
        }
        if (p.kind != Procedure::Kind::Rule) throw SynthesizerViolation(where + "procedure is not a single rule");
        if (p.goal != g || p.instance.premises != r->subgoals)
            throw SynthesizerViolation(where + "procedure is wired to another inference");
        if (!lj::instance_checks(g, p.instance)) throw SynthesizerViolation(where + "not a rule instance");
        if (!r->trace.step || r->trace.step->proc != lj::instance_id(p.instance) || r->trace.frontier() != r->subgoals)
            throw SynthesizerViolation(where + "trace does not record the inference");
    }
    tactics_.insert_or_assign(t.name, t);
}

const Tactic* Registry::find(std::string_view name) const {
    auto it = tactics_.find(name);
    return it == tactics_.end() ? nullptr : &it->second;
}

std::vector<std::string> Registry::names() const {
    std::vector<std::string> out;
    for (const auto& [name, t] : tactics_) out.push_back(name);
    return out;
}

const Registry& shipped() {
    static const Registry registry = [] {
        Registry r;
        for (const auto& [name, t] : primitives()) r.add(t);
        return r;
    }();
    return registry;
}

std::vector<Goal> validation_sample() {
    static const std::vector<Goal> sample = [] {
        std::vector<Formula> base{Formula::atom("p"), Formula::atom("q"), Formula::bot()};
        std::vector<Formula> fs = base;
        for (const auto& a : base)
            for (const auto& b : base) {
                fs.push_back(Formula::conj(a, b));
                fs.push_back(Formula::disj(a, b));
                fs.push_back(Formula::imp(a, b));
            }
        std::vector<std::vector<Formula>> contexts{{}};
        for (const auto& a : fs) contexts.push_back({a});
        for (const auto& a : fs)
            for (const auto& b : fs) contexts.push_back({a, b});
        std::vector<Goal> out;
        for (const auto& c : contexts) {
            out.push_back(Goal{c, std::nullopt});
            for (const auto& s : fs) out.push_back(Goal{c, s});
        }
        return out;
    }();
    return sample;
}

// ---------------------------------------------------------------------------
// Script parser

namespace {

class ScriptParser {
public:
    explicit ScriptParser(std::string_view text) : text_(text) {}

    Tactic parse() {
        Tactic t = alt();
        skip();
        if (pos_ < text_.size()) throw ScriptError(pos_, std::string("unexpected '") + text_[pos_] + "'");
        return t;
    }

private:
    Tactic alt() {
        Tactic t = seq();
        while (eat('|')) t = orelse(std::move(t), seq());
        return t;
    }

    Tactic seq() {
        Tactic t = unary();
        while (eat(';')) t = then(std::move(t), unary());
        return t;
    }

    Tactic unary() {
        skip();
        if (eat('(')) {
            Tactic t = alt();
            if (!eat(')')) throw ScriptError(pos_, "expected ')'");
            t.name = "(" + t.name + ")";
            return t;
        }
        std::size_t at = pos_;
        std::string word = ident();
        if (word.empty()) {
            if (pos_ >= text_.size()) throw ScriptError(pos_, "unexpected end of script");
            throw ScriptError(pos_, std::string("expected a tactic, found '") + text_[pos_] + "'");
        }
        if (word == "repeat") return repeat(unary());
        if (word == "imp_l") {
            skip();
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                std::size_t n = 0;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    n = n * 10 + static_cast<std::size_t>(text_[pos_++] - '0');
                    if (n > 1000) throw ScriptError(at, "split too large");
                }
                return imp_l(n);
            }
        }
        const Tactic* t = shipped().find(word);
        if (!t) throw ScriptError(at, "unknown tactic '" + word + "'");
        return *t;
    }

    std::string ident() {
        skip();
        std::string out;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            out += text_[pos_++];
        return out;
    }

    bool eat(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void skip() {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            } else if (text_[pos_] == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Tactic parse_script(std::string_view text) { return ScriptParser(text).parse(); }

}  // namespace ipl::tactics
