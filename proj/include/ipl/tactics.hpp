#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ipl/lj.hpp"
#include "ipl/nj.hpp"
#include "ipl/syntax.hpp"

namespace ipl::tactics {

using Goal = Sequent;

/// A proved consequence: the sequent together with a proof of it.
struct Event {
    Sequent sequent;
    lj::LjProof certificate;

    static Event of(lj::LjProof proof);
};

/// Same succedent, context set included in the goal's, and a certificate that checks.
bool achieves(const Event& e, const Goal& g);

class ProcedureMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// How a goal's event is rebuilt from its subgoals' events.
struct Procedure {
    enum class Kind { Identity, Rule, Composite };

    Kind kind = Kind::Identity;
    // Rule: the backward rule instance the procedure replays.
    lj::RuleInstance instance;
    Goal goal;
    // Composite: `outer` applied to the results of `inner`, which split the events.
    std::shared_ptr<const Procedure> outer;
    std::vector<Procedure> inner;

    static Procedure identity();
    static Procedure of_rule(Goal goal, lj::RuleInstance instance);
    /// outer after (inner_1 x ... x inner_n); identities are folded away.
    static Procedure compose(Procedure outer, std::vector<Procedure> inner);

    std::size_t arity() const;
    std::string describe() const;
};

/// Replays the procedure. A rule procedure whose events are exactly its premises
/// yields the rule node itself; otherwise the rule is applied to the events read
/// forward, with weakening, contraction and exchange steps fitting the contexts.
Event run_procedure(const Procedure& p, const std::vector<Event>& events);

/// A reduction record: `step` is absent for a goal left open.
struct Trace;
struct TraceStep {
    std::string tactic;
    std::string proc;  // lj::instance_id of the rule instance, or "id"
    std::vector<Trace> children;
};
struct Trace {
    Goal goal;
    std::optional<TraceStep> step;

    static Trace open(Goal g) { return Trace{std::move(g), std::nullopt}; }
    bool closed() const;
    std::vector<Goal> frontier() const;
    std::size_t steps() const;
};

/// `(step "goal" tactic ("subgoal" ...) proc child*)`, and `(open "goal")` for open goals.
std::string to_sexpr(const Trace& t);
/// Throws sexpr::SyntaxError or ParseError; also rejects children that do not match
/// the listed subgoals.
Trace parse_trace(std::string_view text);

struct TacticResult {
    std::vector<Goal> subgoals;
    Procedure procedure;
    Trace trace;  // open leaves are exactly `subgoals`, in order
};

/// A partial map from goals to subgoals plus procedure; absence is failure.
struct Tactic {
    std::string name;
    std::function<std::optional<TacticResult>(const Goal&)> fn;

    std::optional<TacticResult> operator()(const Goal& g) const { return fn(g); }
};

std::optional<TacticResult> apply_tactic(const Tactic& t, const Goal& g);

Tactic id();
Tactic fail();
/// t2 on every subgoal of t1; subgoals where t2 is undefined stay as they are.
/// Undefined when t1 is, or when t2 is undefined on every one of at least one subgoal.
Tactic then(Tactic t1, Tactic t2);
/// t2 on subgoal i only.
Tactic then_on(std::size_t i, Tactic t1, Tactic t2);
Tactic orelse(Tactic t1, Tactic t2);
/// Applies t and then repeat t to every subgoal, at most `cap` levels deep. Never fails.
Tactic repeat(Tactic t, std::size_t cap = 64);

/// A tactic for a single backward rule instance chosen by `pick`.
Tactic rule_tactic(std::string name, lj::RuleName rule,
                   std::function<std::optional<lj::RuleInstance>(const Goal&)> pick);

/// Primitives: ax, and_r, and_l1, and_l2, or_r1, or_r2, or_l, imp_r, imp_l, neg_r, neg_l,
/// w_l, w_r, c_l, bot_l, id, fail. Left rules act on the leftmost matching formula.
/// `imp_l` sends every other formula to its first premise.
std::optional<Tactic> primitive(std::string_view name);
/// `imp_l` with the first `n` remaining formulas sent to the first premise.
Tactic imp_l(std::optional<std::size_t> split = std::nullopt);
std::vector<std::string> primitive_names();

class SynthesizerViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shipped primitives, each checked when registered: on every goal of the
/// validation sample where it fires, its procedure must be a single rule instance of
/// the sequent calculus for that goal and those subgoals.
class Registry {
public:
    /// Throws SynthesizerViolation.
    void add(const Tactic& t);
    const Tactic* find(std::string_view name) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, Tactic, std::less<>> tactics_;
};
const Registry& shipped();

class ScriptError : public std::runtime_error {
public:
    ScriptError(std::size_t offset, const std::string& what)
        : std::runtime_error("at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// script := alt; alt := seq ("|" seq)*; seq := unary (";" unary)*;
/// unary := "repeat" unary | "(" alt ")" | name [number]
Tactic parse_script(std::string_view text);

/// Goals whose formulas have at most one connective over {p, q} and bot, with contexts of
/// length at most 2 and any of those formulas or nothing on the right.
std::vector<Goal> validation_sample();

using Prover = std::function<std::optional<lj::LjProof>(const Sequent&)>;

struct Violation {
    Goal goal;
    std::vector<Goal> subgoals;
    std::vector<Sequent> events;
    std::string problem;
};
struct ValidityReport {
    std::string tactic;
    std::size_t goals = 0;
    std::size_t fired = 0;
    std::size_t tuples = 0;
    std::vector<Violation> violations;
};

/// For each goal where t fires, every tuple of provable sub-contexts of the subgoals
/// is run through the procedure and the result must achieve the goal.
ValidityReport check_tactic_valid(const Tactic& t, const std::vector<Goal>& goals, const Prover& prover,
                                  std::size_t max_tuples = 64);

/// The one-step argument with the context as assumption leaves and the succedent
/// (bot when empty) as root.
nj::Argument interpret_goal(const Goal& g);
/// Reads the goal back; a bot root is read with an empty succedent as well.
std::vector<Goal> decode_goal(const nj::Argument& a);

/// Grows an argument along a trace. Open goals become one-step arguments over the
/// arguments fed to them; a fully closed trace yields a derivation.
nj::Argument interpret_trace(const Trace& t);

struct AroResult {
    nj::Argument grown;
    std::vector<nj::Argument> subgoal_arguments;
};
using Aro = std::function<std::optional<AroResult>(const nj::Argument&)>;
Aro interpret_tactic(const Tactic& t);

}  // namespace ipl::tactics
