#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ipl/base.hpp"
#include "ipl/syntax.hpp"

namespace ipl::nj {

using Path = std::vector<std::size_t>;

/// A tree of formulas. Leaves of kind Assume are assumptions; a nonzero label binds
/// the leaf to the nearest ancestor listing that label among its discharges. Infer
/// nodes carry no rule: an argument need not be rule-correct.
struct Argument {
    enum class Kind { Assume, Infer };

    Kind kind = Kind::Assume;
    Formula formula = Formula::bot();
    unsigned label = 0;
    std::vector<unsigned> discharges;
    std::vector<Argument> children;

    static Argument assume(Formula f, unsigned label = 0);
    static Argument infer(Formula f, std::vector<Argument> children, std::vector<unsigned> discharges = {});

    bool is_assumption() const { return kind == Kind::Assume; }
    std::size_t size() const;
    const Argument& at(const Path& path) const;

    friend bool operator==(const Argument&, const Argument&) = default;
};

class UnboundDischarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class NotADetour : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class FuelExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class NjRule { Assumption, AndI, AndE1, AndE2, OrI1, OrI2, OrE, ImpI, ImpE, BotE, BaseRule };
std::string_view rule_name(NjRule r);
bool is_introduction(NjRule r);

struct Justification {
    NjRule rule = NjRule::Assumption;
    std::size_t base_rule = 0;  // index into Base::rules() for BaseRule
};

struct NjVerdict {
    bool accepted = false;
    Path failing_path;
    std::string reason;
    std::vector<Justification> justifications;  // preorder, accepted only
};

/// Accepts iff `a` is an (NJ + base)-derivation. Throws UnboundDischarge for a label
/// with no binder above it.
NjVerdict check_derivation(const Argument& a, const Base& base = {});

/// Shape-only rule reading of an Infer node (discharge bookkeeping is not checked).
/// Nodes with discharges only read as ImpI or OrE.
std::optional<NjRule> classify(const Argument& node, const Base& base = {});

/// Open assumptions in left-to-right leaf order paired with the root formula.
Sequent ergo(const Argument& a);
/// Same succedent (a `bot` root also matches an empty succedent) and every context
/// formula of `argued` occurs in `goal`.
bool argues_for(const Sequent& argued, const Sequent& goal);

struct Detour {
    Path position;
    Connective connective = Connective::Imp;
    friend bool operator==(const Detour&, const Detour&) = default;
};

/// Root-first (preorder).
std::vector<Detour> find_detours(const Argument& a);
bool is_canonical(const Argument& a);

/// Contracts the detour at `d`. Throws NotADetour if no detour of that kind is there.
Argument reduce_step(const Argument& a, const Detour& d);

enum class Strategy { Innermost, Outermost };
struct NormalizeOptions {
    Strategy strategy = Strategy::Innermost;
    std::size_t fuel = 10000;
};
/// Repeated reduce_step until canonical. Throws FuelExhausted past the budget.
Argument normalize(const Argument& a, const NormalizeOptions& options = {}, std::size_t* steps = nullptr);

/// Renumbers discharge labels 1, 2, ... in preorder of their binders so that each label
/// names exactly one binder. Throws UnboundDischarge.
Argument relabel(const Argument& a);
/// The largest label in use.
unsigned max_label(const Argument& a);

/// `(node "formula" label* child*)` and `(assume "formula" label?)`.
std::string to_sexpr(const Argument& a);
/// Throws sexpr::SyntaxError, ParseError or UnboundDischarge.
Argument parse_argument(std::string_view text);

}  // namespace ipl::nj
