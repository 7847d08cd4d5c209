#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ipl/syntax.hpp"

namespace ipl::lj {

/// Rules of the single-succedent sequent calculus. Left rules act on the head of the
/// context; `e` relates any two orderings of the same context. `cut` is accepted by
/// the checker but marks the proof as non-kernel. `botL` closes `bot |-`.
enum class RuleName {
    wL, wR, cL, e,
    andR, andL1, andL2,
    negR, negL,
    orL, orR1, orR2,
    impR, impL,
    ax, botL,
    cut,
};

std::string_view rule_name(RuleName r);
std::optional<RuleName> parse_rule_name(std::string_view s);
std::vector<RuleName> all_rules();
std::size_t premise_count(RuleName r);
bool is_admissible_extension(RuleName r);

/// True iff (conclusion, premises) is an instance of the named schema. Contexts are
/// compared positionally.
bool check_rule(RuleName rule, const Sequent& conclusion, const std::vector<Sequent>& premises);

/// Unchecked proof tree, as read from a file or assembled by hand.
struct ProofTree {
    RuleName rule = RuleName::ax;
    Sequent conclusion;
    std::vector<ProofTree> premises;
};

class KernelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CutMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A checked proof. Values are only produced by `infer` (which calls check_rule) or by
/// an accepting check_proof.
class LjProof {
public:
    static LjProof infer(RuleName rule, Sequent conclusion, std::vector<LjProof> premises);

    RuleName rule() const;
    const Sequent& conclusion() const;
    const std::vector<LjProof>& premises() const;

    bool uses_cut() const;
    std::size_t size() const;
    std::size_t height() const;
    ProofTree tree() const;

private:
    struct Node;
    explicit LjProof(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct LjVerdict {
    bool accepted = false;
    std::vector<std::size_t> failing_path;  // child indices from the root
    std::string reason;
    bool uses_cut = false;
    std::optional<LjProof> proof;
};

LjVerdict check_proof(const ProofTree& tree);

/// A backward rule application. `permutation` lists goal-context indices in the order
/// the rule's head-form conclusion expects; empty means the goal is already in head form.
struct RuleInstance {
    RuleName rule = RuleName::ax;
    std::vector<Sequent> premises;
    std::vector<std::size_t> permutation;
};

struct EnumerationPolicy {
    std::size_t contraction_cap = 2;  // max copies of a formula produced by backward cL
    std::size_t split_cap = 10;       // max context size for exhaustive impL splits
    /// impL only with repeated formulas shared out between both premises; single
    /// formulas are still split every way.
    bool maximal_splits = false;
};

/// Goal context reordered as the instance's rule sees it.
Sequent head_form(const Sequent& goal, const RuleInstance& inst);
/// check_rule on the head form, plus the exchange step when a permutation is recorded.
bool instance_checks(const Sequent& goal, const RuleInstance& inst);

/// All backward instances at `goal` under the policy, in search order: closing rules,
/// right rules, left rules, then structural rules.
std::vector<RuleInstance> rule_instances(const Sequent& goal, const EnumerationPolicy& policy = {});

/// Builds the proof node for an instance, inserting an `e` step when permuted.
LjProof apply_instance(const Sequent& goal, const RuleInstance& inst, std::vector<LjProof> premises);

/// `rule` or `rule@i.j.k` (permutation indices).
std::string instance_id(const RuleInstance& inst);
struct InstanceId {
    RuleName rule;
    std::vector<std::size_t> permutation;
};
std::optional<InstanceId> parse_instance_id(std::string_view id);

/// From proofs of `Δ |- φ` and `φ, Γ |- χ`, the proof of `Δ, Γ |- χ` ending in cut.
LjProof cut(const LjProof& left, const LjProof& right, const Formula& cut_formula);

std::string to_sexpr(const ProofTree& tree);
std::string to_sexpr(const LjProof& proof);
/// Parses `(rule "sequent" child*)`. Throws sexpr::SyntaxError or ParseError.
ProofTree parse_proof(std::string_view text);

}  // namespace ipl::lj
