#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ipl/lj.hpp"
#include "ipl/nj.hpp"
#include "ipl/syntax.hpp"
#include "ipl/tactics.hpp"

namespace ipl::engine {

/// Context sorted, each formula kept at most `cap` times.
Sequent capped(const Sequent& s, std::size_t cap);

/// Exhaustive provability as a least fixpoint over sequents keyed by their context set.
/// Each key is expanded through lj::rule_instances twice: as a set, and with every
/// formula repeated `cap` times so implication steps can share the context. Answers are
/// cached across calls; every sequent explored is settled before a call returns.
class Decider {
public:
    explicit Decider(std::size_t cap = 2);

    bool operator()(const Sequent& s);
    /// Provability of an already settled sequent, without exploring.
    std::optional<bool> known(const Sequent& s) const;
    std::size_t cap() const { return policy_.contraction_cap; }
    std::size_t explored() const { return nodes_.size(); }

private:
    struct Node {
        std::vector<std::vector<std::size_t>> instances;  // premise node ids
        bool settled = false;
        bool provable = false;
    };

    std::size_t intern(const Sequent& key, std::vector<std::size_t>& fresh);

    lj::EnumerationPolicy policy_;
    std::unordered_map<Sequent, std::size_t, SequentHash> index_;
    std::vector<Sequent> keys_;
    std::vector<Node> nodes_;
};

/// Shared oracle at the given contraction cap.
bool decide(const Sequent& s, std::size_t cap = 2);
Decider& shared_decider(std::size_t cap = 2);

enum class Status { Proved, Unprovable, Exhausted, Remaining };
std::string_view status_name(Status s);

struct SearchOptions {
    std::size_t depth = 12;
    lj::EnumerationPolicy policy;
    /// Only right rules may close the root.
    bool intro_final = false;
};

struct SearchOutcome {
    Status status = Status::Unprovable;
    Sequent goal;
    std::size_t depth = 0;
    std::optional<tactics::Trace> trace;
    std::optional<lj::LjProof> proof;
    std::optional<nj::Argument> argument;
    std::vector<Sequent> remaining;
    std::size_t nodes = 0;
};

/// Depth-bounded backward search over lj::rule_instances with a branch loop check on
/// capped sequents. Instances with a premise the oracle refutes are skipped, so a goal
/// the oracle refutes is Unprovable outright, and a provable goal with no proof within
/// the depth is Exhausted.
SearchOutcome search(const Sequent& goal, const SearchOptions& options = {});

class SynthesisFailure : public std::runtime_error {
public:
    SynthesisFailure(std::vector<std::size_t> path, const std::string& what);
    const std::vector<std::size_t>& path() const { return path_; }

private:
    std::vector<std::size_t> path_;
};

/// Replays every record of a closed trace bottom-up through the kernel.
lj::LjProof synthesize(const tactics::Trace& trace);

/// Proved when the tactic closes the goal; otherwise Remaining with the frontier.
SearchOutcome run_script(const tactics::Tactic& t, const Sequent& goal);

struct AuditViolation {
    std::vector<std::size_t> path;
    Sequent goal;
    std::string proc;
    std::string problem;
};
struct AuditReport {
    std::size_t records = 0;
    std::vector<AuditViolation> violations;
    bool clean() const { return violations.empty(); }
};

/// For every record, the goal and subgoals read back from their one-step arguments must
/// form a rule instance of the sequent calculus named by the record's procedure.
AuditReport audit_coherence(const tactics::Trace& trace);

/// A prover for tactic validity checks, backed by search.
tactics::Prover search_prover(std::size_t depth = 12);

}  // namespace ipl::engine
