#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ipl/base.hpp"
#include "ipl/nj.hpp"

namespace ipl::bases {

/// A base derivation of `target` from (some of) `hypotheses`, found by forward chaining.
/// Base axioms become childless nodes; used hypotheses become open assumptions.
std::optional<nj::Argument> derives(const Base& b, const std::vector<std::string>& hypotheses,
                                    const std::string& target);

Base extend(const Base& b, const Base& c);

struct Budget {
    std::size_t ext_atoms = 3;      // fresh atoms available to random extensions
    std::size_t ext_rules = 6;      // rules added by one extension
    std::size_t closure_depth = 4;  // max formula depth closed by constructed arguments
    std::size_t samples = 200;      // random extensions tried
    std::uint64_t seed = 0;
    bool force_sweep = false;       // also sweep extensions for open derivations
};

enum class Status { Valid, Invalid, Unknown };
std::string_view status_name(Status s);

/// Which validity clause produced the verdict.
enum class Clause {
    None,       // closed argument that is not a derivation
    Atomic,     // closed base derivation
    Canonical,  // closed canonical derivation, subderivations checked
    Reduces,    // closed non-canonical derivation, normal form checked
    Open,       // open argument, closed off over extensions
};
std::string_view clause_name(Clause c);

/// How an open verdict was reached.
enum class Tier { None, Derivation, Sweep, Random };
std::string_view tier_name(Tier t);

/// An extension together with closed arguments for the open assumptions.
struct Closure {
    Base extension;
    std::vector<std::pair<Formula, nj::Argument>> substitution;
};

struct ValidityVerdict {
    Status status = Status::Unknown;
    Clause clause = Clause::None;
    Tier tier = Tier::None;
    std::string detail;
    std::vector<ValidityVerdict> subverdicts;  // Canonical: one per child; Reduces: the normal form's
    std::optional<nj::Argument> normal_form;
    std::optional<Closure> counterexample;     // Invalid via an open argument
    std::size_t extensions_checked = 0;
    Budget budget;
};

ValidityVerdict validity(const nj::Argument& a, const Base& b, const Budget& budget = {});

/// Re-checks a Valid or Invalid verdict by applying the recorded clauses directly.
/// Unknown verdicts never replay.
bool replay(const ValidityVerdict& v, const nj::Argument& a, const Base& b);

/// Replaces every open assumption whose formula appears in the substitution.
nj::Argument close_off(const nj::Argument& a, const std::vector<std::pair<Formula, nj::Argument>>& substitution);

/// A closed canonical argument for `f` in base `b`, built from base derivations of
/// atoms, introductions, vacuous and identity implications. Absent past `depth`.
std::optional<nj::Argument> closing_argument(const Formula& f, const Base& b, std::size_t depth);

/// `b` plus up to `cap` rules with at most two premises over `alphabet` (the atoms
/// of `b` plus three fresh atoms when empty). Deterministic per seed.
Base random_extension(const Base& b, std::uint64_t seed, std::size_t cap,
                      const std::vector<std::string>& alphabet = {});

class BaseSyntaxError : public std::runtime_error {
public:
    BaseSyntaxError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// One rule per line, `p1, ..., pn => c`; `=> c` for axioms; `#` starts a comment.
Base parse_base(std::string_view text);
std::string to_text(const Base& b);

}  // namespace ipl::bases
