#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ipl {

enum class Connective { Atom, Bot, And, Or, Imp };

namespace detail {
struct FormulaNode;
}

/// Immutable IPL formula. Negation is not a constructor: `~a` is `a -> bot`.
class Formula {
public:
    static Formula atom(std::string name);
    static Formula bot();
    static Formula conj(Formula left, Formula right);
    static Formula disj(Formula left, Formula right);
    static Formula imp(Formula left, Formula right);
    static Formula neg(Formula body) { return imp(std::move(body), bot()); }

    Connective kind() const;
    const std::string& name() const;  // atoms only
    const Formula& left() const;      // binary connectives only
    const Formula& right() const;

    bool is_atom() const { return kind() == Connective::Atom; }
    bool is_bot() const { return kind() == Connective::Bot; }
    bool is_binary() const;
    /// `a -> bot`
    bool is_negation() const;

    std::size_t hash() const;
    std::size_t size() const;   // node count
    std::size_t depth() const;  // atoms and bot have depth 0

    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
    /// Total structural order, used for canonical context ordering.
    friend int compare(const Formula& a, const Formula& b);
    friend bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

private:
    explicit Formula(std::shared_ptr<const detail::FormulaNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const detail::FormulaNode> node_;
};

/// Ordered context plus an optional succedent (absent = empty right-hand side).
struct Sequent {
    std::vector<Formula> context;
    std::optional<Formula> succedent;

    friend bool operator==(const Sequent& a, const Sequent& b);
    friend bool operator!=(const Sequent& a, const Sequent& b) { return !(a == b); }
    std::size_t hash() const;
};

struct FormulaHash {
    std::size_t operator()(const Formula& f) const { return f.hash(); }
};
struct SequentHash {
    std::size_t operator()(const Sequent& s) const { return s.hash(); }
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, std::string_view input);

    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

Formula parse_formula(std::string_view text);
Sequent parse_sequent(std::string_view text);

std::string render(const Formula& f);
std::string render(const Sequent& s);

/// Distinct context formulas in canonical order.
std::vector<Formula> as_set(const Sequent& s);
/// Set inclusion of contexts: every formula of `sub` occurs in `super`.
bool context_subset(const std::vector<Formula>& sub, const std::vector<Formula>& super);
/// Same formulas with the same multiplicities, in any order.
bool is_permutation(const std::vector<Formula>& a, const std::vector<Formula>& b);
/// Context sorted into canonical order (multiplicities kept).
Sequent canonical(const Sequent& s);

/// Proper and improper subformulas, each once.
std::vector<Formula> subformulas(const Formula& f);
/// Atom names occurring in f, sorted, unique.
std::vector<std::string> atoms_of(const Formula& f);

bool is_identifier(std::string_view s);

}  // namespace ipl
