#include "ipl/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ipl {

namespace detail {

struct FormulaNode {
    Connective kind;
    std::string name;
    std::optional<Formula> left;
    std::optional<Formula> right;
    std::size_t hash = 0;
    std::size_t size = 1;
    std::size_t depth = 0;
};

}  // namespace detail

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Formula Formula::atom(std::string name) {
    if (!is_identifier(name) || name == "bot")
        throw std::invalid_argument("invalid atom name: '" + name + "'");
    auto node = std::make_shared<detail::FormulaNode>();
    node->kind = Connective::Atom;
    node->hash = mix(1, std::hash<std::string>{}(name));
    node->name = std::move(name);
    return Formula(std::move(node));
}

Formula Formula::bot() {
    static const Formula instance = [] {
        auto node = std::make_shared<detail::FormulaNode>();
        node->kind = Connective::Bot;
        node->hash = 0x5bd1e995;
        return Formula(std::move(node));
    }();
    return instance;
}

namespace {

std::shared_ptr<const detail::FormulaNode> binary(Connective kind, Formula left, Formula right) {
    auto node = std::make_shared<detail::FormulaNode>();
    node->kind = kind;
    node->hash = mix(mix(static_cast<std::size_t>(kind) * 31 + 7, left.hash()), right.hash());
    node->size = 1 + left.size() + right.size();
    node->depth = 1 + std::max(left.depth(), right.depth());
    node->left = std::move(left);
    node->right = std::move(right);
    return node;
}

}  // namespace

Formula Formula::conj(Formula left, Formula right) {
    return Formula(binary(Connective::And, std::move(left), std::move(right)));
}
Formula Formula::disj(Formula left, Formula right) {
    return Formula(binary(Connective::Or, std::move(left), std::move(right)));
}
Formula Formula::imp(Formula left, Formula right) {
    return Formula(binary(Connective::Imp, std::move(left), std::move(right)));
}

Connective Formula::kind() const { return node_->kind; }

const std::string& Formula::name() const {
    if (node_->kind != Connective::Atom) throw std::logic_error("name() on non-atom");
    return node_->name;
}

const Formula& Formula::left() const {
    if (!node_->left) throw std::logic_error("left() on non-binary formula");
    return *node_->left;
}

const Formula& Formula::right() const {
    if (!node_->right) throw std::logic_error("right() on non-binary formula");
    return *node_->right;
}

bool Formula::is_binary() const {
    auto k = kind();
    return k == Connective::And || k == Connective::Or || k == Connective::Imp;
}

bool Formula::is_negation() const { return kind() == Connective::Imp && right().is_bot(); }

std::size_t Formula::hash() const { return node_->hash; }
std::size_t Formula::size() const { return node_->size; }
std::size_t Formula::depth() const { return node_->depth; }

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind ||
        a.node_->size != b.node_->size)
        return false;
    switch (a.node_->kind) {
        case Connective::Atom: return a.node_->name == b.node_->name;
        case Connective::Bot: return true;
        default: return a.left() == b.left() && a.right() == b.right();
    }
}

int compare(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return 0;
    if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
    switch (a.kind()) {
        case Connective::Atom: return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
        case Connective::Bot: return 0;
        default:
            if (int c = compare(a.left(), b.left()); c != 0) return c;
            return compare(a.right(), b.right());
    }
}

bool operator==(const Sequent& a, const Sequent& b) {
    return a.context == b.context && a.succedent == b.succedent;
}

std::size_t Sequent::hash() const {
    std::size_t h = succedent ? succedent->hash() : 0x12345;
    for (const auto& f : context) h = mix(h, f.hash());
    return mix(h, context.size());
}

// ---------------------------------------------------------------------------
// Parsing

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, std::string_view input)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "parse error at offset " << offset << ": expected ";
          for (std::size_t i = 0; i < expected.size(); ++i) os << (i ? ", " : "") << expected[i];
          if (offset < input.size())
              os << " near '" << input.substr(offset, 12) << "'";
          else
              os << " at end of input";
          return os.str();
      }()),
      offset_(offset),
      expected_(std::move(expected)) {}

bool is_identifier(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

namespace {

enum class Tok { Ident, Bot, Neg, And, Or, Imp, LParen, RParen, Turnstile, Comma, End, Bad };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string_view text;
};

class Lexer {
public:
    explicit Lexer(std::string_view input) : input_(input) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

    std::string_view input() const { return input_; }

private:
    void advance() {
        while (pos_ < input_.size() && std::isspace(static_cast<unsigned char>(input_[pos_]))) ++pos_;
        std::size_t start = pos_;
        if (pos_ >= input_.size()) {
            current_ = {Tok::End, start, {}};
            return;
        }
        auto two = input_.substr(pos_, 2);
        char c = input_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c))) {
            while (pos_ < input_.size() &&
                   (std::isalnum(static_cast<unsigned char>(input_[pos_])) || input_[pos_] == '_'))
                ++pos_;
            auto text = input_.substr(start, pos_ - start);
            current_ = {text == "bot" ? Tok::Bot : Tok::Ident, start, text};
            return;
        }
        auto emit = [&](Tok k, std::size_t len) {
            pos_ += len;
            current_ = {k, start, input_.substr(start, len)};
        };
        if (two == "/\\") return emit(Tok::And, 2);
        if (two == "\\/") return emit(Tok::Or, 2);
        if (two == "->") return emit(Tok::Imp, 2);
        if (two == "|-") return emit(Tok::Turnstile, 2);
        switch (c) {
            case '~': return emit(Tok::Neg, 1);
            case '(': return emit(Tok::LParen, 1);
            case ')': return emit(Tok::RParen, 1);
            case ',': return emit(Tok::Comma, 1);
            default: return emit(Tok::Bad, 1);
        }
    }

    std::string_view input_;
    std::size_t pos_ = 0;
    Token current_{Tok::End, 0, {}};
};

class Parser {
public:
    explicit Parser(std::string_view input) : lex_(input) {}

    Formula formula() { return imp(); }

    Sequent sequent() {
        Sequent s;
        if (lex_.peek().kind != Tok::Turnstile) {
            s.context.push_back(formula());
            while (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                s.context.push_back(formula());
            }
        }
        expect(Tok::Turnstile, {"','", "'|-'"});
        if (lex_.peek().kind != Tok::End) s.succedent = formula();
        return s;
    }

    void finish(std::vector<std::string> expected) {
        if (lex_.peek().kind != Tok::End) fail(std::move(expected));
    }

private:
    [[noreturn]] void fail(std::vector<std::string> expected) {
        throw ParseError(lex_.peek().offset, std::move(expected), lex_.input());
    }

    void expect(Tok kind, std::vector<std::string> expected) {
        if (lex_.peek().kind != kind) fail(std::move(expected));
        lex_.take();
    }

    Formula imp() {
        Formula lhs = disj();
        if (lex_.peek().kind == Tok::Imp) {
            lex_.take();
            return Formula::imp(lhs, imp());
        }
        return lhs;
    }

    Formula disj() {
        Formula lhs = conj();
        while (lex_.peek().kind == Tok::Or) {
            lex_.take();
            lhs = Formula::disj(lhs, conj());
        }
        return lhs;
    }

    Formula conj() {
        Formula lhs = neg();
        while (lex_.peek().kind == Tok::And) {
            lex_.take();
            lhs = Formula::conj(lhs, neg());
        }
        return lhs;
    }

    Formula neg() {
        if (lex_.peek().kind == Tok::Neg) {
            lex_.take();
            return Formula::neg(neg());
        }
        return primary();
    }

    Formula primary() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Tok::Ident: {
                std::string name(t.text);
                lex_.take();
                return Formula::atom(std::move(name));
            }
            case Tok::Bot: lex_.take(); return Formula::bot();
            case Tok::LParen: {
                lex_.take();
                Formula f = formula();
                expect(Tok::RParen, {"')'", "'->'", "'\\/'", "'/\\'"});
                return f;
            }
            default: fail({"identifier", "'bot'", "'~'", "'('"});
        }
    }

    Lexer lex_;
};

}  // namespace

Formula parse_formula(std::string_view text) {
    Parser p(text);
    Formula f = p.formula();
    p.finish({"'->'", "'\\/'", "'/\\'", "end of input"});
    return f;
}

Sequent parse_sequent(std::string_view text) {
    Parser p(text);
    Sequent s = p.sequent();
    p.finish({"'->'", "'\\/'", "'/\\'", "end of input"});
    return s;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

// Binding strength: higher binds tighter.
int precedence(const Formula& f) {
    switch (f.kind()) {
        case Connective::Imp: return f.is_negation() ? 4 : 1;
        case Connective::Or: return 2;
        case Connective::And: return 3;
        default: return 5;
    }
}

void render_into(std::string& out, const Formula& f);

void render_operand(std::string& out, const Formula& f, bool parens) {
    if (parens) out += '(';
    render_into(out, f);
    if (parens) out += ')';
}

void render_into(std::string& out, const Formula& f) {
    switch (f.kind()) {
        case Connective::Atom: out += f.name(); return;
        case Connective::Bot: out += "bot"; return;
        case Connective::Imp:
            if (f.is_negation()) {
                out += '~';
                render_operand(out, f.left(), precedence(f.left()) < 4);
                return;
            }
            render_operand(out, f.left(), precedence(f.left()) <= 1);
            out += " -> ";
            render_operand(out, f.right(), precedence(f.right()) < 1);
            return;
        case Connective::Or:
            render_operand(out, f.left(), precedence(f.left()) < 2);
            out += " \\/ ";
            render_operand(out, f.right(), precedence(f.right()) <= 2);
            return;
        case Connective::And:
            render_operand(out, f.left(), precedence(f.left()) < 3);
            out += " /\\ ";
            render_operand(out, f.right(), precedence(f.right()) <= 3);
            return;
    }
}

}  // namespace

std::string render(const Formula& f) {
    std::string out;
    render_into(out, f);
    return out;
}

std::string render(const Sequent& s) {
    std::string out;
    for (std::size_t i = 0; i < s.context.size(); ++i) {
        if (i) out += ", ";
        render_into(out, s.context[i]);
    }
    out += s.context.empty() ? "|-" : " |-";
    if (s.succedent) {
        out += ' ';
        render_into(out, *s.succedent);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Context utilities

std::vector<Formula> as_set(const Sequent& s) {
    std::vector<Formula> out = s.context;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool context_subset(const std::vector<Formula>& sub, const std::vector<Formula>& super) {
    return std::all_of(sub.begin(), sub.end(), [&](const Formula& f) {
        return std::find(super.begin(), super.end(), f) != super.end();
    });
}

bool is_permutation(const std::vector<Formula>& a, const std::vector<Formula>& b) {
    return a.size() == b.size() && std::is_permutation(a.begin(), a.end(), b.begin());
}

Sequent canonical(const Sequent& s) {
    Sequent out = s;
    std::sort(out.context.begin(), out.context.end());
    return out;
}

std::vector<Formula> subformulas(const Formula& f) {
    std::vector<Formula> out;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (std::find(out.begin(), out.end(), g) != out.end()) return;
        out.push_back(g);
        if (g.is_binary()) {
            walk(g.left());
            walk(g.right());
        }
    };
    walk(f);
    return out;
}

std::vector<std::string> atoms_of(const Formula& f) {
    std::set<std::string> names;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (g.is_atom()) names.insert(g.name());
        if (g.is_binary()) {
            walk(g.left());
            walk(g.right());
        }
    };
    walk(f);
    return {names.begin(), names.end()};
}

}  // namespace ipl
