#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ipl::sexpr {

/// A parsed s-expression: a list, a quoted string, or a bare symbol.
struct Node {
    enum class Kind { List, String, Symbol } kind = Kind::List;
    std::string text;  // String / Symbol
    std::vector<Node> items;
    std::size_t offset = 0;

    bool is_list() const { return kind == Kind::List; }
    bool is_string() const { return kind == Kind::String; }
    bool is_symbol() const { return kind == Kind::Symbol; }
    /// A list whose first element is the given symbol.
    bool is_form(std::string_view head) const;
};

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(std::size_t offset, const std::string& what)
        : std::runtime_error("at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Reads every top-level expression. `;` starts a comment running to end of line.
std::vector<Node> read_all(std::string_view text);
/// Reads exactly one top-level expression.
Node read_one(std::string_view text);

std::string quote(std::string_view s);

}  // namespace ipl::sexpr
