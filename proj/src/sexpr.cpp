#include "ipl/sexpr.hpp"

#include <cctype>

namespace ipl::sexpr {

bool Node::is_form(std::string_view head) const {
    return is_list() && !items.empty() && items.front().is_symbol() && items.front().text == head;
}

namespace {

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    bool at_end() {
        skip();
        return pos_ >= text_.size();
    }

    Node read() {
        skip();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "unexpected end of input");
        char c = text_[pos_];
        Node node;
        node.offset = pos_;
        if (c == '(') {
            ++pos_;
            node.kind = Node::Kind::List;
            for (;;) {
                skip();
                if (pos_ >= text_.size()) throw SyntaxError(node.offset, "unterminated list");
                if (text_[pos_] == ')') {
                    ++pos_;
                    return node;
                }
                node.items.push_back(read());
            }
        }
        if (c == ')') throw SyntaxError(pos_, "unexpected ')'");
        if (c == '"') {
            // Formula text uses bare backslashes (`/\`, `\/`), so `\"` is the only escape.
            ++pos_;
            node.kind = Node::Kind::String;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\\' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
                    node.text += text_[pos_ + 1];
                    pos_ += 2;
                    continue;
                }
                node.text += text_[pos_++];
            }
            if (pos_ >= text_.size()) throw SyntaxError(node.offset, "unterminated string");
            ++pos_;
            return node;
        }
        node.kind = Node::Kind::Symbol;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != '"' && text_[pos_] != ';')
            node.text += text_[pos_++];
        return node;
    }

private:
    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == ';') {
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

std::vector<Node> read_all(std::string_view text) {
    Reader r(text);
    std::vector<Node> out;
    while (!r.at_end()) out.push_back(r.read());
    return out;
}

Node read_one(std::string_view text) {
    auto all = read_all(text);
    if (all.size() != 1)
        throw SyntaxError(0, "expected exactly one expression, found " + std::to_string(all.size()));
    return std::move(all.front());
}

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace ipl::sexpr
