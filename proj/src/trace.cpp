#include <algorithm>

#include "ipl/sexpr.hpp"
#include "ipl/tactics.hpp"

namespace ipl::tactics {

bool Trace::closed() const {
    if (!step) return false;
    return std::all_of(step->children.begin(), step->children.end(), [](const Trace& c) { return c.closed(); });
}

std::vector<Goal> Trace::frontier() const {
    if (!step) return {goal};
    std::vector<Goal> out;
    for (const auto& c : step->children) {
        auto f = c.frontier();
        out.insert(out.end(), f.begin(), f.end());
    }
    return out;
}

std::size_t Trace::steps() const {
    if (!step) return 0;
    std::size_t n = 1;
    for (const auto& c : step->children) n += c.steps();
    return n;
}

namespace {

void write(std::string& out, const Trace& t, int indent) {
    out.append(static_cast<std::size_t>(indent), ' ');
    if (!t.step) {
        out += "(open " + sexpr::quote(render(t.goal)) + ")";
        return;
    }
    out += "(step " + sexpr::quote(render(t.goal)) + " " + t.step->tactic + " (";
    for (std::size_t i = 0; i < t.step->children.size(); ++i) {
        if (i) out += ' ';
        out += sexpr::quote(render(t.step->children[i].goal));
    }
    out += ") " + t.step->proc;
    for (const auto& c : t.step->children) {
        out += '\n';
        write(out, c, indent + 2);
    }
    out += ')';
}

Trace from_node(const sexpr::Node& n) {
    if (n.is_form("open")) {
        if (n.items.size() != 2 || !n.items[1].is_string()) throw sexpr::SyntaxError(n.offset, "expected (open \"goal\")");
        return Trace::open(parse_sequent(n.items[1].text));
    }
    if (!n.is_form("step") || n.items.size() < 5 || !n.items[1].is_string() || !n.items[2].is_symbol() ||
        !n.items[3].is_list() || !n.items[4].is_symbol())
        throw sexpr::SyntaxError(n.offset, "expected (step \"goal\" tactic (\"subgoal\" ...) proc child*)");
    Trace t{parse_sequent(n.items[1].text), TraceStep{n.items[2].text, n.items[4].text, {}}};
    std::vector<Goal> listed;
    for (const auto& s : n.items[3].items) {
        if (!s.is_string()) throw sexpr::SyntaxError(s.offset, "subgoals are quoted sequents");
        listed.push_back(parse_sequent(s.text));
    }
    for (std::size_t i = 5; i < n.items.size(); ++i) t.step->children.push_back(from_node(n.items[i]));
    if (t.step->children.empty()) {
        for (auto& g : listed) t.step->children.push_back(Trace::open(g));
    } else {
        if (t.step->children.size() != listed.size())
            throw sexpr::SyntaxError(n.offset, "step lists " + std::to_string(listed.size()) + " subgoals but has " +
                                                   std::to_string(t.step->children.size()) + " children");
        for (std::size_t i = 0; i < listed.size(); ++i)
            if (t.step->children[i].goal != listed[i])
                throw sexpr::SyntaxError(n.items[5 + i].offset, "child goal differs from the listed subgoal");
    }
    return t;
}

}  // namespace

std::string to_sexpr(const Trace& t) {
    std::string out;
    write(out, t, 0);
    return out;
}

Trace parse_trace(std::string_view text) { return from_node(sexpr::read_one(text)); }

}  // namespace ipl::tactics
