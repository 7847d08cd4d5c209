#include "ipl/base.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "ipl/syntax.hpp"

namespace ipl {

Base::Base(std::vector<AtomicRule> rules) {
    for (auto& r : rules) add(std::move(r));
}

void Base::add(AtomicRule rule) {
    auto check = [](const std::string& a) {
        if (!is_identifier(a) || a == "bot") throw std::invalid_argument("not an atom name: '" + a + "'");
    };
    for (const auto& p : rule.premises) check(p);
    check(rule.conclusion);
    auto it = std::lower_bound(rules_.begin(), rules_.end(), rule);
    if (it == rules_.end() || *it != rule) rules_.insert(it, std::move(rule));
}

bool Base::contains(const AtomicRule& rule) const {
    return std::binary_search(rules_.begin(), rules_.end(), rule);
}

std::vector<std::string> Base::atoms() const {
    std::set<std::string> out;
    for (const auto& r : rules_) {
        out.insert(r.premises.begin(), r.premises.end());
        out.insert(r.conclusion);
    }
    return {out.begin(), out.end()};
}

std::string render(const AtomicRule& rule) {
    std::string out;
    for (std::size_t i = 0; i < rule.premises.size(); ++i) {
        if (i) out += ", ";
        out += rule.premises[i];
    }
    out += out.empty() ? "=> " : " => ";
    return out + rule.conclusion;
}

}  // namespace ipl
