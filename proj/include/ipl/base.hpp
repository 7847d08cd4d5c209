#pragma once

#include <string>
#include <vector>

namespace ipl {

/// `p1, ..., pn => c` over atom names. An empty premise list makes an axiom.
struct AtomicRule {
    std::vector<std::string> premises;
    std::string conclusion;

    friend bool operator==(const AtomicRule&, const AtomicRule&) = default;
    friend auto operator<=>(const AtomicRule&, const AtomicRule&) = default;
};

/// A finite set of atomic rules, kept sorted and duplicate-free.
class Base {
public:
    Base() = default;
    explicit Base(std::vector<AtomicRule> rules);

    /// Throws std::invalid_argument if a name is not an identifier.
    void add(AtomicRule rule);
    bool contains(const AtomicRule& rule) const;
    const std::vector<AtomicRule>& rules() const { return rules_; }
    std::size_t size() const { return rules_.size(); }
    bool empty() const { return rules_.empty(); }
    std::vector<std::string> atoms() const;

    friend bool operator==(const Base&, const Base&) = default;

private:
    std::vector<AtomicRule> rules_;
};

std::string render(const AtomicRule& rule);

}  // namespace ipl
