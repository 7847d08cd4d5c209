#include "ipl/bases.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <random>
#include <set>

namespace ipl::bases {

using nj::Argument;

std::optional<Argument> derives(const Base& b, const std::vector<std::string>& hypotheses, const std::string& target) {
    std::map<std::string, Argument> known;
    for (const auto& h : hypotheses) known.emplace(h, Argument::assume(Formula::atom(h)));
    bool changed = true;
    while (changed && !known.count(target)) {
        changed = false;
        for (const auto& r : b.rules()) {
            if (known.count(r.conclusion)) continue;
            if (!std::all_of(r.premises.begin(), r.premises.end(), [&](const auto& p) { return known.count(p) > 0; }))
                continue;
            std::vector<Argument> children;
            for (const auto& p : r.premises) children.push_back(known.at(p));
            known.emplace(r.conclusion, Argument::infer(Formula::atom(r.conclusion), std::move(children)));
            changed = true;
        }
    }
    auto it = known.find(target);
    if (it == known.end()) return std::nullopt;
    return it->second;
}

Base extend(const Base& b, const Base& c) {
    Base out = b;
    for (const auto& r : c.rules()) out.add(r);
    return out;
}

std::string_view status_name(Status s) {
    switch (s) {
        case Status::Valid: return "valid";
        case Status::Invalid: return "invalid";
        case Status::Unknown: return "unknown";
    }
    return "?";
}

std::string_view clause_name(Clause c) {
    switch (c) {
        case Clause::None: return "none";
        case Clause::Atomic: return "closed-base-derivation";
        case Clause::Canonical: return "closed-canonical";
        case Clause::Reduces: return "closed-reduces";
        case Clause::Open: return "open";
    }
    return "?";
}

std::string_view tier_name(Tier t) {
    switch (t) {
        case Tier::None: return "none";
        case Tier::Derivation: return "derivation";
        case Tier::Sweep: return "sweep";
        case Tier::Random: return "random";
    }
    return "?";
}

namespace {

/// The i-th immediate subargument, with assumptions bound above it made open.
Argument detach(const Argument& a, std::set<unsigned> scope = {}) {
    Argument out = a;
    if (out.is_assumption()) {
        if (out.label && !scope.count(out.label)) out.label = 0;
        return out;
    }
    scope.insert(out.discharges.begin(), out.discharges.end());
    for (auto& c : out.children) c = detach(c, scope);
    return out;
}

Argument sub(const Argument& a, std::size_t i) { return detach(a.children[i]); }

bool is_closed(const Argument& a) { return nj::ergo(a).context.empty(); }

bool pure_base(const nj::NjVerdict& v) {
    return std::all_of(v.justifications.begin(), v.justifications.end(),
                       [](const nj::Justification& j) { return j.rule == nj::NjRule::BaseRule; });
}

Argument graft_open(const Argument& a, const std::vector<std::pair<Formula, Argument>>& subst,
                    std::set<unsigned> scope) {
    if (a.is_assumption()) {
        if (a.label && scope.count(a.label)) return a;
        for (const auto& [f, arg] : subst)
            if (f == a.formula) return arg;
        return a;
    }
    Argument out = a;
    scope.insert(a.discharges.begin(), a.discharges.end());
    for (auto& c : out.children) c = graft_open(c, subst, scope);
    return out;
}

std::vector<std::string> open_atoms(const Sequent& e) {
    std::set<std::string> out;
    for (const auto& f : e.context)
        for (auto& a : atoms_of(f)) out.insert(a);
    return {out.begin(), out.end()};
}

std::vector<std::string> fresh_atoms(std::size_t n, const std::set<std::string>& taken) {
    std::vector<std::string> out;
    for (std::size_t i = 0; out.size() < n; ++i) {
        std::string name = "fresh" + std::to_string(i);
        if (!taken.count(name)) out.push_back(name);
    }
    return out;
}

class Validator {
public:
    explicit Validator(const Budget& budget) : budget_(budget) {}

    ValidityVerdict run(const Argument& a, const Base& b, bool sweep_derivations) {
        ValidityVerdict v;
        v.budget = budget_;
        nj::NjVerdict d;
        try {
            d = nj::check_derivation(a, b);
        } catch (const nj::UnboundDischarge& e) {
            v.status = Status::Invalid;
            v.detail = e.what();
            return v;
        }
        if (is_closed(a)) return closed(a, b, d, v);
        v.clause = Clause::Open;
        if (d.accepted && !sweep_derivations) {
            v.status = Status::Valid;
            v.tier = Tier::Derivation;
            v.detail = "open derivation: every closure by valid arguments is a derivation";
            return v;
        }
        if (search(a, b, v, Tier::Sweep)) return v;
        if (search(a, b, v, Tier::Random)) return v;
        if (d.accepted) {
            v.status = Status::Valid;
            v.tier = Tier::Derivation;
            v.detail = "open derivation; no counterexample among " + std::to_string(v.extensions_checked) +
                       " extensions closed off";
        } else {
            v.status = Status::Unknown;
            v.detail = "no counterexample within budget (" + std::to_string(v.extensions_checked) +
                       " extensions closed off); argument is not a derivation: " + d.reason;
        }
        return v;
    }

private:
    ValidityVerdict closed(const Argument& a, const Base& b, const nj::NjVerdict& d, ValidityVerdict& v) {
        if (!d.accepted) {
            v.status = Status::Invalid;
            v.clause = Clause::None;
            v.detail = "closed argument is not a derivation: " + d.reason;
            return v;
        }
        if (pure_base(d)) {
            v.status = Status::Valid;
            v.clause = Clause::Atomic;
            return v;
        }
        if (nj::is_canonical(a)) {
            v.clause = Clause::Canonical;
            v.status = Status::Valid;
            for (std::size_t i = 0; i < a.children.size(); ++i) {
                v.subverdicts.push_back(run(sub(a, i), b, false));
                v.status = worst(v.status, v.subverdicts.back().status);
            }
            return v;
        }
        v.clause = Clause::Reduces;
        try {
            v.normal_form = nj::normalize(a);
        } catch (const nj::FuelExhausted& e) {
            v.status = Status::Unknown;
            v.detail = e.what();
            return v;
        }
        v.subverdicts.push_back(run(*v.normal_form, b, false));
        v.status = v.subverdicts.back().status;
        return v;
    }

    static Status worst(Status a, Status b) {
        if (a == Status::Invalid || b == Status::Invalid) return Status::Invalid;
        if (a == Status::Unknown || b == Status::Unknown) return Status::Unknown;
        return Status::Valid;
    }

    /// Tries closures over one family of extensions; true if a counterexample was found.
    bool search(const Argument& a, const Base& b, ValidityVerdict& v, Tier tier) {
        Sequent e = nj::ergo(a);
        std::vector<Formula> opens;
        for (const auto& f : e.context)
            if (std::find(opens.begin(), opens.end(), f) == opens.end()) opens.push_back(f);

        auto attempt = [&](const Base& c) {
            std::vector<std::pair<Formula, Argument>> subst;
            for (const auto& f : opens) {
                auto arg = closing_argument(f, c, budget_.closure_depth);
                if (!arg) return false;
                subst.emplace_back(f, std::move(*arg));
            }
            ++v.extensions_checked;
            Argument closed_off = close_off(a, subst);
            Validator inner(budget_);
            if (inner.run(closed_off, c, false).status != Status::Invalid) return false;
            v.status = Status::Invalid;
            v.tier = tier;
            v.counterexample = Closure{c, std::move(subst)};
            v.detail = "closing off over an extension yields an invalid argument";
            return true;
        };

        std::vector<std::string> atoms = open_atoms(e);
        if (tier == Tier::Sweep) {
            std::size_t n = atoms.size();
            std::size_t max_size = std::min(n, budget_.ext_rules);
            std::vector<std::vector<std::size_t>> subsets;
            if (n <= 12) {
                for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
                    if (static_cast<std::size_t>(std::popcount(mask)) <= max_size) {
                        std::vector<std::size_t> s;
                        for (std::size_t i = 0; i < n; ++i)
                            if (mask >> i & 1) s.push_back(i);
                        subsets.push_back(std::move(s));
                    }
                std::stable_sort(subsets.begin(), subsets.end(),
                                 [](const auto& x, const auto& y) { return x.size() < y.size(); });
            } else {
                subsets.push_back({});
                std::vector<std::size_t> first;
                for (std::size_t i = 0; i < max_size; ++i) first.push_back(i);
                subsets.push_back(first);
            }
            for (const auto& s : subsets) {
                Base c = b;
                for (auto i : s) c.add(AtomicRule{{}, atoms[i]});
                if (attempt(c)) return true;
            }
            return false;
        }
        std::set<std::string> alphabet(atoms.begin(), atoms.end());
        collect_atoms(a, alphabet);
        for (auto& x : b.atoms()) alphabet.insert(x);
        for (auto& x : fresh_atoms(budget_.ext_atoms, alphabet)) alphabet.insert(x);
        std::vector<std::string> letters(alphabet.begin(), alphabet.end());
        for (std::size_t s = 0; s < budget_.samples; ++s)
            if (attempt(random_extension(b, budget_.seed + s, budget_.ext_rules, letters))) return true;
        return false;
    }

    static void collect_atoms(const Argument& a, std::set<std::string>& out) {
        for (auto& x : atoms_of(a.formula)) out.insert(x);
        for (const auto& c : a.children) collect_atoms(c, out);
    }

    Budget budget_;
};

bool replay_closed_base(const Argument& a, const Base& b) {
    auto d = nj::check_derivation(a, b);
    return d.accepted && pure_base(d);
}

}  // namespace

Argument close_off(const Argument& a, const std::vector<std::pair<Formula, Argument>>& substitution) {
    return graft_open(a, substitution, {});
}

std::optional<Argument> closing_argument(const Formula& f, const Base& b, std::size_t depth) {
    if (f.depth() > depth) return std::nullopt;
    switch (f.kind()) {
        case Connective::Atom: return derives(b, {}, f.name());
        case Connective::Bot: return std::nullopt;
        case Connective::And: {
            auto l = closing_argument(f.left(), b, depth);
            auto r = l ? closing_argument(f.right(), b, depth) : std::nullopt;
            if (!r) return std::nullopt;
            return Argument::infer(f, {std::move(*l), std::move(*r)});
        }
        case Connective::Or: {
            if (auto l = closing_argument(f.left(), b, depth)) return Argument::infer(f, {std::move(*l)});
            if (auto r = closing_argument(f.right(), b, depth)) return Argument::infer(f, {std::move(*r)});
            return std::nullopt;
        }
        case Connective::Imp: {
            if (auto r = closing_argument(f.right(), b, depth)) return Argument::infer(f, {std::move(*r)});
            if (f.left() == f.right()) return Argument::infer(f, {Argument::assume(f.left(), 1)}, {1});
            return std::nullopt;
        }
    }
    return std::nullopt;
}

ValidityVerdict validity(const Argument& a, const Base& b, const Budget& budget) {
    return Validator(budget).run(a, b, budget.force_sweep);
}

bool replay(const ValidityVerdict& v, const Argument& a, const Base& b) {
    if (v.status == Status::Unknown) return false;
    nj::NjVerdict d;
    try {
        d = nj::check_derivation(a, b);
    } catch (const nj::UnboundDischarge&) {
        return v.status == Status::Invalid && v.clause == Clause::None;
    }
    bool closed = is_closed(a);
    switch (v.clause) {
        case Clause::None:
            return v.status == Status::Invalid && closed && !d.accepted;
        case Clause::Atomic:
            return v.status == Status::Valid && closed && replay_closed_base(a, b);
        case Clause::Canonical: {
            if (!closed || !d.accepted || !nj::is_canonical(a) || v.subverdicts.size() != a.children.size())
                return false;
            bool all_valid = true;
            for (std::size_t i = 0; i < a.children.size(); ++i) {
                if (!replay(v.subverdicts[i], sub(a, i), b)) return false;
                all_valid = all_valid && v.subverdicts[i].status == Status::Valid;
            }
            return all_valid == (v.status == Status::Valid);
        }
        case Clause::Reduces: {
            if (!closed || !d.accepted || nj::is_canonical(a) || !v.normal_form || v.subverdicts.size() != 1) return false;
            if (!nj::is_canonical(*v.normal_form) || nj::normalize(a) != *v.normal_form) return false;
            return v.subverdicts[0].status == v.status && replay(v.subverdicts[0], *v.normal_form, b);
        }
        case Clause::Open: {
            if (closed) return false;
            if (v.status == Status::Valid) return d.accepted;
            if (!v.counterexample) return false;
            const auto& c = v.counterexample->extension;
            for (const auto& r : b.rules())
                if (!c.contains(r)) return false;
            for (const auto& [f, arg] : v.counterexample->substitution) {
                if (nj::ergo(arg).succedent != f || !is_closed(arg)) return false;
                auto sv = validity(arg, c);
                if (sv.status != Status::Valid || !replay(sv, arg, c)) return false;
            }
            Argument closed_off = close_off(a, v.counterexample->substitution);
            if (!is_closed(closed_off)) return false;
            auto cv = validity(closed_off, c);
            return cv.status == Status::Invalid && replay(cv, closed_off, c);
        }
    }
    return false;
}

Base random_extension(const Base& b, std::uint64_t seed, std::size_t cap, const std::vector<std::string>& alphabet) {
    std::vector<std::string> letters = alphabet;
    if (letters.empty()) {
        letters = b.atoms();
        std::set<std::string> taken(letters.begin(), letters.end());
        for (auto& x : fresh_atoms(3, taken)) letters.push_back(x);
    }
    Base out = b;
    if (cap == 0) return out;
    std::mt19937_64 rng(seed);
    auto pick = [&] { return letters[rng() % letters.size()]; };
    std::size_t n = rng() % (cap + 1);
    for (std::size_t i = 0; i < n; ++i) {
        AtomicRule r;
        std::size_t k = rng() % 3;
        for (std::size_t j = 0; j < k; ++j) r.premises.push_back(pick());
        r.conclusion = pick();
        out.add(std::move(r));
    }
    return out;
}

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string atom_name(std::string_view raw, std::size_t line) {
    std::string s = trim(raw);
    if (!is_identifier(s) || s == "bot") throw BaseSyntaxError(line, "expected an atom, found '" + s + "'");
    return s;
}

}  // namespace

Base parse_base(std::string_view text) {
    Base out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (trim(line).empty()) continue;
        auto arrow = line.find("=>");
        if (arrow == std::string_view::npos) throw BaseSyntaxError(line_no, "expected '=>'");
        if (line.find("=>", arrow + 2) != std::string_view::npos) throw BaseSyntaxError(line_no, "more than one '=>'");
        AtomicRule rule;
        std::string_view lhs = line.substr(0, arrow);
        if (!trim(lhs).empty()) {
            for (;;) {
                auto comma = lhs.find(',');
                rule.premises.push_back(atom_name(lhs.substr(0, comma), line_no));
                if (comma == std::string_view::npos) break;
                lhs = lhs.substr(comma + 1);
            }
        }
        rule.conclusion = atom_name(line.substr(arrow + 2), line_no);
        out.add(std::move(rule));
    }
    return out;
}

std::string to_text(const Base& b) {
    std::string out;
    for (const auto& r : b.rules()) out += render(r) + "\n";
    return out;
}

}  // namespace ipl::bases
