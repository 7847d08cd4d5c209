#pragma once

// Contraction-free terminating calculus for IPL, used only to check the engine's oracle.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "ipl/syntax.hpp"

namespace oracle {

class G4ip {
public:
    bool provable(const ipl::Sequent& s) {
        return prove(s.context, s.succedent.value_or(ipl::Formula::bot()));
    }

private:
    using Ctx = std::vector<ipl::Formula>;
    using F = ipl::Formula;
    using K = ipl::Connective;

    static Ctx without(const Ctx& g, std::size_t i) {
        Ctx out = g;
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
        return out;
    }
    static Ctx with(Ctx g, std::initializer_list<F> fs) {
        g.insert(g.end(), fs.begin(), fs.end());
        return g;
    }

    bool prove(Ctx g, const F& c) {
        std::sort(g.begin(), g.end());
        std::string key;
        for (const auto& f : g) key += ipl::render(f) + ";";
        key += "|" + ipl::render(c);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool r = step(g, c);
        memo_[key] = r;
        return r;
    }

    bool step(const Ctx& g, const F& c) {
        for (const auto& f : g)
            if (f.is_bot() || (f.is_atom() && f == c)) return true;
        // invertible left rules
        for (std::size_t i = 0; i < g.size(); ++i) {
            const F& f = g[i];
            Ctx rest = without(g, i);
            if (f.kind() == K::And) return prove(with(rest, {f.left(), f.right()}), c);
            if (f.kind() == K::Or) return prove(with(rest, {f.left()}), c) && prove(with(rest, {f.right()}), c);
            if (f.kind() == K::Imp) {
                const F& a = f.left();
                const F& d = f.right();
                if (a.is_atom() && std::find(rest.begin(), rest.end(), a) != rest.end())
                    return prove(with(rest, {d}), c);
                if (a.is_bot()) return prove(rest, c);
                if (a.kind() == K::And) return prove(with(rest, {F::imp(a.left(), F::imp(a.right(), d))}), c);
                if (a.kind() == K::Or) return prove(with(rest, {F::imp(a.left(), d), F::imp(a.right(), d)}), c);
            }
        }
        // invertible right rules
        if (c.kind() == K::And) return prove(g, c.left()) && prove(g, c.right());
        if (c.kind() == K::Imp) return prove(with(g, {c.left()}), c.right());
        // choices
        if (c.kind() == K::Or && (prove(g, c.left()) || prove(g, c.right()))) return true;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const F& f = g[i];
            if (f.kind() != K::Imp || f.left().kind() != K::Imp) continue;
            const F& a = f.left().left();
            const F& b = f.left().right();
            const F& d = f.right();
            Ctx rest = without(g, i);
            if (prove(with(rest, {F::imp(b, d)}), F::imp(a, b)) && prove(with(rest, {d}), c)) return true;
        }
        return false;
    }

    std::map<std::string, bool> memo_;
};

}  // namespace oracle
