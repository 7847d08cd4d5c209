#include <doctest.h>

#include <algorithm>
#include <set>

#include "generators.hpp"
#include "ipl/bases.hpp"

using namespace ipl;
using namespace ipl::bases;
using nj::Argument;

namespace {

Base tammy() { return parse_base("fox, female => vixen\nvixen => female\nvixen => fox\n"); }
Argument A(const char* s) { return nj::parse_argument(s); }

/// Independent closure computation: atoms reachable from the hypotheses.
std::set<std::string> reachable(const Base& b, std::set<std::string> known) {
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& r : b.rules())
            if (!known.count(r.conclusion) &&
                std::all_of(r.premises.begin(), r.premises.end(), [&](auto& p) { return known.count(p) > 0; })) {
                known.insert(r.conclusion);
                changed = true;
            }
    }
    return known;
}

}  // namespace

TEST_CASE("derives") {
    auto d = derives(tammy(), {"vixen"}, "female");
    REQUIRE(d);
    CHECK(*d == A("(node \"female\" (assume \"vixen\"))"));
    CHECK(nj::check_derivation(*d, tammy()).accepted);
    CHECK(*derives(Base{}, {"p"}, "p") == A("(assume \"p\")"));
    CHECK_FALSE(derives(Base{}, {}, "p"));
    auto v = derives(tammy(), {"fox", "female"}, "vixen");
    REQUIRE(v);
    CHECK(v->children.size() == 2);
}

TEST_CASE("extend") {
    Base b = tammy();
    CHECK(extend(b, Base{}) == b);
    CHECK(extend(Base{}, b) == b);
    auto e = extend(parse_base("=> p"), parse_base("p => q"));
    CHECK(e.size() == 2);
    CHECK(derives(e, {}, "q"));
}

TEST_CASE("derivability is monotone under extension") {
    gen::Rng rng(4);
    const std::vector<std::string> letters{"a", "b", "c", "d", "e"};
    for (int i = 0; i < 500; ++i) {
        auto b = random_extension(Base{}, rng(), 5, letters);
        auto c = random_extension(Base{}, rng(), 4, letters);
        std::vector<std::string> hyps;
        for (const auto& l : letters)
            if (gen::pick(rng, 3) == 0) hyps.push_back(l);
        const auto& t = letters[gen::pick(rng, letters.size())];
        auto got = derives(b, hyps, t);
        CHECK(got.has_value() == (reachable(b, {hyps.begin(), hyps.end()}).count(t) > 0));
        if (got) {
            CHECK(nj::check_derivation(*got, b).accepted);
            CHECK(derives(extend(b, c), hyps, t));
        }
    }
}

TEST_CASE("random_extension") {
    Base b = tammy();
    CHECK(random_extension(b, 9, 0) == b);
    CHECK(random_extension(b, 9, 4) == random_extension(b, 9, 4));
    for (std::uint64_t s = 0; s < 50; ++s) {
        auto e = random_extension(Base{}, s, 3);
        CHECK(e.size() <= 3);
        auto t = random_extension(b, s, 3);
        for (const auto& r : b.rules()) CHECK(t.contains(r));
        CHECK(t.size() <= b.size() + 3);
    }
}

TEST_CASE("validity examples") {
    auto id = A("(node \"p -> p\" 1 (assume \"p\" 1))");
    auto v = validity(id, Base{});
    CHECK(v.status == Status::Valid);
    CHECK(v.clause == Clause::Canonical);
    CHECK(replay(v, id, Base{}));

    auto t = A("(node \"female\" (assume \"vixen\"))");
    auto tv = validity(t, tammy());
    CHECK(tv.status == Status::Valid);
    CHECK(tv.tier == Tier::Derivation);
    CHECK(replay(tv, t, tammy()));
    Budget sweep;
    sweep.force_sweep = true;
    auto ts = validity(t, tammy(), sweep);
    CHECK(ts.status == Status::Valid);
    CHECK(ts.extensions_checked > 1);

    auto bad = A("(node \"q\" (assume \"p\"))");
    auto bv = validity(bad, Base{});
    CHECK(bv.status == Status::Invalid);
    REQUIRE(bv.counterexample);
    CHECK(bv.counterexample->extension.contains(AtomicRule{{}, "p"}));
    CHECK(replay(bv, bad, Base{}));

    auto closed_bad = A("(node \"q\" (node \"p -> p\" 1 (assume \"p\" 1)))");
    auto cb = validity(closed_bad, Base{});
    CHECK(cb.status == Status::Invalid);
    CHECK(cb.clause == Clause::None);
    CHECK(replay(cb, closed_bad, Base{}));

    auto redex = A("(node \"p -> p\" (node \"q -> q\" 1 (assume \"q\" 1))"
                   " (node \"(q -> q) -> p -> p\" (node \"p -> p\" 2 (assume \"p\" 2))))");
    auto rv = validity(redex, Base{});
    CHECK(rv.status == Status::Valid);
    CHECK(rv.clause == Clause::Reduces);
    CHECK(replay(rv, redex, Base{}));

    Base ax(std::vector<AtomicRule>{{{}, "p"}});
    auto atomic = A("(node \"p\")");
    auto av = validity(atomic, ax);
    CHECK(av.clause == Clause::Atomic);
    CHECK(replay(av, atomic, ax));
    CHECK(validity(atomic, Base{}).status == Status::Invalid);
}

TEST_CASE("tampered verdicts do not replay") {
    auto bad = A("(node \"q\" (assume \"p\"))");
    auto bv = validity(bad, Base{});
    auto forged = bv;
    forged.counterexample->extension = Base(std::vector<AtomicRule>{{{"p"}, "q"}, {{}, "p"}});
    CHECK_FALSE(replay(forged, bad, Base{}));
    auto id = A("(node \"p -> p\" 1 (assume \"p\" 1))");
    auto v = validity(id, Base{});
    v.clause = Clause::Atomic;
    CHECK_FALSE(replay(v, id, Base{}));
    ValidityVerdict unknown;
    CHECK_FALSE(replay(unknown, id, Base{}));
}

TEST_CASE("base file format") {
    auto b = parse_base("# tammy\nfox, female => vixen\n\nvixen => female # comment\n=> fox\n");
    CHECK(b.size() == 3);
    CHECK(b.contains(AtomicRule{{}, "fox"}));
    CHECK(parse_base(to_text(b)) == b);
    CHECK_THROWS_AS(parse_base("p -> q"), BaseSyntaxError);
    CHECK_THROWS_AS(parse_base("p, => q"), BaseSyntaxError);
    CHECK_THROWS_AS(parse_base("p => q => r"), BaseSyntaxError);
    CHECK_THROWS_AS(parse_base("p => bot"), BaseSyntaxError);
    try {
        parse_base("=> p\n\nx y => q");
    } catch (const BaseSyntaxError& e) {
        CHECK(e.line() == 3);
    }
}
