#include <doctest.h>

#include "corpus.hpp"
#include "cut_fixtures.hpp"
#include "generators.hpp"
#include "ipl/engine.hpp"
#include "oracles/g4ip.hpp"

using namespace ipl;
using namespace ipl::engine;

namespace {

Sequent S(const char* s) { return parse_sequent(s); }

SearchOutcome run(const Sequent& s, std::size_t depth = 12) {
    SearchOptions o;
    o.depth = depth;
    return search(s, o);
}

void check_agreement(const SearchOutcome& out) {
    REQUIRE(out.status == Status::Proved);
    REQUIRE(out.proof);
    REQUIRE(out.trace);
    REQUIRE(out.argument);
    CHECK(out.proof->conclusion() == out.goal);
    CHECK(lj::check_proof(out.proof->tree()).accepted);
    CHECK_FALSE(out.proof->uses_cut());
    CHECK(out.trace->goal == out.goal);
    CHECK(out.trace->closed());
    CHECK(audit_coherence(*out.trace).clean());
    CHECK(nj::check_derivation(*out.argument).accepted);
    CHECK(nj::argues_for(nj::ergo(*out.argument), out.goal));
}

}  // namespace

TEST_CASE("decide examples") {
    CHECK(decide(S("|- ~~(p \\/ ~p)")));
    CHECK_FALSE(decide(S("|- p \\/ ~p")));
    CHECK(decide(S("p |- p")));
    CHECK_FALSE(decide(S("|- ((p -> q) -> p) -> p")));
    CHECK_FALSE(decide(S("|- ((p -> q) -> p) -> p"), 3));
    CHECK(decide(S("p, ~p |-")));
    CHECK_FALSE(decide(S("|-")));
    CHECK_THROWS(Decider(1));
}

TEST_CASE("decide agrees with an independent contraction-free calculus") {
    oracle::G4ip g4ip;
    gen::Rng rng(11);
    for (int i = 0; i < 400; ++i) {
        auto s = gen::sequent(rng, 2, 2, {"p", "q", "r"});
        bool expected = g4ip.provable(s);
        CHECK_MESSAGE(decide(s) == expected, render(s));
        if (i % 4 == 0) CHECK_MESSAGE(decide(s, 3) == expected, render(s));
    }
}

TEST_CASE("capped sequents") {
    CHECK(capped(S("q, p, q, q |- r"), 2) == S("p, q, q |- r"));
    CHECK(capped(S("q, p, q |-"), 1) == S("p, q |-"));
}

TEST_CASE("search examples") {
    auto k = run(S("|- p -> q -> p"), 5);
    check_agreement(k);
    CHECK(run(S("|- ((p -> q) -> p) -> p"), 12).status == Status::Unprovable);
    CHECK(run(S("|- bot"), 1).status == Status::Unprovable);
    CHECK(run(S("|- bot"), 40).status == Status::Unprovable);
    CHECK(run(S("|- p -> q -> p"), 2).status == Status::Exhausted);
    CHECK(run(S("|- p -> q -> p"), 2).depth == 2);
    CHECK_THROWS(run(S("p |- p"), 0));
}

TEST_CASE("corpus: statuses, search and arguments agree") {
    auto entries = corpus::load();
    REQUIRE(entries.size() >= 40);
    for (const auto& e : entries) {
        CAPTURE(render(e.sequent));
        CHECK(decide(e.sequent) == e.provable);
        auto out = run(e.sequent);
        if (e.provable) {
            check_agreement(out);
        } else {
            CHECK(out.status == Status::Unprovable);
        }
    }
}

TEST_CASE("search is deterministic") {
    for (const char* s : {"|- ~~(p \\/ ~p)", "p \\/ q |- q \\/ p", "p -> q, q -> r |- p -> r"}) {
        auto a = run(S(s));
        auto b = run(S(s));
        REQUIRE(a.trace);
        CHECK(tactics::to_sexpr(*a.trace) == tactics::to_sexpr(*b.trace));
        CHECK(lj::to_sexpr(*a.proof) == lj::to_sexpr(*b.proof));
        CHECK(nj::to_sexpr(*a.argument) == nj::to_sexpr(*b.argument));
    }
}

TEST_CASE("random sequents: proofs, traces and arguments agree") {
    gen::Rng rng(5);
    int proved = 0;
    for (int i = 0; i < 250; ++i) {
        auto s = gen::sequent(rng, 2, 2, {"p", "q"});
        auto out = run(s);
        if (out.status == Status::Proved) {
            ++proved;
            check_agreement(out);
        }
        CHECK((out.status == Status::Proved) == decide(s));
    }
    CHECK(proved > 50);
}

TEST_CASE("run_script") {
    auto k = run_script(tactics::parse_script("imp_r; imp_r; w_l; ax"), S("|- p -> q -> p"));
    check_agreement(k);
    CHECK(k.proof->size() == 4);

    auto r = run_script(tactics::parse_script("and_r"), S("|- p /\\ q"));
    CHECK(r.status == Status::Remaining);
    CHECK(r.remaining == std::vector<Sequent>{S("|- p"), S("|- q")});

    auto f = run_script(tactics::parse_script("fail"), S("p |- p"));
    CHECK(f.status == Status::Remaining);
    CHECK(f.remaining == std::vector<Sequent>{S("p |- p")});
    CHECK(f.trace->steps() == 0);
}

TEST_CASE("synthesis") {
    auto ax = tactics::parse_trace("(step \"p |- p\" ax () ax)");
    auto proof = synthesize(ax);
    CHECK(proof.size() == 1);
    CHECK(proof.rule() == lj::RuleName::ax);

    auto k = run_script(tactics::parse_script("imp_r; imp_r; w_l; ax"), S("|- p -> q -> p"));
    auto text = tactics::to_sexpr(*k.trace);
    auto pos = text.find("wL");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 2, "cL");
    auto corrupted = tactics::parse_trace(text);
    try {
        synthesize(corrupted);
        FAIL("corrupted trace synthesized");
    } catch (const SynthesisFailure& e) {
        CHECK(e.path() == std::vector<std::size_t>{0, 0});
    }
    CHECK_THROWS_AS(synthesize(tactics::Trace::open(S("p |- p"))), SynthesisFailure);
    CHECK_THROWS_AS(synthesize(tactics::parse_trace("(step \"p |- p\" ax () bogus)")), SynthesisFailure);
}

TEST_CASE("coherence audit") {
    CHECK(audit_coherence(tactics::Trace::open(S("|- p"))).clean());
    CHECK(audit_coherence(tactics::Trace::open(S("|- p"))).records == 0);

    auto bad = tactics::parse_trace("(step \"|- p \\/ q\" or_r1 (\"|- p /\\ q\") orR1)");
    auto report = audit_coherence(bad);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].path.empty());

    auto nested = tactics::parse_trace(
        "(step \"|- p /\\ (q \\/ r)\" and_r (\"|- p\" \"|- q \\/ r\") andR\n"
        "  (open \"|- p\")\n"
        "  (step \"|- q \\/ r\" or_r2 (\"|- q\") orR2))");
    auto r2 = audit_coherence(nested);
    REQUIRE(r2.violations.size() == 1);
    CHECK(r2.violations[0].path == std::vector<std::size_t>{1});
    CHECK(r2.records == 2);

    auto empty_succ = tactics::parse_trace("(step \"p, ~p |-\" neg_l (\"p |- p\") negL@1.0)");
    CHECK(audit_coherence(empty_succ).clean());
}

TEST_CASE("cut fixtures have cut-free proofs") {
    for (const auto& f : fixtures::cut_fixtures()) {
        auto with_cut = fixtures::cut_proof(f);
        CAPTURE(render(with_cut.conclusion()));
        CHECK(with_cut.uses_cut());
        CHECK(lj::check_proof(with_cut.tree()).accepted);
        auto out = run(with_cut.conclusion());
        check_agreement(out);
    }
}

TEST_CASE("intro-final derivations") {
    int found = 0;
    for (const auto& e : corpus::load()) {
        if (!e.provable || !e.sequent.succedent || e.sequent.succedent->is_atom() || e.sequent.succedent->is_bot())
            continue;
        SearchOptions o;
        o.intro_final = true;
        auto out = search(e.sequent, o);
        bool reachable = false;
        for (const auto& inst : lj::rule_instances(e.sequent))
            if (inst.rule == lj::RuleName::andR || inst.rule == lj::RuleName::orR1 || inst.rule == lj::RuleName::orR2 ||
                inst.rule == lj::RuleName::impR || inst.rule == lj::RuleName::negR) {
                bool all = true;
                for (const auto& p : inst.premises) all = all && decide(p);
                reachable = reachable || all;
            }
        CAPTURE(render(e.sequent));
        CHECK((out.status == Status::Proved) == reachable);
        if (out.status != Status::Proved) continue;
        ++found;
        auto normal = nj::normalize(*out.argument);
        CHECK(nj::is_canonical(normal));
        auto rule = nj::classify(normal);
        REQUIRE(rule);
        CHECK(nj::is_introduction(*rule));
        CHECK(nj::argues_for(nj::ergo(normal), e.sequent));
    }
    CHECK(found >= 20);
}
