#include <doctest.h>

#include <algorithm>

#include "broken_tactic.hpp"
#include "ipl/engine.hpp"
#include "ipl/sexpr.hpp"
#include "ipl/tactics.hpp"

using namespace ipl;
using namespace ipl::tactics;
using fixtures::broken;

namespace {

Sequent S(const char* s) { return parse_sequent(s); }
Formula F(const char* s) { return parse_formula(s); }

Tactic prim(const char* name) { return *primitive(name); }

std::vector<Goal> thin_sample(std::size_t stride) {
    auto all = validation_sample();
    std::vector<Goal> out;
    for (std::size_t i = 0; i < all.size(); i += stride) out.push_back(all[i]);
    return out;
}

bool same_result(const std::optional<TacticResult>& a, const std::optional<TacticResult>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return a->subgoals == b->subgoals && a->procedure.describe() == b->procedure.describe() &&
           to_sexpr(a->trace) == to_sexpr(b->trace);
}

Event proven(const char* s) {
    auto out = engine::search(S(s));
    REQUIRE(out.proof);
    return Event::of(*out.proof);
}

}  // namespace

TEST_CASE("right primitives produce the rule's premises") {
    auto r = prim("and_r")(S("|- p /\\ q"));
    REQUIRE(r);
    CHECK(r->subgoals == std::vector<Goal>{S("|- p"), S("|- q")});
    CHECK(r->procedure.kind == Procedure::Kind::Rule);
    CHECK(r->trace.frontier() == r->subgoals);

    r = prim("imp_r")(S("r |- p -> q"));
    REQUIRE(r);
    CHECK(r->subgoals == std::vector<Goal>{S("p, r |- q")});

    r = prim("neg_r")(S("|- ~p"));
    REQUIRE(r);
    CHECK(r->subgoals == std::vector<Goal>{S("p |-")});

    CHECK_FALSE(prim("and_r")(S("|- p \\/ q")));
    CHECK_FALSE(prim("or_r1")(S("|- p")));
    CHECK(prim("or_r2")(S("|- p \\/ q"))->subgoals == std::vector<Goal>{S("|- q")});
}

TEST_CASE("left primitives act on the leftmost matching formula") {
    auto r = prim("and_l1")(S("q, p /\\ r, r /\\ p |- p"));
    REQUIRE(r);
    CHECK(r->subgoals == std::vector<Goal>{S("p, q, r /\\ p |- p")});
    CHECK(r->trace.step->proc == "andL1@1.0.2");

    r = prim("or_l")(S("p \\/ q |- q \\/ p"));
    REQUIRE(r);
    CHECK(r->subgoals == std::vector<Goal>{S("p |- q \\/ p"), S("q |- q \\/ p")});

    r = prim("imp_l")(S("p, p -> q |- q"));
    REQUIRE(r);
    CHECK(r->subgoals == std::vector<Goal>{S("p |- p"), S("q |- q")});

    r = imp_l(0)(S("p, p -> q |- q"));
    REQUIRE(r);
    CHECK(r->subgoals == std::vector<Goal>{S("|- p"), S("q, p |- q")});
    CHECK_FALSE(imp_l(3)(S("p, p -> q |- q")));

    CHECK_FALSE(prim("neg_l")(S("~p |- q")));
    CHECK(prim("neg_l")(S("q, ~p |-"))->subgoals == std::vector<Goal>{S("q |- p")});
    CHECK(prim("w_l")(S("q, p |- p"))->subgoals == std::vector<Goal>{S("p |- p")});
    CHECK(prim("c_l")(S("q, p |- p"))->subgoals == std::vector<Goal>{S("q, q, p |- p")});
    CHECK(prim("w_r")(S("bot |- p"))->subgoals == std::vector<Goal>{S("bot |-")});
}

TEST_CASE("closing primitives are strict") {
    CHECK(prim("ax")(S("p |- p"))->subgoals.empty());
    CHECK_FALSE(prim("ax")(S("q, p |- p")));
    CHECK(prim("bot_l")(S("bot |-"))->subgoals.empty());
    CHECK_FALSE(prim("bot_l")(S("bot |- p")));
    CHECK_FALSE(prim("fail")(S("p |- p")));
    auto r = prim("id")(S("p |- q"));
    REQUIRE(r);
    CHECK(r->subgoals == std::vector<Goal>{S("p |- q")});
    CHECK_FALSE(r->trace.step);
}

TEST_CASE("shipped registry") {
    auto names = shipped().names();
    for (const char* n : {"ax", "and_r", "and_l1", "and_l2", "or_r1", "or_r2", "or_l", "imp_r", "imp_l", "neg_r",
                          "neg_l", "w_l", "c_l", "id", "fail", "w_r", "bot_l"})
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
    CHECK(primitive_names() == names);
    CHECK(shipped().find("nope") == nullptr);
}

TEST_CASE("registration rejects procedures that are not the rule instance") {
    Registry r;
    CHECK_THROWS_AS(r.add(broken()), SynthesizerViolation);
    Tactic skewed{"skewed", [](const Goal& g) -> std::optional<TacticResult> {
                      auto out = prim("and_r")(g);
                      if (out) std::reverse(out->subgoals.begin(), out->subgoals.end());
                      return out;
                  }};
    CHECK_THROWS_AS(r.add(skewed), SynthesizerViolation);
    CHECK_NOTHROW(r.add(prim("and_r")));
    CHECK(r.names() == std::vector<std::string>{"and_r"});
}

TEST_CASE("then applies the second tactic to every subgoal") {
    auto t = then(prim("and_r"), prim("imp_r"));
    auto r = t(S("|- r /\\ (p -> q)"));
    REQUIRE(r);
    CHECK(r->subgoals == std::vector<Goal>{S("|- r"), S("p |- q")});
    CHECK(r->trace.frontier() == r->subgoals);
    CHECK(r->trace.steps() == 2);
    // imp_r fires on neither subgoal
    CHECK_FALSE(t(S("|- p /\\ q")));
    // nothing to continue with
    auto closed = then(prim("ax"), prim("fail"))(S("p |- p"));
    REQUIRE(closed);
    CHECK(closed->subgoals.empty());
    CHECK_FALSE(then(prim("fail"), prim("id"))(S("p |- p")));
}

TEST_CASE("then_on targets one subgoal") {
    auto t = then_on(1, prim("and_r"), prim("imp_r"));
    auto r = t(S("|- (p -> p) /\\ (p -> q)"));
    REQUIRE(r);
    CHECK(r->subgoals == std::vector<Goal>{S("|- p -> p"), S("p |- q")});
    CHECK_FALSE(then_on(2, prim("and_r"), prim("id"))(S("|- p /\\ q")));
    CHECK_FALSE(then_on(0, prim("and_r"), prim("imp_r"))(S("|- p /\\ (q -> q)")));
}

TEST_CASE("identity and unit laws hold pointwise on sampled goals") {
    auto goals = thin_sample(37);
    for (const char* n : {"and_r", "imp_r", "or_l", "imp_l", "neg_l", "c_l", "ax"}) {
        Tactic t = prim(n);
        for (const auto& g : goals) {
            CHECK(same_result(then(id(), t)(g), t(g)));
            CHECK(same_result(then(t, id())(g), t(g)));
            CHECK(same_result(orelse(prim("fail"), t)(g), t(g)));
            CHECK(same_result(orelse(t, prim("fail"))(g), t(g)));
        }
    }
}

TEST_CASE("repeat never fails and respects its cap") {
    auto r = repeat(prim("imp_r"))(S("|- p -> q -> r"));
    REQUIRE(r);
    CHECK(r->subgoals == std::vector<Goal>{S("q, p |- r")});
    auto none = repeat(prim("imp_r"))(S("p |- q"));
    REQUIRE(none);
    CHECK(none->subgoals == std::vector<Goal>{S("p |- q")});
    auto one = repeat(prim("imp_r"), 1)(S("|- p -> q -> r"));
    CHECK(one->subgoals == std::vector<Goal>{S("p |- q -> r")});
    auto cl = repeat(prim("c_l"), 5)(S("p |- q"));
    CHECK(cl->subgoals.front().context.size() == 6);
}

TEST_CASE("procedures") {
    auto goal = S("|- (r -> r) /\\ (r -> r)");
    auto r = prim("and_r")(goal);
    REQUIRE(r);
    Event e = run_procedure(r->procedure, {proven("|- r -> r"), proven("|- r -> r")});
    CHECK(e.sequent == goal);
    CHECK(achieves(e, goal));
    CHECK_THROWS_AS(run_procedure(r->procedure, {proven("|- r -> r")}), ProcedureMismatch);

    Event x = proven("p |- p");
    Event same = run_procedure(Procedure::identity(), {x});
    CHECK(same.sequent == x.sequent);
    CHECK_THROWS_AS(run_procedure(Procedure::identity(), {x, x}), ProcedureMismatch);

    // events over smaller contexts are fitted to the rule
    auto wide = S("p, q, s |- p /\\ q");
    auto rw = prim("and_r")(wide);
    Event fitted = run_procedure(rw->procedure, {proven("p |- p"), proven("q |- q")});
    CHECK(achieves(fitted, wide));
    CHECK_THROWS_AS(run_procedure(rw->procedure, {proven("p |- p"), proven("p |- p")}), ProcedureMismatch);

    auto ri = prim("imp_r")(S("|- p -> p"));
    Event ev = run_procedure(ri->procedure, {proven("p |- p")});
    CHECK(ev.sequent == S("|- p -> p"));
    Event weak = run_procedure(prim("imp_r")(S("|- p -> q -> q"))->procedure, {proven("|- q -> q")});
    CHECK(achieves(weak, S("|- p -> q -> q")));
}

TEST_CASE("composite procedures split their events") {
    auto goal = S("|- (p -> p) /\\ (q -> q)");
    auto r = then(prim("and_r"), prim("imp_r"))(goal);
    REQUIRE(r);
    CHECK(r->procedure.kind == Procedure::Kind::Composite);
    CHECK(r->procedure.arity() == 2);
    Event e = run_procedure(r->procedure, {proven("p |- p"), proven("q |- q")});
    CHECK(achieves(e, goal));
    CHECK_THROWS_AS(run_procedure(r->procedure, {proven("p |- p")}), ProcedureMismatch);
}

TEST_CASE("check_tactic_valid") {
    auto prover = engine::search_prover();
    auto goals = thin_sample(7);
    for (const char* n : {"and_r", "imp_r", "or_l", "imp_l", "w_l"}) {
        auto report = check_tactic_valid(prim(n), goals, prover);
        CHECK_MESSAGE(report.violations.empty(), n);
        CHECK(report.fired > 0);
        CHECK(report.tuples > 0);
    }
    auto bad = check_tactic_valid(broken(), {S("p, q |- p \\/ q"), S("p |- p")}, prover);
    REQUIRE(bad.violations.size() == 1);
    CHECK(bad.violations[0].goal == S("p, q |- p \\/ q"));
    CHECK(bad.fired == 1);
}

TEST_CASE("validity is preserved by tacticals on the sample") {
    auto prover = engine::search_prover();
    auto goals = thin_sample(23);
    auto t1 = prim("and_r");
    auto t2 = prim("imp_r");
    CHECK(check_tactic_valid(then(t1, t2), goals, prover).violations.empty());
    CHECK(check_tactic_valid(orelse(t1, t2), goals, prover).violations.empty());
    CHECK(check_tactic_valid(repeat(orelse(prim("and_l1"), prim("or_l")), 4), goals, prover).violations.empty());
}

TEST_CASE("script parser") {
    auto t = parse_script("imp_r; imp_r; w_l; ax");
    auto r = t(S("|- p -> q -> p"));
    REQUIRE(r);
    CHECK(r->subgoals.empty());
    CHECK(r->trace.closed());

    auto alt = parse_script("repeat (and_r | imp_r) # comment");
    auto ra = alt(S("|- (p -> p) /\\ (q -> q)"));
    CHECK(ra->subgoals == std::vector<Goal>{S("p |- p"), S("q |- q")});

    auto split = parse_script("imp_l 0");
    CHECK(split(S("p, p -> q |- q"))->subgoals.front() == S("|- p"));

    CHECK_THROWS_AS(parse_script("and_r ;"), ScriptError);
    CHECK_THROWS_AS(parse_script("frobnicate"), ScriptError);
    CHECK_THROWS_AS(parse_script("(ax"), ScriptError);
    CHECK_THROWS_AS(parse_script("ax )"), ScriptError);
    CHECK_THROWS_AS(parse_script(""), ScriptError);
    try {
        parse_script("ax; bogus");
    } catch (const ScriptError& e) {
        CHECK(e.offset() == 4);
    }
}

TEST_CASE("trace s-expressions round-trip") {
    auto r = parse_script("and_r; imp_r")(S("|- r /\\ (p -> q)"));
    REQUIRE(r);
    auto text = to_sexpr(r->trace);
    auto back = parse_trace(text);
    CHECK(to_sexpr(back) == text);
    CHECK(back.frontier() == r->subgoals);

    auto flat = parse_trace("(step \"|- p /\\ q\" and_r (\"|- p\" \"|- q\") andR)");
    CHECK(flat.frontier() == std::vector<Goal>{S("|- p"), S("|- q")});
    CHECK_THROWS(parse_trace("(step \"|- p /\\ q\" and_r (\"|- p\" \"|- q\") andR (open \"|- q\") (open \"|- p\"))"));
    CHECK_THROWS(parse_trace("(step \"|- p\" ax)"));
    CHECK_THROWS(parse_trace("(open)"));
}

TEST_CASE("interpreting goals") {
    auto a = interpret_goal(S("|- p"));
    CHECK(a.formula == F("p"));
    CHECK(a.children.empty());
    CHECK(nj::ergo(a) == S("|- p"));

    auto b = interpret_goal(S("p, q |-"));
    CHECK(b.formula.is_bot());
    CHECK(b.children.size() == 2);
    auto readings = decode_goal(b);
    CHECK(readings == std::vector<Goal>{S("p, q |- bot"), S("p, q |-")});
}

TEST_CASE("interpreting the implication tactic") {
    auto aro = interpret_tactic(prim("imp_r"));
    auto out = aro(interpret_goal(S("|- p -> q")));
    REQUIRE(out);
    const auto& g = out->grown;
    CHECK(g.formula == F("p -> q"));
    REQUIRE(g.discharges.size() == 1);
    REQUIRE(g.children.size() == 1);
    const auto& body = g.children[0];
    CHECK(body.formula == F("q"));
    REQUIRE(body.children.size() == 1);
    CHECK(body.children[0].is_assumption());
    CHECK(body.children[0].formula == F("p"));
    CHECK(body.children[0].label == g.discharges[0]);
    REQUIRE(out->subgoal_arguments.size() == 1);
    CHECK(nj::ergo(out->subgoal_arguments[0]) == S("p |- q"));
    CHECK_FALSE(aro(interpret_goal(S("|- p /\\ q"))));
}

TEST_CASE("interpreting a composite tactic") {
    auto aro = interpret_tactic(then(prim("and_r"), prim("imp_r")));
    auto out = aro(interpret_goal(S("|- r /\\ (p -> q)")));
    REQUIRE(out);
    const auto& g = out->grown;
    CHECK(g.formula == F("r /\\ (p -> q)"));
    REQUIRE(g.children.size() == 2);
    CHECK(g.children[0].formula == F("r"));
    CHECK(g.children[0].children.empty());
    const auto& imp = g.children[1];
    CHECK(imp.formula == F("p -> q"));
    REQUIRE(imp.discharges.size() == 1);
    CHECK(imp.children[0].children[0].label == imp.discharges[0]);
    REQUIRE(out->subgoal_arguments.size() == 2);
    CHECK(nj::ergo(out->subgoal_arguments[0]) == S("|- r"));
    CHECK(nj::ergo(out->subgoal_arguments[1]) == S("p |- q"));
}

TEST_CASE("interpreting left rules threads the assumptions") {
    auto r = parse_script("or_l; (or_r2; ax | or_r1; ax)")(S("p \\/ q |- q \\/ p"));
    REQUIRE(r);
    REQUIRE(r->subgoals.empty());
    auto a = interpret_trace(r->trace);
    CHECK(nj::check_derivation(a).accepted);
    CHECK(nj::argues_for(nj::ergo(a), S("p \\/ q |- q \\/ p")));

    auto r2 = parse_script("imp_l; ax; ax")(S("p, p -> q |- q"));
    REQUIRE(r2);
    auto a2 = interpret_trace(r2->trace);
    CHECK(nj::check_derivation(a2).accepted);
    CHECK(nj::ergo(a2).succedent == F("q"));
}
