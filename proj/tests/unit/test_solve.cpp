#include <doctest.h>

#include "hornforge/report.hpp"
#include "support.hpp"

using namespace hornforge;

namespace {

// Pointwise equality of a one-variable interpretation with a predicate on [lo, hi].
template <class F>
bool agrees(const Formula& f, int lo, int hi, F expect) {
    for (int x = lo; x <= hi; ++x)
        if (f.eval({{"x", x}}) != expect(x)) return false;
    return true;
}

} // namespace

TEST_SUITE("solve") {

TEST_CASE("bmc on P2 finds the height-11 refutation") {
    auto hs = gen_safety_forward(hf_test::corpus("p2.ts"));
    auto d = bmc(hs, 11);
    REQUIRE(d);
    CHECK(derivation_height(*d) == 11);
    CHECK(check_derivation(hs, *d));
    // the leaf fact is inv(0), the last one inv(10)
    const DerivationNode* n = &*d->root;
    CHECK(n->assignment.at("x") == 10);
    while (!n->children.empty()) n = &n->children.front();
    CHECK(n->assignment.at("x") == 0);
    CHECK_FALSE(bmc(hs, 5));
    CHECK_FALSE(bmc(hs, 10));
}

TEST_CASE("bmc finds nothing on P1") {
    auto hs = gen_safety_forward(hf_test::corpus("p1.ts"));
    for (std::size_t k : {1, 5, 11, 12, 30, 50}) CHECK_FALSE(bmc(hs, k));
}

TEST_CASE("bmc is monotone in k") {
    for (const char* f : {"p2.ts", "nonconvex.ts", "counter.ts"}) {
        auto hs = gen_safety_forward(hf_test::corpus(f));
        bool found = false;
        for (std::size_t k = 1; k <= 14; ++k) {
            bool now = bmc(hs, k).has_value();
            if (found) CHECK_MESSAGE(now, f, " k=", k);
            found = found || now;
        }
    }
}

TEST_CASE("kleene intervals on P1 are exact") {
    auto hs = gen_safety_forward(hf_test::corpus("p1.ts"));
    auto m = kleene_intervals(hs);
    REQUIRE(m);
    CHECK(agrees(m->interp.at("inv"), 0, 20, [](int x) { return x <= 10; }));
    CHECK(all_hold(check_model(hs, *m)));
}

TEST_CASE("kleene gives up on a non-convex safe set") {
    CHECK_FALSE(kleene_intervals(gen_safety_forward(hf_test::corpus("nonconvex.ts"))));
}

TEST_CASE("empty initial set gives the all-false model") {
    auto ts = parse_program("var x: int[0,9]; init: false; next: x' = x + 1; safe: x <= 3;");
    auto hs = gen_safety_forward(ts);
    auto m = kleene_intervals(hs);
    REQUIRE(m);
    for (const auto& [p, f] : m->interp) CHECK(f.is_false());
}

TEST_CASE("templates on P1") {
    auto hs = gen_safety_forward(hf_test::corpus("p1.ts"));
    auto m = farkas_templates(hs);
    REQUIRE(m);
    CHECK(all_hold(check_model(hs, *m)));
    // every model must contain the reachable states and exclude 11..20
    const Formula& inv = m->interp.at("inv");
    for (int x = 0; x <= 10; ++x) CHECK(inv.eval({{"x", x}}));
}

TEST_CASE("constant-only grid cannot separate P1") {
    Budget b;
    b.coeff_min = b.coeff_max = 0;
    CHECK_FALSE(farkas_templates(gen_safety_forward(hf_test::corpus("p1.ts")), b));
}

TEST_CASE("scaled invariant is beyond the default grid") {
    auto ts = hf_test::corpus("scaled.ts");
    REQUIRE(oracle(ts, Query::Safety).holds);
    CHECK_FALSE(farkas_templates(gen_safety_forward(ts)));
}

TEST_CASE("portfolio verdicts") {
    auto p1 = gen_safety_forward(hf_test::corpus("p1.ts"));
    CHECK(solve(p1).status == Status::Solved);
    auto p2 = gen_safety_forward(hf_test::corpus("p2.ts"));
    Verdict r = solve(p2);
    CHECK(r.status == Status::Refuted);
    REQUIRE(r.refutation);
    CHECK(check_refutation(p2, *r.refutation));
    CHECK(solve(gen_termination(hf_test::corpus("p4.ts"))).status != Status::Solved);
    CHECK(solve(gen_termination(hf_test::corpus("p3.ts"))).status == Status::Solved);
}

TEST_CASE("combined schema yields disjoint inv and binv on P1") {
    auto hs = gen_safety_combined(hf_test::corpus("p1.ts"));
    Verdict v = solve(hs);
    REQUIRE(v.status == Status::Solved);
    const auto& m = *v.model;
    CHECK_FALSE(sat(bounds_formula(hs.predicates[0].params) && m.interp.at("inv") && m.interp.at("binv")));
}

TEST_CASE("verdicts are certified and deterministic") {
    for (const char* f : {"p1.ts", "p2.ts", "nonconvex.ts", "two_phase.ts"})
        for (Schema s : {Schema::SafetyFwd, Schema::SafetyBwd, Schema::SafetyComb, Schema::Termination}) {
            auto ts = hf_test::corpus(f);
            auto hs = generate(ts, s);
            SolveOptions o;
            o.ts = &ts;
            Verdict a = solve(hs, o), b = solve(hs, o);
            RunInfo info{f, std::string(schema_name(s)), "corrected"};
            CHECK(verdict_json(hs, a, info) == verdict_json(hs, b, info));
            if (a.model) CHECK(all_hold(check_model(hs, *a.model)));
            if (a.refutation) CHECK(check_refutation(hs, *a.refutation));
        }
}

TEST_CASE("parallel mode agrees with deterministic mode") {
    auto ts = hf_test::corpus("p1.ts");
    auto hs = gen_safety_forward(ts);
    SolveOptions o;
    o.deterministic = false;
    CHECK(solve(hs, o).status == Status::Solved);
}

TEST_CASE("tiny time budget yields unknown, never a wrong verdict") {
    auto hs = gen_safety_forward(hf_test::corpus("scaled.ts"));
    SolveOptions o;
    o.budget.max_depth = 2;
    o.budget.time_limit = 1e-6;
    Verdict v = solve(hs, o);
    if (v.status == Status::Refuted) FAIL("scaled is safe");
}

}
