#include <doctest.h>

#include "support.hpp"

using namespace hornforge;

namespace {

const ClauseReport& report(const std::vector<ClauseReport>& rs, const std::string& label) {
    for (const auto& r : rs)
        if (r.label == label) return r;
    FAIL("no report for " << label);
    return rs.front();
}

} // namespace

TEST_SUITE("certify") {

TEST_CASE("P1 models") {
    auto hs = gen_safety_forward(hf_test::corpus("p1.ts"));
    auto good = check_model(hs, parse_model("inv(x) := x >= 0 && x <= 10;", hs));
    REQUIRE(good.size() == 3);
    CHECK(all_hold(good));

    auto tight = check_model(hs, parse_model("inv(x) := x <= 9;", hs));
    CHECK_FALSE(all_hold(tight));
    const auto& c2 = report(tight, "c2");
    CHECK_FALSE(c2.holds);
    REQUIRE(c2.counterwitness);
    CHECK(c2.counterwitness->at("x") == 9);
    CHECK(c2.counterwitness->at("x'") == 10);
    CHECK(report(tight, "c1").holds);

    auto loose = check_model(hs, parse_model("inv(x) := true;", hs));
    const auto& c3 = report(loose, "c3");
    CHECK_FALSE(c3.holds);
    REQUIRE(c3.counterwitness);
    CHECK(c3.counterwitness->at("x") == 11);
}

TEST_CASE("bound mutations of the P1 model are rejected") {
    auto hs = gen_safety_forward(hf_test::corpus("p1.ts"));
    for (const char* m : {"inv(x) := x >= 1 && x <= 10;", "inv(x) := x >= 0 && x <= 9;",
                          "inv(x) := x >= 0 && x <= 11;", "inv(x) := x >= -1 && x <= 12;", "inv(x) := false;"})
        CHECK_MESSAGE(!all_hold(check_model(hs, parse_model(m, hs))), m);
    // loosening the lower bound alone keeps the model inductive
    CHECK(all_hold(check_model(hs, parse_model("inv(x) := x >= -1 && x <= 10;", hs))));
}

TEST_CASE("model syntax") {
    auto hs = gen_termination(hf_test::corpus("p3.ts"));
    Model m = parse_model("inv(y) := y >= 0;\nround(a, b) := a >= 1 && b = a - 1;\nrank round := a;", hs);
    CHECK(all_hold(check_model(hs, m)));
    CHECK(parse_model(model_to_text(hs, m), hs).interp.at("round") == m.interp.at("round"));
    CHECK_THROWS_AS(parse_model("", hs), InputError);
    CHECK_THROWS_AS(parse_model("nope(x) := true;", hs), InputError);
    CHECK_THROWS_AS(parse_model("inv(x) := x >= ;", hs), InputError);
    // a decreasing-but-wrong rank
    Model bad = parse_model("inv(y) := y >= 0;\nround(a, b) := a >= 1 && b = a - 1;\nrank round := -a;", hs);
    CHECK_FALSE(all_hold(check_model(hs, bad)));
}

TEST_CASE("derivations") {
    auto hs = gen_safety_forward(hf_test::corpus("p2.ts"));
    auto d = bmc(hs, 11);
    REQUIRE(d);
    CHECK(check_derivation(hs, *d));
    CHECK(derivation_error(hs, *d).empty());

    auto mutated = *d;
    mutated.root->children.front().assignment["x"] += 1;
    CHECK_FALSE(check_derivation(hs, mutated));

    auto leaf = *d;
    DerivationNode* n = &*leaf.root;
    while (!n->children.empty()) n = &n->children.front();
    n->assignment["x"] = 1;
    CHECK_FALSE(check_derivation(hs, leaf));

    auto cut = *d;
    cut.root->children.clear();
    CHECK_FALSE(check_derivation(hs, cut));

    CHECK_FALSE(check_derivation(hs, Derivation{}));
}

TEST_CASE("lasso for P4") {
    auto ts = hf_test::corpus("p4.ts");
    auto hs = gen_termination(ts);
    Verdict v = solve(hs);
    REQUIRE(v.status == Status::Refuted);
    auto& l = std::get<Lasso>(*v.refutation);
    CHECK(check_lasso(hs, l));
    auto broken = l;
    broken.cycle.front().assignment["x'"] += 1;
    CHECK_FALSE(check_lasso(hs, broken));
}

TEST_CASE("oracle examples") {
    auto p1 = oracle(hf_test::corpus("p1.ts"), Query::Safety);
    CHECK(p1.holds);
    CHECK(p1.states == 21);
    CHECK(p1.reachable == 11);

    auto p4 = oracle(hf_test::corpus("p4.ts"), Query::Termination);
    CHECK_FALSE(p4.holds);
    REQUIRE(p4.trace.size() >= 1);
    CHECK(p4.trace[p4.loop_start] == State{0});

    SchemaConfig cfg;
    cfg.low_in = {"l"};
    cfg.low_out = {"o"};
    auto leak = oracle(hf_test::corpus("p5_leaky.ts"), Query::Noninterference, cfg);
    CHECK_FALSE(leak.holds);
    REQUIRE_FALSE(leak.trace.empty());
    REQUIRE_FALSE(leak.trace_b.empty());
    // vars are h, l, o
    CHECK(leak.trace.front()[1] == leak.trace_b.front()[1]);
    CHECK(leak.trace.front()[0] != leak.trace_b.front()[0]);
    CHECK(leak.trace.back()[2] != leak.trace_b.back()[2]);
    CHECK(oracle(hf_test::corpus("p5_secure.ts"), Query::Noninterference, cfg).holds);

    auto p2 = oracle(hf_test::corpus("p2.ts"), Query::Safety);
    CHECK_FALSE(p2.holds);
    CHECK(p2.trace.size() == 11);

    CHECK_THROWS_AS(oracle(hf_test::corpus("rational.ts"), Query::Safety), ResourceError);
}

TEST_CASE("oracle traces replay") {
    auto ts = hf_test::corpus("p2.ts");
    auto o = oracle(ts, Query::Safety);
    Formula init = ts.get(Role::Init), next = ts.get(Role::Next), safe = ts.get(Role::Safe);
    REQUIRE_FALSE(o.trace.empty());
    CHECK(init.eval({{"x", o.trace.front()[0]}}));
    for (std::size_t i = 0; i + 1 < o.trace.size(); ++i)
        CHECK(next.eval({{"x", o.trace[i][0]}, {"x'", o.trace[i + 1][0]}}));
    CHECK_FALSE(safe.eval({{"x", o.trace.back()[0]}}));
}

TEST_CASE("counter plays stay outside the winning set") {
    auto ts = hf_test::corpus("p7_reset.ts");
    auto o = oracle(ts, Query::Game);
    REQUIRE_FALSE(o.holds);
    REQUIRE_FALSE(o.counter_play.empty());
    for (const auto& s : o.counter_play)
        CHECK(std::find(o.winning.begin(), o.winning.end(), s) == o.winning.end());
}

}
