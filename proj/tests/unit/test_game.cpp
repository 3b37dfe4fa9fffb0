#include <doctest.h>

#include "hornforge/game.hpp"
#include "support.hpp"

using namespace hornforge;

namespace {

std::size_t at(const ExplicitSpace& sp, std::int64_t x) {
    auto i = sp.index_of({x});
    REQUIRE(i);
    return *i;
}

} // namespace

TEST_SUITE("game") {

TEST_CASE("enumerate P1") {
    auto sp = enumerate(hf_test::corpus("p1.ts"));
    REQUIRE(sp.size() == 21);
    for (std::int64_t i = 0; i <= 20; ++i) {
        auto s = at(sp, i);
        if (i <= 9)
            CHECK(sp.next[s] == std::vector<std::size_t>{at(sp, i + 1)});
        else
            CHECK(sp.next[s].empty());
    }
    CHECK(sp.init[at(sp, 0)]);
    CHECK_FALSE(sp.init[at(sp, 1)]);
}

TEST_CASE("enumerate P6 is a chain") {
    auto sp = enumerate(hf_test::corpus("p6.ts"));
    REQUIRE(sp.size() == 11);
    for (std::int64_t i = 0; i < 10; ++i) CHECK(sp.next[at(sp, i)] == std::vector<std::size_t>{at(sp, i + 1)});
    CHECK(sp.next[at(sp, 10)].empty());
}

TEST_CASE("rational systems are out of scope") {
    CHECK_THROWS_AS(enumerate(hf_test::corpus("rational.ts")), ResourceError);
    auto unbounded = parse_program("var x: int; init: x = 0; next: x' = x + 1; safe: x >= 0;");
    CHECK_THROWS_AS(enumerate(unbounded), ResourceError);
}

TEST_CASE("eu on P6") {
    auto ts = hf_test::corpus("p6.ts");
    auto sp = enumerate(ts);
    auto r = eu_attractor(sp);
    for (std::int64_t x = 0; x <= 5; ++x) CHECK(r.distance[at(sp, x)] == 5 - x);
    for (std::int64_t x = 6; x <= 10; ++x) CHECK_FALSE(r.winning[at(sp, x)]);
    auto strat = extract_strategy(sp, r);
    for (std::int64_t x = 0; x < 5; ++x) CHECK(strat.at(at(sp, x)) == at(sp, x + 1));

    auto hs = gen_exists_until(ts);
    Verdict v = solve_eu(sp, hs);
    REQUIRE(v.status == Status::Solved);
    CHECK(all_hold(check_model(hs, *v.model)));
}

TEST_CASE("eu with q unreachable is refuted") {
    auto ts = hf_test::corpus("p6_unreach.ts");
    auto sp = enumerate(ts);
    auto hs = gen_exists_until(ts);
    Verdict v = solve_eu(sp, hs);
    REQUIRE(v.status == Status::Refuted);
    const auto& t = std::get<TrapEvidence>(*v.refutation);
    CHECK(t.initial == StateVec{0});
    CHECK(t.losing.size() == 11);
    CHECK(check_trap(hs, t));
}

TEST_CASE("eu with init inside q needs no steps") {
    auto ts = parse_program("var x: int[0,4]; init: x = 2; next: x' = x + 1; p: x < 2; q: x = 2;");
    auto sp = enumerate(ts);
    auto hs = gen_exists_until(ts);
    Verdict v = solve_eu(sp, hs);
    REQUIRE(v.status == Status::Solved);
    CHECK(all_hold(check_model(hs, *v.model)));
    const auto& m = *v.model;
    const Formula& inv = m.interp.at("inv");
    for (std::int64_t x = 0; x <= 4; ++x) CHECK(inv.eval({{"x", x}}) == (x == 2));
    CHECK_FALSE(sat(m.interp.at("round")));
}

TEST_CASE("tie-break prefers the smaller successor") {
    auto ts = parse_program("var x: int[0,6]; init: x = 0; next: x' = 5 || x' = 3; p: x = 0; q: x = 3 || x = 5;");
    auto sp = enumerate(ts);
    auto r = eu_attractor(sp);
    auto strat = extract_strategy(sp, r);
    CHECK(strat.at(at(sp, 0)) == at(sp, 3));
    auto single = parse_program("var x: int[0,6]; init: x = 0; next: x' = 5; p: x = 0; q: x = 3 || x = 5;");
    auto sp2 = enumerate(single);
    CHECK(extract_strategy(sp2, eu_attractor(sp2)).at(at(sp2, 0)) == at(sp2, 5));
}

TEST_CASE("P7 is realizable within two rounds") {
    auto ts = hf_test::corpus("p7.ts");
    auto sp = enumerate(ts);
    auto r = game_attractor(sp);
    CHECK(r.winning[at(sp, 3)]);
    CHECK(r.distance[at(sp, 3)] <= 2);
    auto hs = gen_reach_game(ts);
    Verdict v = solve_reach_game(sp, hs);
    REQUIRE(v.status == Status::Solved);
    CHECK(all_hold(check_model(hs, *v.model)));
}

TEST_CASE("resetting environment defeats a slow system") {
    auto ts = parse_program(
        "var x: int[0,10]; init: x = 3; env: x' = 3; next: x' - x <= 1 && x - x' <= 1; goal: x >= 9;");
    auto sp = enumerate(ts);
    auto hs = gen_reach_game(ts);
    Verdict v = solve_reach_game(sp, hs);
    REQUIRE(v.status == Status::Refuted);
    const auto& t = std::get<TrapEvidence>(*v.refutation);
    CHECK(t.initial == StateVec{3});
    REQUIRE(t.counter.count({3}));
    CHECK(t.counter.at({3}) == StateVec{3});
    CHECK(check_trap(hs, t));
    CHECK_FALSE(oracle(ts, Query::Game).holds);
}

TEST_CASE("init inside goal") {
    auto ts = parse_program("var x: int[0,4]; init: x = 4; env: x' = x; next: x' = x; goal: x >= 4;");
    auto sp = enumerate(ts);
    auto hs = gen_reach_game(ts);
    Verdict v = solve_reach_game(sp, hs);
    REQUIRE(v.status == Status::Solved);
    CHECK(all_hold(check_model(hs, *v.model)));
    CHECK(game_attractor(sp).distance[at(sp, 4)] == 0);
}

TEST_CASE("sys step fallback") {
    auto ts = parse_program("var x: int[0,5]; init: x = 0; env: x' = x; goal: x >= 5;");
    SchemaConfig cfg;
    cfg.sys_step = 2;
    auto sp = enumerate(ts, cfg);
    CHECK(sp.has_sys);
    CHECK(game_attractor(sp).distance[at(sp, 0)] == 3);
}

}
