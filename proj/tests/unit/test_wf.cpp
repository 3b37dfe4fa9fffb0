#include <doctest.h>

#include <random>

#include "hornforge/wf.hpp"
#include "support.hpp"

using namespace hornforge;
using hf_test::cube_of;

namespace {

std::vector<SortedVar> ints(std::initializer_list<const char*> names) {
    std::vector<SortedVar> out;
    for (const char* n : names) out.push_back({n, Sort::Int, std::nullopt});
    return out;
}

} // namespace

TEST_SUITE("wf") {

TEST_CASE("pr on a simple countdown") {
    Cube rel = cube_of("x >= 1 && x - x' >= 1");
    auto r = pr_synthesize(rel);
    REQUIRE(r);
    CHECK(check_rank(rel.to_formula(), *r, ints({"x"})));
}

TEST_CASE("reflexive relation has no rank") {
    CHECK_FALSE(pr_synthesize(cube_of("x' = x")));
    CHECK_FALSE(pr_synthesize(cube_of("x' = x"), {"x", "x'"}));
}

TEST_CASE("pr rejects disjunctions") {
    CHECK_THROWS_AS(pr_synthesize(parse_formula("x >= 1 && (x' = x - 1 || x' = x - 2)")), InputError);
}

TEST_CASE("pr on generated rankable relations") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> c(-10, 10), d(1, 4), k(-3, 3), pick(0, 2);
    int done = 0;
    while (done < 50) {
        std::string text = "x >= " + std::to_string(c(rng)) + " && x - x' >= " + std::to_string(d(rng));
        for (int i = pick(rng); i > 0; --i) {
            const char* sides[] = {"y' = y + ", "y - x <= ", "y' - y >= "};
            text += " && ";
            text += sides[pick(rng)];
            text += std::to_string(k(rng));
        }
        Cube rel = cube_of(text);
        if (!std::holds_alternative<Assignment>(sat_cube(rel))) continue;
        ++done;
        auto r = pr_synthesize(rel);
        REQUIRE_MESSAGE(r, text);
        CHECK_MESSAGE(check_rank(rel.to_formula(), *r, ints({"x", "y"})), text);
    }
}

TEST_CASE("lex on the two-phase loop") {
    std::vector<Cube> parts{cube_of("x >= 1 && x' = x - 1 && y' = y"),
                            cube_of("y >= 1 && y' = y - 1 && x' = x && x <= 0")};
    auto r = lex_synthesize(parts);
    REQUIRE(r);
    CHECK(r->components.size() == 2);
    Formula round = parts[0].to_formula() || parts[1].to_formula();
    CHECK(check_rank(round, *r, ints({"x", "y"})));
}

TEST_CASE("lex degenerates to pr on one disjunct") {
    Cube rel = cube_of("x >= 1 && x - x' >= 1");
    auto r = lex_synthesize({rel});
    REQUIRE(r);
    CHECK(check_rank(rel.to_formula(), *r, ints({"x"})));
}

TEST_CASE("lex fails on a cycle") {
    CHECK_FALSE(lex_synthesize({cube_of("x >= 1 && x' = x - 1"), cube_of("x >= 0 && x' = x")}));
}

TEST_CASE("check_rank examples") {
    Formula down = parse_formula("x >= 1 && x' = x - 1");
    CHECK(check_rank(down, AffineRank{LinTerm::var("x")}, ints({"x"})));
    CHECK_FALSE(check_rank(down, AffineRank{-LinTerm::var("x")}, ints({"x"})));
    Formula up = parse_formula("x' = x + 1 && x <= 100");
    CHECK(check_rank(up, AffineRank{LinTerm(Rational(100)) - LinTerm::var("x")}, ints({"x"})));
    CHECK_FALSE(check_rank(up, AffineRank{LinTerm(Rational(99)) - LinTerm::var("x")}, ints({"x"})));
}

TEST_CASE("table ranks") {
    std::vector<SortedVar> st{{"x", Sort::Int, std::make_pair<std::int64_t, std::int64_t>(0, 3)}};
    Formula round = parse_formula("x >= 1 && x <= 3 && x' = x - 1");
    TableRank good{{{{0}, 0}, {{1}, 1}, {{2}, 2}, {{3}, 3}}};
    CHECK(check_rank(round, good, st));
    TableRank flat{{{{0}, 0}, {{1}, 1}, {{2}, 1}, {{3}, 2}}};
    CHECK_FALSE(check_rank(round, flat, st));
}

}
