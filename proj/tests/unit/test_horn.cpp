#include <doctest.h>

#include "support.hpp"

using namespace hornforge;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
    return n;
}

} // namespace

TEST_SUITE("horn") {

TEST_CASE("generated systems are well formed") {
    for (const char* f : {"p1.ts", "p3.ts", "two_phase.ts"})
        for (Schema s : {Schema::SafetyFwd, Schema::SafetyBwd, Schema::SafetyComb, Schema::Termination})
            CHECK(well_formed(generate(hf_test::corpus(f), s)).empty());
    SchemaConfig ni;
    ni.low_in = {"l"};
    ni.low_out = {"o"};
    CHECK(well_formed(generate(hf_test::corpus("p5_leaky.ts"), Schema::Noninterference, ni)).empty());
    CHECK(well_formed(generate(hf_test::corpus("p6.ts"), Schema::ExistsUntil)).empty());
    CHECK(well_formed(generate(hf_test::corpus("p7.ts"), Schema::ReachGame)).empty());
}

TEST_CASE("scoping and wf arity diagnostics") {
    HornSystem hs = gen_safety_forward(hf_test::corpus("p1.ts"));
    auto broken = hs;
    std::get<Atom>(broken.clauses[0].head).args = {"zz"};
    CHECK_FALSE(well_formed(broken).empty());

    auto odd = hs;
    odd.wf_marks = {"inv"};
    auto diag = well_formed(odd);
    REQUIRE_FALSE(diag.empty());
    CHECK(diag.front().find("arity") != std::string::npos);
}

TEST_CASE("emit P1") {
    HornSystem hs = gen_safety_forward(hf_test::corpus("p1.ts"));
    std::string text = emit_smtlib(hs);
    CHECK(count(text, "(declare-fun ") == 1);
    CHECK(text.find("(declare-fun inv (Int) Bool)") != std::string::npos);
    CHECK(count(text, "(assert ") == 3);
    CHECK(count(text, "(check-sat)") == 1);
    CHECK(text == emit_smtlib(gen_safety_forward(hf_test::corpus("p1.ts"))));
}

TEST_CASE("emit rejects wf and existential heads") {
    CHECK_THROWS_AS(emit_smtlib(gen_termination(hf_test::corpus("p1.ts"))), UnsupportedFragment);
    CHECK_THROWS_AS(emit_smtlib(gen_exists_until(hf_test::corpus("p6.ts"))), UnsupportedFragment);
}

TEST_CASE("smtlib parse errors") {
    CHECK_THROWS_AS(parse_smtlib_horn("(set-logic HORN)\n(declare-fun f (Int) Int)\n(check-sat)\n"), InputError);
    CHECK_THROWS_AS(parse_smtlib_horn(""), InputError);
    CHECK_THROWS_AS(parse_smtlib_horn("(assert"), InputError);
}

TEST_CASE("round trip is isomorphic") {
    for (const char* f : {"p1.ts", "p2.ts", "nonconvex.ts", "two_phase.ts"})
        for (Schema s : {Schema::SafetyFwd, Schema::SafetyBwd, Schema::SafetyComb}) {
            HornSystem hs = generate(hf_test::corpus(f), s);
            CHECK_MESSAGE(isomorphic(parse_smtlib_horn(emit_smtlib(hs)), hs), f);
        }
    // a different system is not isomorphic
    CHECK_FALSE(isomorphic(gen_safety_forward(hf_test::corpus("p1.ts")),
                           gen_safety_forward(hf_test::corpus("p2.ts"))));
}

TEST_CASE("text rendering is deterministic") {
    auto ts = hf_test::corpus("p3.ts");
    CHECK(to_text(gen_termination(ts)) == to_text(gen_termination(ts)));
}

}
