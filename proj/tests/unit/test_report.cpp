#include <doctest.h>

#include <json.hpp>

#include "hornforge/report.hpp"
#include "support.hpp"

using namespace hornforge;

TEST_SUITE("report") {

TEST_CASE("json key order and embedded model") {
    auto ts = hf_test::corpus("p1.ts");
    auto hs = gen_safety_forward(ts);
    Verdict v = solve(hs);
    std::string text = verdict_json(hs, v, {"p1.ts", "safety-fwd", "corrected"});
    auto j = nlohmann::ordered_json::parse(text);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"command", "file", "system", "schema", "variant", "status", "strategy",
                                           "reason", "model", "refutation", "trace", "counters"});
    CHECK(j["status"] == "SOLVED");
    auto cert = read_verdict_json(text, hs);
    REQUIRE(cert.model);
    CHECK(all_hold(check_model(hs, *cert.model)));
}

TEST_CASE("refutations survive the json round trip") {
    struct Case {
        const char* file;
        Schema schema;
    };
    for (Case c : {Case{"p2.ts", Schema::SafetyFwd}, Case{"p4.ts", Schema::Termination},
                   Case{"p6_unreach.ts", Schema::ExistsUntil}, Case{"p7_reset.ts", Schema::ReachGame}}) {
        auto ts = hf_test::corpus(c.file);
        auto hs = generate(ts, c.schema);
        SolveOptions o;
        o.ts = &ts;
        Verdict v = solve(hs, o);
        REQUIRE_MESSAGE(v.status == Status::Refuted, c.file);
        auto cert = read_verdict_json(verdict_json(hs, v, {c.file, "", "corrected"}), hs);
        REQUIRE(cert.refutation);
        CHECK_MESSAGE(check_refutation(hs, *cert.refutation), c.file);
    }
}

TEST_CASE("human trace for P2") {
    auto hs = gen_safety_forward(hf_test::corpus("p2.ts"));
    Verdict v = solve(hs);
    std::string text = verdict_human(hs, v);
    CHECK(text.rfind("REFUTED\n", 0) == 0);
    CHECK(text.find("from 11 facts") != std::string::npos);
    auto trace = derivation_trace(hs, std::get<Derivation>(*v.refutation));
    REQUIRE(trace.size() == 12);
    CHECK(trace.front() == "inv(0)");
    CHECK(trace[10] == "inv(10)");
    CHECK(trace.back() == "false");
}

TEST_CASE("malformed reports") {
    auto hs = gen_safety_forward(hf_test::corpus("p1.ts"));
    CHECK_THROWS_AS(read_verdict_json("{", hs), InputError);
    CHECK_THROWS_AS(read_verdict_json("{\"status\": \"SOLVED\"}", hs), InputError);
}

TEST_CASE("clause reports") {
    auto hs = gen_safety_forward(hf_test::corpus("p1.ts"));
    auto rs = check_model(hs, parse_model("inv(x) := x <= 9;", hs));
    std::string human = reports_human(rs);
    CHECK(human.find("c2: FAILS") != std::string::npos);
    CHECK(human.find("REJECTED") != std::string::npos);
    auto j = nlohmann::json::parse(reports_json(rs, {"p1.ts", "safety-fwd", "corrected"}));
    CHECK(j["certified"] == false);
    CHECK(j["clauses"][1]["counterwitness"]["x"] == 9);
}

}
