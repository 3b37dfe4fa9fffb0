// horn-forge: generate, solve, certify and emit Horn systems for transition
// system programs, plus a brute-force oracle.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "hornforge/certify.hpp"
#include "hornforge/errors.hpp"
#include "hornforge/generate.hpp"
#include "hornforge/horn.hpp"
#include "hornforge/program.hpp"
#include "hornforge/report.hpp"
#include "hornforge/solve.hpp"

using namespace hornforge;

namespace {

constexpr int kUsage = 3;
constexpr int kInput = 4;

struct Options {
    std::string file;
    std::string schema = "safety-fwd";
    std::string variant = "corrected";
    std::string low_in, low_out;
    std::optional<std::int64_t> sys_step;
    std::size_t depth = 25;
    double time = 30.0;
    std::string format = "human";
    std::string emit;
    bool deterministic = true;
    std::string model;
    std::string query;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> split_vars(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || c == ' ') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

SchemaConfig config_of(const Options& o) {
    SchemaConfig cfg;
    if (o.variant == "literal") cfg.variant = Variant::Literal;
    else if (o.variant != "corrected") throw InputError("unknown variant '" + o.variant + "'");
    cfg.low_in = split_vars(o.low_in);
    cfg.low_out = split_vars(o.low_out);
    cfg.sys_step = o.sys_step;
    return cfg;
}

RunInfo info_of(const Options& o) { return {o.file, o.schema, o.variant}; }

int cmd_gen(const Options& o) {
    auto ts = parse_program(read_file(o.file));
    HornSystem hs = generate(ts, schema_from_name(o.schema), config_of(o));
    std::cout << to_text(hs);
    if (!o.emit.empty()) {
        std::ofstream out(o.emit, std::ios::binary);
        if (!out) throw InputError("cannot write '" + o.emit + "'");
        out << emit_smtlib(hs);
    }
    return 0;
}

int cmd_emit(const Options& o) {
    auto ts = parse_program(read_file(o.file));
    HornSystem hs = generate(ts, schema_from_name(o.schema), config_of(o));
    std::string text = emit_smtlib(hs);
    if (o.emit.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(o.emit, std::ios::binary);
        if (!out) throw InputError("cannot write '" + o.emit + "'");
        out << text;
    }
    return 0;
}

int cmd_solve(const Options& o) {
    auto ts = parse_program(read_file(o.file));
    SchemaConfig cfg = config_of(o);
    HornSystem hs = generate(ts, schema_from_name(o.schema), cfg);
    SolveOptions opts;
    opts.budget.max_depth = o.depth;
    opts.budget.time_limit = o.time;
    opts.deterministic = o.deterministic;
    opts.ts = &ts;
    opts.cfg = cfg;
    Verdict v = solve(hs, opts);
    std::cout << (o.format == "json" ? verdict_json(hs, v, info_of(o)) : verdict_human(hs, v));
    switch (v.status) {
    case Status::Solved: return 0;
    case Status::Refuted: return 1;
    case Status::Unknown: return 2;
    }
    return 2;
}

int cmd_certify(const Options& o) {
    if (o.model.empty()) throw CLI::RequiredError("--model");
    auto ts = parse_program(read_file(o.file));
    HornSystem hs = generate(ts, schema_from_name(o.schema), config_of(o));
    std::string text = read_file(o.model);
    auto first = text.find_first_not_of(" \t\r\n");
    std::vector<ClauseReport> reports;
    if (first != std::string::npos && text[first] == '{') {
        EmbeddedCertificate cert = read_verdict_json(text, hs);
        if (cert.model) {
            reports = check_model(hs, *cert.model);
        } else if (cert.refutation) {
            bool ok = check_refutation(hs, *cert.refutation);
            reports.push_back({"refutation", ok, std::nullopt, ok ? "" : "refutation does not replay"});
        } else {
            throw InputError("report carries no certificate (status " + cert.status + ")");
        }
    } else {
        reports = check_model(hs, parse_model(text, hs));
    }
    std::cout << (o.format == "json" ? reports_json(reports, info_of(o)) : reports_human(reports));
    return all_hold(reports) ? 0 : 1;
}

int cmd_oracle(const Options& o) {
    auto ts = parse_program(read_file(o.file));
    Query q = o.query.empty() ? query_for(schema_from_name(o.schema)) : query_from_name(o.query);
    if (!ts.all_bounded_int()) throw InputError("the oracle needs bounded int variables");
    SchemaConfig cfg = config_of(o);
    if (q == Query::Noninterference && (cfg.low_in.empty() || cfg.low_out.empty()))
        throw InputError("noninterference needs --low-in and --low-out");
    OracleVerdict v;
    try {
        v = oracle(ts, q, cfg);
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 2;
    }
    std::cout << (o.format == "json" ? oracle_json(v, o.file) : oracle_human(v));
    return v.holds ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Horn-constraint generation, solving and certification for transition systems", "horn-forge"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub) {
        sub->add_option("file", o.file, "transition system program (.ts)")->required();
        sub->add_option("--schema", o.schema, "proof rule")
            ->check(CLI::IsMember({"safety-fwd", "safety-bwd", "safety-comb", "termination", "noninterference",
                                   "exists-until", "reach-game"}));
        sub->add_option("--variant", o.variant, "literal|corrected")->check(CLI::IsMember({"literal", "corrected"}));
        sub->add_option("--low-in", o.low_in, "low input variables (comma separated)");
        sub->add_option("--low-out", o.low_out, "low output variables (comma separated)");
        sub->add_option("--sys-step", o.sys_step, "reach-game sys move bound without a next role");
        sub->add_option("--format", o.format, "human|json")->check(CLI::IsMember({"human", "json"}));
        sub->add_option("--emit", o.emit, "write SMT-LIB HORN text to PATH");
    };
    auto* gen = app.add_subcommand("gen", "print the generated Horn system");
    auto* emit = app.add_subcommand("emit", "print or write SMT-LIB HORN text");
    auto* solve_cmd = app.add_subcommand("solve", "solve the generated system");
    auto* certify = app.add_subcommand("certify", "check a model or a solve report against the system");
    auto* orc = app.add_subcommand("oracle", "explicit-state ground truth");
    for (auto* s : {gen, emit, solve_cmd, certify, orc}) common(s);
    solve_cmd->add_option("--budget-depth", o.depth, "maximum unfolding depth")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--budget-time", o.time, "wall-clock cap in seconds")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--deterministic", o.deterministic, "round-robin strategies (default true)");
    certify->add_option("--model,model", o.model, "model file or JSON solve report");
    orc->add_option("--query", o.query, "safety|termination|eu|game|noninterference");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }
    try {
        if (*gen) return cmd_gen(o);
        if (*emit) return cmd_emit(o);
        if (*solve_cmd) return cmd_solve(o);
        if (*certify) return cmd_certify(o);
        if (*orc) return cmd_oracle(o);
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const UnsupportedFragment& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return kInput;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 2;
    }
    return kUsage;
}
