#include "hornforge/report.hpp"

#include <json.hpp>
#include <sstream>

#include "hornforge/errors.hpp"

namespace hornforge {
namespace {

using json = nlohmann::ordered_json;

json number(const Rational& q) {
    if (is_integer(q) && q.get_num().fits_slong_p()) return q.get_num().get_si();
    return to_string(q);
}

Rational rational_of(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) {
        Rational q;
        if (q.set_str(j.get<std::string>(), 10) != 0) throw InputError("bad number '" + j.get<std::string>() + "'");
        q.canonicalize();
        return q;
    }
    throw InputError("expected a number");
}

std::string label(std::size_t i) { return "c" + std::to_string(i + 1); }

std::size_t clause_of(const json& j, const HornSystem& hs) {
    auto s = j.get<std::string>();
    if (s.size() < 2 || s[0] != 'c') throw InputError("bad clause label '" + s + "'");
    std::size_t n = std::stoul(s.substr(1));
    if (n == 0 || n > hs.clauses.size()) throw InputError("clause label out of range '" + s + "'");
    return n - 1;
}

json node_json(const DerivationNode& n) {
    json values = json::object();
    for (const auto& [k, v] : n.assignment) values[k] = number(v);
    json children = json::array();
    for (const auto& c : n.children) children.push_back(node_json(c));
    return json{{"clause", label(n.clause)}, {"values", values}, {"children", children}};
}

DerivationNode node_from(const json& j, const HornSystem& hs) {
    DerivationNode n;
    n.clause = clause_of(j.at("clause"), hs);
    for (const auto& [k, v] : j.at("values").items()) n.assignment[k] = rational_of(v);
    for (const auto& c : j.at("children")) n.children.push_back(node_from(c, hs));
    return n;
}

json state_json(const std::vector<std::int64_t>& s) { return json(s); }

std::string state_text(const std::vector<std::int64_t>& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + std::to_string(s[i]);
    return out + ")";
}

std::string fact_text(const HornSystem& hs, const DerivationNode& n) {
    const Clause& c = hs.clauses[n.clause];
    const auto* a = std::get_if<Atom>(&c.head);
    if (!a) return "false";
    std::string out = a->pred + "(";
    auto vals = atom_values(*a, n.assignment);
    for (std::size_t i = 0; i < vals.size(); ++i) out += (i ? ", " : "") + to_string(vals[i]);
    return out + ")";
}

json refutation_json(const Refutation& r) {
    if (const auto* d = std::get_if<Derivation>(&r)) {
        return json{{"kind", "derivation"}, {"root", d->root ? node_json(*d->root) : json(nullptr)}};
    }
    if (const auto* l = std::get_if<Lasso>(&r)) {
        json cycle = json::array();
        for (const auto& n : l->cycle) cycle.push_back(node_json(n));
        return json{{"kind", "lasso"}, {"predicate", l->pred}, {"cycle", cycle}};
    }
    const auto& t = std::get<TrapEvidence>(r);
    json losing = json::array();
    for (const auto& s : t.losing) losing.push_back(state_json(s));
    json counter = json::array();
    for (const auto& [s, m] : t.counter) counter.push_back(json{{"state", s}, {"move", m}});
    return json{{"kind", "trap"}, {"vars", t.vars}, {"initial", t.initial}, {"losing", losing}, {"counter", counter}};
}

Refutation refutation_from(const json& j, const HornSystem& hs) {
    auto kind = j.at("kind").get<std::string>();
    if (kind == "derivation") {
        Derivation d;
        if (!j.at("root").is_null()) d.root = node_from(j.at("root"), hs);
        return d;
    }
    if (kind == "lasso") {
        Lasso l;
        l.pred = j.at("predicate").get<std::string>();
        for (const auto& n : j.at("cycle")) l.cycle.push_back(node_from(n, hs));
        return l;
    }
    if (kind == "trap") {
        TrapEvidence t;
        t.vars = j.at("vars").get<std::vector<std::string>>();
        t.initial = j.at("initial").get<std::vector<std::int64_t>>();
        t.losing = j.at("losing").get<std::vector<std::vector<std::int64_t>>>();
        for (const auto& c : j.at("counter"))
            t.counter[c.at("state").get<std::vector<std::int64_t>>()] = c.at("move").get<std::vector<std::int64_t>>();
        return t;
    }
    throw InputError("unknown refutation kind '" + kind + "'");
}

json counters_json(const std::map<std::string, std::uint64_t>& c) {
    json out = json::object();
    for (const auto& [k, v] : c) out[k] = v;
    return out;
}

} // namespace

std::vector<std::string> derivation_trace(const HornSystem& hs, const Derivation& d) {
    std::vector<std::string> out;
    if (!d.root) return out;
    std::vector<const DerivationNode*> spine;
    for (const DerivationNode* n = &*d.root; n; n = n->children.empty() ? nullptr : &n->children.front())
        spine.push_back(n);
    for (auto it = spine.rbegin(); it != spine.rend(); ++it) out.push_back(fact_text(hs, **it));
    return out;
}

std::string verdict_json(const HornSystem& hs, const Verdict& v, const RunInfo& info) {
    json j;
    j["command"] = "solve";
    j["file"] = info.file;
    j["system"] = hs.system;
    j["schema"] = info.schema.empty() ? hs.schema : info.schema;
    j["variant"] = info.variant;
    j["status"] = std::string(status_name(v.status));
    j["strategy"] = v.strategy;
    j["reason"] = v.reason;
    j["model"] = v.model ? json(model_to_text(hs, *v.model)) : json(nullptr);
    j["refutation"] = v.refutation ? refutation_json(*v.refutation) : json(nullptr);
    if (v.refutation && std::holds_alternative<Derivation>(*v.refutation))
        j["trace"] = derivation_trace(hs, std::get<Derivation>(*v.refutation));
    else
        j["trace"] = json::array();
    j["counters"] = counters_json(v.counters);
    return j.dump(2) + "\n";
}

std::string verdict_human(const HornSystem& hs, const Verdict& v) {
    std::ostringstream out;
    out << status_name(v.status) << "\n";
    out << "strategy: " << v.strategy << "\n";
    if (v.status == Status::Unknown) out << "reason: " << v.reason << "\n";
    if (v.model) out << "model:\n" << model_to_text(hs, *v.model);
    if (v.refutation) {
        if (const auto* d = std::get_if<Derivation>(&*v.refutation)) {
            auto trace = derivation_trace(hs, *d);
            out << "derivation of false from " << (trace.empty() ? 0 : trace.size() - 1) << " facts:\n";
            for (std::size_t i = 0; i < trace.size(); ++i) out << "  " << i << ": " << trace[i] << "\n";
        } else if (const auto* l = std::get_if<Lasso>(&*v.refutation)) {
            out << "lasso through " << l->pred << " (" << l->cycle.size() << " steps):\n";
            for (const auto& n : l->cycle) out << "  " << fact_text(hs, n) << "\n";
        } else {
            const auto& t = std::get<TrapEvidence>(*v.refutation);
            out << "trap of " << t.losing.size() << " states containing initial state " << state_text(t.initial)
                << "\n";
            for (const auto& [s, m] : t.counter) out << "  env " << state_text(s) << " -> " << state_text(m) << "\n";
        }
    }
    return out.str();
}

std::string reports_json(const std::vector<ClauseReport>& reports, const RunInfo& info) {
    json j;
    j["command"] = "certify";
    j["file"] = info.file;
    j["schema"] = info.schema;
    j["variant"] = info.variant;
    j["certified"] = all_hold(reports);
    json list = json::array();
    for (const auto& r : reports) {
        json w = json(nullptr);
        if (r.counterwitness) {
            w = json::object();
            for (const auto& [k, v] : *r.counterwitness) w[k] = number(v);
        }
        list.push_back(json{{"clause", r.label}, {"holds", r.holds}, {"counterwitness", w}, {"reason", r.reason}});
    }
    j["clauses"] = list;
    return j.dump(2) + "\n";
}

std::string reports_human(const std::vector<ClauseReport>& reports) {
    std::ostringstream out;
    for (const auto& r : reports) {
        out << r.label << ": " << (r.holds ? "holds" : "FAILS");
        if (!r.holds && !r.reason.empty()) out << " (" << r.reason << ")";
        if (r.counterwitness) {
            out << " at";
            for (const auto& [k, v] : *r.counterwitness) out << " " << k << "=" << to_string(v);
        }
        out << "\n";
    }
    out << (all_hold(reports) ? "CERTIFIED" : "REJECTED") << "\n";
    return out.str();
}

std::string oracle_json(const OracleVerdict& o, const std::string& file) {
    json j;
    j["command"] = "oracle";
    j["file"] = file;
    j["query"] = std::string(query_name(o.query));
    j["holds"] = o.holds;
    j["vars"] = o.vars;
    j["states"] = o.states;
    j["reachable"] = o.reachable;
    j["trace"] = o.trace;
    j["loop_start"] = o.loop_start;
    j["trace_b"] = o.trace_b;
    j["winning"] = o.winning;
    j["counter_play"] = o.counter_play;
    return j.dump(2) + "\n";
}

std::string oracle_human(const OracleVerdict& o) {
    std::ostringstream out;
    out << query_name(o.query) << ": " << (o.holds ? "HOLDS" : "FAILS") << "\n";
    out << "states: " << o.states << "\n";
    if (o.query == Query::Safety || o.query == Query::Termination) out << "reachable: " << o.reachable << "\n";
    std::string vars = "(";
    for (std::size_t i = 0; i < o.vars.size(); ++i) vars += (i ? ", " : "") + o.vars[i];
    vars += ")";
    auto print = [&](const char* title, const std::vector<State>& t) {
        if (t.empty()) return;
        out << title << " " << vars << ":\n";
        for (std::size_t i = 0; i < t.size(); ++i) {
            out << "  " << i << ": " << state_text(t[i]);
            if (o.query == Query::Termination && !o.holds && i == o.loop_start) out << "  <- loop";
            out << "\n";
        }
    };
    print(o.query == Query::Noninterference ? "run a" : "trace", o.trace);
    print("run b", o.trace_b);
    print("counter play", o.counter_play);
    if (!o.winning.empty()) out << "winning states: " << o.winning.size() << "\n";
    return out.str();
}

EmbeddedCertificate read_verdict_json(std::string_view text, const HornSystem& hs) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("not a JSON report: ") + e.what());
    }
    try {
        EmbeddedCertificate c;
        c.status = j.at("status").get<std::string>();
        if (!j.at("model").is_null()) c.model = parse_model(j.at("model").get<std::string>(), hs);
        if (!j.at("refutation").is_null()) c.refutation = refutation_from(j.at("refutation"), hs);
        return c;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed solve report: ") + e.what());
    }
}

} // namespace hornforge
