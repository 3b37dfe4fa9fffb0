#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hornforge/certify.hpp"
#include "hornforge/errors.hpp"
#include "hornforge/generate.hpp"
#include "hornforge/horn.hpp"
#include "hornforge/program.hpp"
#include "hornforge/report.hpp"
#include "hornforge/solve.hpp"

namespace py = pybind11;
using namespace hornforge;

namespace {

SchemaConfig make_config(const std::string& variant, const std::vector<std::string>& low_in,
                         const std::vector<std::string>& low_out, std::optional<std::int64_t> sys_step) {
    SchemaConfig cfg;
    if (variant == "literal") cfg.variant = Variant::Literal;
    else if (variant != "corrected") throw InputError("unknown variant '" + variant + "'");
    cfg.low_in = low_in;
    cfg.low_out = low_out;
    cfg.sys_step = sys_step;
    return cfg;
}

// A generated system together with the program and options it came from.
struct Problem {
    TransitionSystem ts;
    SchemaConfig cfg;
    HornSystem hs;
};

py::dict verdict_dict(const Problem& p, const Verdict& v) {
    py::dict d;
    d["status"] = std::string(status_name(v.status));
    d["strategy"] = v.strategy;
    d["reason"] = v.reason;
    d["model"] = v.model ? py::cast(model_to_text(p.hs, *v.model)) : py::none();
    d["json"] = verdict_json(p.hs, v, {"", p.hs.schema, p.cfg.variant == Variant::Literal ? "literal" : "corrected"});
    if (v.refutation && std::holds_alternative<Derivation>(*v.refutation))
        d["trace"] = derivation_trace(p.hs, std::get<Derivation>(*v.refutation));
    else
        d["trace"] = std::vector<std::string>{};
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Horn-constraint generation, solving and certification";

    static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
    static py::exception<ResourceError> resource_error(m, "ResourceError", PyExc_RuntimeError);
    static py::exception<UnsupportedFragment> unsupported(m, "UnsupportedFragment", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InputError& e) {
            input_error(e.what());
        } catch (const ResourceError& e) {
            resource_error(e.what());
        } catch (const UnsupportedFragment& e) {
            unsupported(e.what());
        }
    });

    py::class_<TransitionSystem>(m, "TransitionSystem")
        .def_readonly("name", &TransitionSystem::name)
        .def_property_readonly("vars", &TransitionSystem::var_names)
        .def_property_readonly("roles",
                               [](const TransitionSystem& ts) {
                                   std::vector<std::string> out;
                                   for (const auto& [r, _] : ts.assertions) out.emplace_back(role_name(r));
                                   return out;
                               })
        .def("bounded", &TransitionSystem::all_bounded_int)
        .def("source", [](const TransitionSystem& ts) { return to_source(ts); });

    m.def("parse_program", [](const std::string& text) { return parse_program(text); }, py::arg("text"));

    py::class_<Problem>(m, "HornSystem")
        .def_property_readonly("schema", [](const Problem& p) { return p.hs.schema; })
        .def_property_readonly("clause_count", [](const Problem& p) { return p.hs.clauses.size(); })
        .def_property_readonly("predicates",
                               [](const Problem& p) {
                                   std::vector<std::string> out;
                                   for (const auto& s : p.hs.predicates) out.push_back(s.name);
                                   return out;
                               })
        .def_property_readonly("wf_marks", [](const Problem& p) { return p.hs.wf_marks; })
        .def("text", [](const Problem& p) { return to_text(p.hs); })
        .def("smtlib", [](const Problem& p) { return emit_smtlib(p.hs); })
        .def("round_trips", [](const Problem& p) { return isomorphic(parse_smtlib_horn(emit_smtlib(p.hs)), p.hs); });

    m.def(
        "generate",
        [](const TransitionSystem& ts, const std::string& schema, const std::string& variant,
           const std::vector<std::string>& low_in, const std::vector<std::string>& low_out,
           std::optional<std::int64_t> sys_step) {
            Problem p{ts, make_config(variant, low_in, low_out, sys_step), {}};
            p.hs = generate(p.ts, schema_from_name(schema), p.cfg);
            return p;
        },
        py::arg("ts"), py::arg("schema"), py::arg("variant") = "corrected", py::arg("low_in") = std::vector<std::string>{},
        py::arg("low_out") = std::vector<std::string>{}, py::arg("sys_step") = std::nullopt);

    m.def(
        "solve",
        [](const Problem& p, std::size_t depth, double time_limit, bool deterministic) {
            SolveOptions opts;
            opts.budget.max_depth = depth;
            opts.budget.time_limit = time_limit;
            opts.deterministic = deterministic;
            opts.ts = &p.ts;
            opts.cfg = p.cfg;
            Verdict v;
            {
                py::gil_scoped_release release;
                v = solve(p.hs, opts);
            }
            return verdict_dict(p, v);
        },
        py::arg("system"), py::arg("depth") = 25, py::arg("time_limit") = 30.0, py::arg("deterministic") = true);

    m.def(
        "certify",
        [](const Problem& p, const std::string& model_text) {
            std::vector<std::pair<std::string, bool>> out;
            for (const auto& r : check_model(p.hs, parse_model(model_text, p.hs))) out.emplace_back(r.label, r.holds);
            return out;
        },
        py::arg("system"), py::arg("model"));

    m.def(
        "oracle",
        [](const TransitionSystem& ts, const std::string& query, const std::vector<std::string>& low_in,
           const std::vector<std::string>& low_out, std::optional<std::int64_t> sys_step) {
            auto v = oracle(ts, query_from_name(query), make_config("corrected", low_in, low_out, sys_step));
            py::dict d;
            d["holds"] = v.holds;
            d["states"] = v.states;
            d["reachable"] = v.reachable;
            d["trace"] = v.trace;
            d["trace_b"] = v.trace_b;
            d["winning"] = v.winning.size();
            return d;
        },
        py::arg("ts"), py::arg("query"), py::arg("low_in") = std::vector<std::string>{},
        py::arg("low_out") = std::vector<std::string>{}, py::arg("sys_step") = std::nullopt);
}
