#include "hornforge/generate.hpp"

#include <algorithm>

#include "hornforge/errors.hpp"

namespace hornforge {

std::string shadow(const std::string& name) { return name + ".w"; }

std::string unknown_name(const TransitionSystem& ts, const std::string& base) {
    std::string name = base;
    for (int k = 1; ts.find_var(name); ++k) name = base + "_" + std::to_string(k);
    return name;
}

namespace {

// State vector copies: v, v', v'', w, w'.
enum class Copy { V, V1, V2, W, W1 };

std::string copy_name(const std::string& x, Copy c) {
    switch (c) {
    case Copy::V: return x;
    case Copy::V1: return primed(x, 1);
    case Copy::V2: return primed(x, 2);
    case Copy::W: return shadow(x);
    case Copy::W1: return primed(shadow(x), 1);
    }
    return x;
}

class Builder {
public:
    Builder(const TransitionSystem& ts, std::string schema) : ts_(ts) {
        hs_.schema = std::move(schema);
        hs_.system = ts.name;
    }

    std::vector<SortedVar> state(Copy c) const {
        std::vector<SortedVar> out;
        for (const auto& v : ts_.vars) {
            SortedVar s = v;
            s.name = copy_name(v.name, c);
            out.push_back(s);
        }
        return out;
    }

    std::vector<SortedVar> states(std::initializer_list<Copy> copies) const {
        std::vector<SortedVar> out;
        for (Copy c : copies) {
            auto part = state(c);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }

    std::vector<std::string> names(Copy c) const {
        std::vector<std::string> out;
        for (const auto& v : ts_.vars) out.push_back(copy_name(v.name, c));
        return out;
    }

    /// Declares an unknown over one or two state copies; returns its name.
    std::string unknown(const std::string& base, bool binary) {
        PredicateSymbol p;
        p.name = unknown_name(ts_, base);
        p.params = binary ? states({Copy::V, Copy::V1}) : state(Copy::V);
        hs_.predicates.push_back(p);
        return p.name;
    }

    Atom atom(const std::string& pred, Copy a) const { return {pred, names(a)}; }
    Atom atom(const std::string& pred, Copy a, Copy b) const {
        auto args = names(a);
        auto rest = names(b);
        args.insert(args.end(), rest.begin(), rest.end());
        return {pred, args};
    }

    /// A state assertion evaluated on copy `c`.
    Formula unary(Role r, Copy c) const {
        RenameMap m;
        for (const auto& v : ts_.vars) m[v.name] = copy_name(v.name, c);
        return ts_.get(r).renamed(m);
    }

    /// A relational assertion evaluated on (a, b).
    Formula binary(Role r, Copy a, Copy b) const {
        RenameMap m;
        for (const auto& v : ts_.vars) {
            m[v.name] = copy_name(v.name, a);
            m[primed(v.name)] = copy_name(v.name, b);
        }
        return ts_.get(r).renamed(m);
    }

    void clause(std::vector<SortedVar> universals, std::vector<Atom> body, Formula constraint, Head head) {
        hs_.clauses.push_back({std::move(universals), std::move(body), std::move(constraint), std::move(head)});
    }

    void wf(const std::string& pred) { hs_.wf_marks.push_back(pred); }

    HornSystem done() { return std::move(hs_); }

private:
    const TransitionSystem& ts_;
    HornSystem hs_;
};

void require(const TransitionSystem& ts, Schema schema) {
    auto missing = validate_for(ts, schema);
    if (missing.empty()) return;
    std::string msg = "missing roles: ";
    for (std::size_t i = 0; i < missing.size(); ++i) msg += (i ? ", " : "") + std::string(role_name(missing[i]));
    throw InputError(msg + " (schema " + std::string(schema_name(schema)) + ")");
}

Formula low_eq(const std::vector<std::string>& vars, Copy a, Copy b) {
    std::vector<Formula> parts;
    for (const auto& x : vars)
        parts.push_back(Formula::atom(LinTerm::var(copy_name(x, a)) - LinTerm::var(copy_name(x, b)), Rel::Eq));
    return Formula::conj(parts);
}

} // namespace

HornSystem gen_safety_forward(const TransitionSystem& ts) {
    require(ts, Schema::SafetyFwd);
    Builder b(ts, "safety-fwd");
    auto inv = b.unknown("inv", false);
    b.clause(b.state(Copy::V), {}, b.unary(Role::Init, Copy::V), b.atom(inv, Copy::V));
    b.clause(b.states({Copy::V, Copy::V1}), {b.atom(inv, Copy::V)}, b.binary(Role::Next, Copy::V, Copy::V1),
             b.atom(inv, Copy::V1));
    b.clause(b.state(Copy::V), {b.atom(inv, Copy::V)}, negate(b.unary(Role::Safe, Copy::V)), FalseHead{});
    return b.done();
}

HornSystem gen_safety_backward(const TransitionSystem& ts, Variant variant) {
    require(ts, Schema::SafetyBwd);
    Builder b(ts, "safety-bwd");
    auto binv = b.unknown("binv", false);
    b.clause(b.state(Copy::V), {}, negate(b.unary(Role::Safe, Copy::V)), b.atom(binv, Copy::V));
    b.clause(b.states({Copy::V, Copy::V1}), {b.atom(binv, Copy::V1)}, b.binary(Role::Next, Copy::V, Copy::V1),
             b.atom(binv, Copy::V));
    Role side = variant == Variant::Corrected ? Role::Init : Role::Safe;
    b.clause(b.state(Copy::V), {b.atom(binv, Copy::V)}, b.unary(side, Copy::V), FalseHead{});
    return b.done();
}

HornSystem gen_safety_combined(const TransitionSystem& ts) {
    require(ts, Schema::SafetyComb);
    Builder b(ts, "safety-comb");
    auto inv = b.unknown("inv", false);
    auto binv = b.unknown("binv", false);
    b.clause(b.state(Copy::V), {}, b.unary(Role::Init, Copy::V), b.atom(inv, Copy::V));
    b.clause(b.states({Copy::V, Copy::V1}), {b.atom(inv, Copy::V)}, b.binary(Role::Next, Copy::V, Copy::V1),
             b.atom(inv, Copy::V1));
    b.clause(b.state(Copy::V), {}, negate(b.unary(Role::Safe, Copy::V)), b.atom(binv, Copy::V));
    b.clause(b.states({Copy::V, Copy::V1}), {b.atom(binv, Copy::V1)}, b.binary(Role::Next, Copy::V, Copy::V1),
             b.atom(binv, Copy::V));
    b.clause(b.state(Copy::V), {b.atom(inv, Copy::V), b.atom(binv, Copy::V)}, Formula::top(), FalseHead{});
    return b.done();
}

HornSystem gen_termination(const TransitionSystem& ts, Variant variant) {
    require(ts, Schema::Termination);
    if (variant == Variant::Literal && !ts.has(Role::Safe))
        throw InputError("missing roles: safe (literal termination variant)");
    Builder b(ts, "termination");
    auto inv = b.unknown("inv", false);
    auto round = b.unknown("round", true);
    std::string binv = variant == Variant::Literal ? b.unknown("binv", false) : "";
    b.clause(b.state(Copy::V), {}, b.unary(Role::Init, Copy::V), b.atom(inv, Copy::V));
    b.clause(b.states({Copy::V, Copy::V1}), {b.atom(inv, Copy::V)}, b.binary(Role::Next, Copy::V, Copy::V1),
             b.atom(inv, Copy::V1));
    if (variant == Variant::Literal)
        b.clause(b.state(Copy::V), {}, negate(b.unary(Role::Safe, Copy::V)), b.atom(binv, Copy::V));
    b.clause(b.states({Copy::V, Copy::V1}), {b.atom(inv, Copy::V)}, b.binary(Role::Next, Copy::V, Copy::V1),
             b.atom(round, Copy::V, Copy::V1));
    b.wf(round);
    return b.done();
}

HornSystem gen_noninterference(const TransitionSystem& ts, const SchemaConfig& cfg) {
    require(ts, Schema::Noninterference);
    for (const auto* list : {&cfg.low_in, &cfg.low_out})
        for (const auto& x : *list)
            if (!ts.find_var(x)) throw InputError("projection variable '" + x + "' is not declared");
    if (cfg.variant == Variant::Corrected && cfg.low_out.empty())
        throw InputError("noninterference needs a non-empty low-out projection");
    Builder b(ts, "noninterference");
    auto io = b.unknown("io", true);
    b.clause(b.states({Copy::V, Copy::V1}), {},
             b.unary(Role::Init, Copy::V) && b.binary(Role::Next, Copy::V, Copy::V1), b.atom(io, Copy::V, Copy::V1));
    b.clause(b.states({Copy::V, Copy::V1, Copy::V2}), {b.atom(io, Copy::V, Copy::V1)},
             b.binary(Role::Next, Copy::V1, Copy::V2), b.atom(io, Copy::V, Copy::V2));
    auto universals = b.states({Copy::V, Copy::V1, Copy::W, Copy::W1});
    std::vector<Atom> body{b.atom(io, Copy::V, Copy::V1), b.atom(io, Copy::W, Copy::W1)};
    if (cfg.variant == Variant::Literal) {
        auto all = ts.var_names();
        Formula differ = negate(low_eq(all, Copy::V, Copy::W));
        b.clause(universals, body,
                 Formula::conj({differ, b.unary(Role::Final, Copy::V), b.unary(Role::Final, Copy::W1),
                                negate(low_eq(all, Copy::W, Copy::W1))}),
                 FalseHead{});
    } else {
        b.clause(universals, body,
                 Formula::conj({low_eq(cfg.low_in, Copy::V, Copy::W), b.unary(Role::Final, Copy::V1),
                                b.unary(Role::Final, Copy::W1), negate(low_eq(cfg.low_out, Copy::V1, Copy::W1))}),
                 FalseHead{});
    }
    return b.done();
}

HornSystem gen_exists_until(const TransitionSystem& ts, Variant variant) {
    require(ts, Schema::ExistsUntil);
    Builder b(ts, "exists-until");
    auto inv = b.unknown("inv", false);
    auto round = b.unknown("round", true);
    b.clause(b.state(Copy::V), {}, b.unary(Role::Init, Copy::V), b.atom(inv, Copy::V));
    ExistsHead step{b.state(Copy::V1), {b.atom(inv, Copy::V1), b.atom(round, Copy::V, Copy::V1)},
                    b.binary(Role::Next, Copy::V, Copy::V1)};
    b.clause(b.state(Copy::V), {b.atom(inv, Copy::V)}, negate(b.unary(Role::Q, Copy::V)), step);
    Formula side = negate(b.unary(Role::P, Copy::V));
    if (variant == Variant::Corrected) side = negate(b.unary(Role::Q, Copy::V)) && side;
    b.clause(b.state(Copy::V), {b.atom(inv, Copy::V)}, side, FalseHead{});
    b.wf(round);
    return b.done();
}

std::optional<Formula> sys_candidate(const TransitionSystem& ts, const SchemaConfig& cfg) {
    if (ts.has(Role::Next)) return ts.get(Role::Next);
    if (!cfg.sys_step) return std::nullopt;
    std::vector<Formula> parts;
    for (const auto& v : ts.vars) {
        LinTerm d = LinTerm::var(primed(v.name)) - LinTerm::var(v.name);
        parts.push_back(Formula::atom(LinTerm(Rational(*cfg.sys_step)) - d, Rel::Ge));
        parts.push_back(Formula::atom(LinTerm(Rational(*cfg.sys_step)) + d, Rel::Ge));
    }
    return Formula::conj(parts);
}

HornSystem gen_reach_game(const TransitionSystem& ts, const SchemaConfig& cfg) {
    require(ts, Schema::ReachGame);
    Builder b(ts, "reach-game");
    auto inv = b.unknown("inv", false);
    auto round = b.unknown("round", true);
    auto sys = b.unknown("sys", true);
    b.clause(b.state(Copy::V), {}, b.unary(Role::Init, Copy::V), b.atom(inv, Copy::V));
    Formula move = Formula::top();
    if (auto cand = sys_candidate(ts, cfg)) {
        RenameMap m;
        for (const auto& v : ts.vars) {
            m[v.name] = primed(v.name, 1);
            m[primed(v.name, 1)] = primed(v.name, 2);
        }
        move = cand->renamed(m);
    }
    ExistsHead step{b.state(Copy::V2),
                    {b.atom(sys, Copy::V1, Copy::V2), b.atom(inv, Copy::V2), b.atom(round, Copy::V, Copy::V2)},
                    move};
    b.clause(b.states({Copy::V, Copy::V1}), {b.atom(inv, Copy::V)},
             negate(b.unary(Role::Goal, Copy::V)) && b.binary(Role::Env, Copy::V, Copy::V1), step);
    b.wf(round);
    return b.done();
}

HornSystem generate(const TransitionSystem& ts, Schema schema, const SchemaConfig& cfg) {
    switch (schema) {
    case Schema::SafetyFwd: return gen_safety_forward(ts);
    case Schema::SafetyBwd: return gen_safety_backward(ts, cfg.variant);
    case Schema::SafetyComb: return gen_safety_combined(ts);
    case Schema::Termination: return gen_termination(ts, cfg.variant);
    case Schema::Noninterference: return gen_noninterference(ts, cfg);
    case Schema::ExistsUntil: return gen_exists_until(ts, cfg.variant);
    case Schema::ReachGame: return gen_reach_game(ts, cfg);
    }
    throw InputError("unknown schema");
}

} // namespace hornforge
