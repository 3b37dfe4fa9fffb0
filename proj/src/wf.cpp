#include "hornforge/wf.hpp"

#include <algorithm>

#include "hornforge/errors.hpp"
#include "hornforge/horn.hpp"

namespace hornforge {
namespace {

bool is_primed(const std::string& name) { return !name.empty() && name.back() == '\''; }

std::string base_of(const std::string& name) {
    std::string s = name;
    while (is_primed(s)) s.pop_back();
    return s;
}

std::vector<std::string> state_of(const std::vector<Cube>& rels) {
    VarSet s;
    for (const auto& c : rels)
        for (const auto& v : c.vars()) s.insert(base_of(v));
    return {s.begin(), s.end()};
}

VarSet with_primes(const VarSet& ints) {
    VarSet out = ints;
    for (const auto& v : ints) out.insert(primed(base_of(v)));
    return out;
}

// Farkas-dual encoding of "every point of the closure of `rel` satisfies
// sum_z coeff[z]*z + constant >= 0", appended to `lp` as constraints over
// fresh multiplier unknowns.
class DualLp {
public:
    void require_nonneg(const Cube& rel, const std::vector<std::string>& zvars,
                        const std::map<std::string, LinTerm>& coeff, const LinTerm& constant) {
        std::vector<std::string> mult;
        for (const auto& row : rel.constraints) {
            std::string u = "u" + std::to_string(fresh_++);
            mult.push_back(u);
            if (row.rel != Rel::Eq) rows_.push_back({LinTerm::var(u), Rel::Ge});
        }
        for (const auto& z : zvars) {
            auto it = coeff.find(z);
            LinTerm e = it == coeff.end() ? LinTerm() : it->second;
            for (std::size_t j = 0; j < rel.constraints.size(); ++j) {
                Rational a = rel.constraints[j].term.coeff(z);
                if (a != 0) e -= LinTerm::var(mult[j], a);
            }
            rows_.push_back({e, Rel::Eq});
        }
        std::string mu = "u" + std::to_string(fresh_++);
        rows_.push_back({LinTerm::var(mu), Rel::Ge});
        LinTerm e = constant - LinTerm::var(mu);
        for (std::size_t j = 0; j < rel.constraints.size(); ++j) {
            const Rational& c = rel.constraints[j].term.constant();
            if (c != 0) e -= LinTerm::var(mult[j], c);
        }
        rows_.push_back({e, Rel::Eq});
    }

    std::optional<Assignment> solve(const Caps& caps) const {
        auto r = sat_cube(Cube{rows_}, caps);
        if (auto* a = std::get_if<Assignment>(&r)) return *a;
        return std::nullopt;
    }

private:
    std::vector<LinConstraint> rows_;
    int fresh_ = 0;
};

std::string rvar(const std::string& x) { return "r:" + x; }

// Coefficient maps over state and successor copies for the three conditions.
std::map<std::string, LinTerm> bound_coeffs(const std::vector<std::string>& state) {
    std::map<std::string, LinTerm> m;
    for (const auto& x : state) m[x] = LinTerm::var(rvar(x));
    return m;
}

std::map<std::string, LinTerm> delta_coeffs(const std::vector<std::string>& state) {
    std::map<std::string, LinTerm> m;
    for (const auto& x : state) {
        m[x] = LinTerm::var(rvar(x));
        m[primed(x)] = LinTerm::var(rvar(x), -1);
    }
    return m;
}

std::vector<std::string> zvars_of(const std::vector<std::string>& state, const Cube& rel) {
    VarSet z(state.begin(), state.end());
    for (const auto& x : state) z.insert(primed(x));
    for (const auto& v : rel.vars()) z.insert(v);
    return {z.begin(), z.end()};
}

/// Closure of the integer-tightened relation; nullopt when it is empty.
std::optional<Cube> prepared(const Cube& rel, const VarSet& int_vars, const Caps& caps) {
    std::optional<Cube> c = int_vars.empty() ? std::optional<Cube>(rel) : tighten_integer(rel, with_primes(int_vars));
    if (!c) return std::nullopt;
    for (auto& row : c->constraints)
        if (row.rel == Rel::Gt) row.rel = Rel::Ge;
    if (std::holds_alternative<FarkasCertificate>(sat_cube(*c, caps))) return std::nullopt;
    return c;
}

AffineRank extract(const Assignment& w, const std::vector<std::string>& state) {
    LinTerm t(w.count("r0") ? w.at("r0") : Rational(0));
    for (const auto& x : state) {
        auto it = w.find(rvar(x));
        if (it != w.end() && it->second != 0) t.add(x, it->second);
    }
    return {t};
}

/// A rank bounded and decreasing on `strict`, non-increasing on `weak`.
std::optional<AffineRank> dual_rank(const Cube& strict, const std::vector<Cube>& weak,
                                    const std::vector<std::string>& state, const Caps& caps) {
    DualLp lp;
    lp.require_nonneg(strict, zvars_of(state, strict), bound_coeffs(state), LinTerm::var("r0"));
    lp.require_nonneg(strict, zvars_of(state, strict), delta_coeffs(state), LinTerm(Rational(-1)));
    for (const auto& w : weak) lp.require_nonneg(w, zvars_of(state, w), delta_coeffs(state), LinTerm());
    auto sol = lp.solve(caps);
    if (!sol) return std::nullopt;
    return extract(*sol, state);
}

Formula ge0(const LinTerm& t) { return Formula::atom(t, Rel::Ge); }

RenameMap prime_map(const std::vector<std::string>& state) {
    RenameMap m;
    for (const auto& x : state) m[x] = primed(x);
    return m;
}

bool bounded_decrease(const Formula& dom, const LinTerm& f, const RenameMap& pm, const VarSet& ints,
                      const Caps& caps) {
    return valid_mixed(implies(dom, ge0(f) && ge0(f - f.renamed(pm) - LinTerm(Rational(1)))), ints, caps);
}

bool non_increasing(const Formula& dom, const LinTerm& f, const RenameMap& pm, const VarSet& ints, const Caps& caps) {
    return valid_mixed(implies(dom, ge0(f - f.renamed(pm))), ints, caps);
}

} // namespace

std::optional<AffineRank> pr_synthesize(const Cube& rel, const VarSet& int_vars, const Caps& caps) {
    auto state = state_of({rel});
    auto c = prepared(rel, int_vars, caps);
    if (!c) return AffineRank{LinTerm()};
    auto r = dual_rank(*c, {}, state, caps);
    if (!r) return std::nullopt;
    std::vector<SortedVar> sv;
    for (const auto& x : state) sv.push_back({x, int_vars.count(x) ? Sort::Int : Sort::Rat, std::nullopt});
    if (!check_rank(rel.to_formula(), *r, sv, caps)) return std::nullopt;
    return r;
}

std::optional<AffineRank> pr_synthesize(const Formula& rel, const VarSet& int_vars, const Caps& caps) {
    auto cubes = dnf(rel, caps);
    if (cubes.size() > 1) throw InputError("pr_synthesize needs a conjunctive relation; use lex_synthesize");
    return pr_synthesize(cubes.empty() ? Cube{{LinConstraint{LinTerm(Rational(-1)), Rel::Ge}}} : cubes.front(),
                         int_vars, caps);
}

std::optional<LexRank> lex_synthesize(const std::vector<Cube>& disjuncts, const VarSet& int_vars, const Caps& caps) {
    auto state = state_of(disjuncts);
    VarSet ints = with_primes(int_vars);
    std::vector<Cube> remaining;
    for (const auto& d : disjuncts)
        if (auto c = prepared(d, int_vars, caps)) remaining.push_back(*c);
    RenameMap pm = prime_map(state);
    LexRank out;
    while (!remaining.empty()) {
        std::optional<AffineRank> found;
        for (std::size_t k = 0; k < remaining.size() && !found; ++k) {
            std::vector<Cube> others;
            for (std::size_t j = 0; j < remaining.size(); ++j)
                if (j != k) others.push_back(remaining[j]);
            found = dual_rank(remaining[k], others, state, caps);
        }
        if (!found) return std::nullopt;
        std::vector<Cube> rest;
        for (const auto& d : remaining)
            if (!bounded_decrease(d.to_formula(), found->term, pm, ints, caps)) rest.push_back(d);
        if (rest.size() == remaining.size()) return std::nullopt;
        out.components.push_back(*found);
        remaining = std::move(rest);
    }
    std::vector<SortedVar> sv;
    for (const auto& x : state) sv.push_back({x, int_vars.count(x) ? Sort::Int : Sort::Rat, std::nullopt});
    std::vector<Formula> parts;
    for (const auto& d : disjuncts) parts.push_back(d.to_formula());
    if (!check_rank(Formula::disj(parts), out, sv, caps)) return std::nullopt;
    return out;
}

bool check_rank(const Formula& round, const RankWitness& rank, const std::vector<SortedVar>& state_in,
                const Caps& caps) {
    std::vector<SortedVar> state = state_in;
    if (state.empty()) {
        VarSet names;
        auto collect = [&](const LinTerm& t) {
            for (const auto& v : t.vars()) names.insert(v);
        };
        if (const auto* a = std::get_if<AffineRank>(&rank)) collect(a->term);
        if (const auto* l = std::get_if<LexRank>(&rank))
            for (const auto& c : l->components) collect(c.term);
        for (const auto& v : round.vars()) names.insert(base_of(v));
        for (const auto& n : names) state.push_back({n, Sort::Rat, std::nullopt});
    }
    std::vector<std::string> names;
    std::vector<SortedVar> both = state;
    for (const auto& v : state) {
        names.push_back(v.name);
        SortedVar p = v;
        p.name = primed(v.name);
        both.push_back(p);
    }
    VarSet ints = int_vars_of(both);
    Formula dom = round && bounds_formula(both);
    RenameMap pm = prime_map(names);

    if (const auto* a = std::get_if<AffineRank>(&rank)) return bounded_decrease(dom, a->term, pm, ints, caps);

    if (const auto* l = std::get_if<LexRank>(&rank)) {
        for (const auto& cube : dnf(dom, caps)) {
            Formula d = cube.to_formula();
            if (!find_model(d, ints, caps)) continue;
            bool ok = false;
            for (const auto& comp : l->components) {
                if (bounded_decrease(d, comp.term, pm, ints, caps)) {
                    ok = true;
                    break;
                }
                if (!non_increasing(d, comp.term, pm, ints, caps)) break;
            }
            if (!ok) return false;
        }
        return true;
    }

    const auto& table = std::get<TableRank>(rank);
    if (!all_bounded_int(state)) return false;
    std::vector<std::string> order;
    for (const auto& v : both) order.push_back(v.name);
    bool ok = true;
    std::size_t n = state.size();
    enumerate_solutions(
        dom, order, box_of(both),
        [&](const Assignment& a) {
            std::vector<std::int64_t> s, t;
            for (std::size_t i = 0; i < n; ++i) {
                s.push_back(a.at(order[i]).get_num().get_si());
                t.push_back(a.at(order[i + n]).get_num().get_si());
            }
            auto is = table.values.find(s);
            auto it = table.values.find(t);
            if (is == table.values.end() || it == table.values.end() || is->second < 0 || is->second - it->second < 1)
                ok = false;
            return ok;
        },
        caps.product_points, caps);
    return ok;
}

} // namespace hornforge
