#include <algorithm>

#include "hornforge/certify.hpp"
#include "hornforge/errors.hpp"
#include "solve_internal.hpp"

namespace hornforge::detail {
namespace {

struct Itv {
    std::optional<Rational> lo, hi;  // nullopt = unbounded
    friend bool operator==(const Itv&, const Itv&) = default;
};

using IBox = std::optional<std::vector<Itv>>;  // nullopt = empty
using Env = std::map<std::string, IBox>;

Itv hull(const Itv& a, const Itv& b) {
    Itv r;
    if (a.lo && b.lo) r.lo = std::min(*a.lo, *b.lo);
    if (a.hi && b.hi) r.hi = std::max(*a.hi, *b.hi);
    return r;
}

IBox join(const IBox& a, const IBox& b) {
    if (!a) return b;
    if (!b) return a;
    std::vector<Itv> out;
    for (std::size_t i = 0; i < a->size(); ++i) out.push_back(hull((*a)[i], (*b)[i]));
    return out;
}

std::vector<LinConstraint> itv_constraints(const std::string& v, const Itv& i) {
    std::vector<LinConstraint> out;
    if (i.lo) out.push_back({LinTerm::var(v) - LinTerm(*i.lo), Rel::Ge});
    if (i.hi) out.push_back({LinTerm(*i.hi) - LinTerm::var(v), Rel::Ge});
    return out;
}

// Bounds of `var` over the cube, which mentions no other variable.
Itv bounds_of(const std::string& var, const Cube& projected, bool integer) {
    Itv r;
    for (const auto& c : projected.constraints) {
        Rational a = c.term.coeff(var);
        if (a == 0) continue;
        Rational b = -c.term.constant() / a;  // a*x + k REL 0 -> x vs -k/a
        auto lower = [&](const Rational& v) {
            if (!r.lo || v > *r.lo) r.lo = v;
        };
        auto upper = [&](const Rational& v) {
            if (!r.hi || v < *r.hi) r.hi = v;
        };
        if (c.rel == Rel::Eq) {
            lower(b);
            upper(b);
        } else if (a > 0) {
            lower(b);
        } else {
            upper(b);
        }
    }
    if (integer) {
        if (r.lo) r.lo = Rational(ceil_of(*r.lo));
        if (r.hi) r.hi = Rational(floor_of(*r.hi));
    }
    return r;
}

class Intervals {
public:
    Intervals(const HornSystem& hs, const Caps& caps) : hs_(hs), caps_(caps) {
        for (const auto& c : hs.clauses) cubes_.push_back(dnf(bounds_formula(c.universals) && c.body_constraint, caps));
    }

    // One application of every fact/rule clause.
    Env apply(const Env& x) const {
        Env out;
        for (const auto& p : hs_.predicates) out[p.name] = std::nullopt;
        for (std::size_t ci = 0; ci < hs_.clauses.size(); ++ci) {
            const Clause& c = hs_.clauses[ci];
            const auto* head = std::get_if<Atom>(&c.head);
            if (!head) continue;
            std::vector<LinConstraint> extra;
            bool empty = false;
            for (const auto& a : c.body_atoms) {
                const IBox& b = x.at(a.pred);
                if (!b) {
                    empty = true;
                    break;
                }
                for (std::size_t i = 0; i < a.args.size(); ++i)
                    for (auto& k : itv_constraints(a.args[i], (*b)[i])) extra.push_back(std::move(k));
            }
            if (empty) continue;
            VarSet ints = int_vars_of(c.universals);
            const PredicateSymbol* hp = hs_.find(head->pred);
            for (const auto& body : cubes_[ci]) {
                Cube cube = body;
                cube.constraints.insert(cube.constraints.end(), extra.begin(), extra.end());
                auto t = tighten_integer(cube, ints);
                if (!t || !std::holds_alternative<Assignment>(sat_cube(*t, caps_))) continue;
                std::vector<Itv> box;
                for (std::size_t j = 0; j < head->args.size(); ++j) {
                    const std::string& arg = head->args[j];
                    std::vector<std::string> elim;
                    for (const auto& v : t->vars())
                        if (v != arg) elim.push_back(v);
                    box.push_back(bounds_of(arg, eliminate(elim, *t, caps_), hp->params[j].sort == Sort::Int));
                }
                out[head->pred] = join(out[head->pred], box);
            }
        }
        return out;
    }

private:
    const HornSystem& hs_;
    Caps caps_;
    std::vector<std::vector<Cube>> cubes_;
};

Itv widen(const Itv& old, const Itv& next) {
    Itv r = next;
    if (old.lo && next.lo && *next.lo < *old.lo) r.lo.reset();
    if (old.hi && next.hi && *next.hi > *old.hi) r.hi.reset();
    if (!old.lo) r.lo.reset();
    if (!old.hi) r.hi.reset();
    return r;
}

} // namespace

std::optional<Model> kleene_impl(const HornSystem& hs, const Budget& budget, const Caps& caps, const Deadline& dl) {
    if (hs.has_exists()) return std::nullopt;
    Intervals f(hs, caps);
    Env x;
    std::map<std::string, std::size_t> growth;
    for (const auto& p : hs.predicates) x[p.name] = std::nullopt;
    bool stable = false;
    for (std::size_t it = 0; it < budget.max_iterations && !dl.expired(); ++it) {
        Env y = f.apply(x);
        Env next;
        bool changed = false;
        for (const auto& [pred, box] : x) {
            IBox j = join(box, y.at(pred));
            if (j != box) {
                changed = true;
                if (box && ++growth[pred] > budget.widening_delay) {
                    for (std::size_t i = 0; i < j->size(); ++i) (*j)[i] = widen((*box)[i], (*j)[i]);
                }
            }
            next[pred] = j;
        }
        x = std::move(next);
        if (!changed) {
            stable = true;
            break;
        }
    }
    if (!stable) return std::nullopt;
    // one descending pass: the image of a post-fixpoint is again one
    x = f.apply(x);

    Model m;
    for (const auto& p : hs.predicates) {
        if (p.kind != PredKind::Unknown) continue;
        const IBox& b = x.at(p.name);
        if (!b) {
            m.interp[p.name] = Formula::bottom();
            continue;
        }
        std::vector<Formula> parts;
        for (std::size_t i = 0; i < p.arity(); ++i)
            for (const auto& c : itv_constraints(p.params[i].name, (*b)[i])) parts.push_back(Formula::atom(c));
        m.interp[p.name] = Formula::conj(parts);
    }
    if (!all_hold(check_model(hs, m, caps))) return std::nullopt;
    return m;
}

} // namespace hornforge::detail

namespace hornforge {

std::optional<Model> kleene_intervals(const HornSystem& hs, const Budget& budget, const Caps& caps) {
    Deadline dl(budget.time_limit);
    try {
        return detail::kleene_impl(hs, budget, caps, dl);
    } catch (const ResourceError&) {
        return std::nullopt;
    }
}

} // namespace hornforge
