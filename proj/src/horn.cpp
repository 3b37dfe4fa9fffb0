#include "hornforge/horn.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hornforge {

const SortedVar* Clause::find_universal(const std::string& name) const {
    for (const auto& v : universals)
        if (v.name == name) return &v;
    return nullptr;
}

const PredicateSymbol* HornSystem::find(const std::string& name) const {
    for (const auto& p : predicates)
        if (p.name == name) return &p;
    return nullptr;
}

bool HornSystem::has_exists() const {
    return std::any_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.has_exists(); });
}

bool HornSystem::is_wf(const std::string& pred) const {
    return std::find(wf_marks.begin(), wf_marks.end(), pred) != wf_marks.end();
}

Formula bounds_formula(const std::vector<SortedVar>& vars) {
    std::vector<Formula> parts;
    for (const auto& v : vars) {
        if (!v.bounds) continue;
        parts.push_back(Formula::atom(LinTerm::var(v.name) - LinTerm(Rational(v.bounds->first)), Rel::Ge));
        parts.push_back(Formula::atom(LinTerm(Rational(v.bounds->second)) - LinTerm::var(v.name), Rel::Ge));
    }
    return Formula::conj(parts);
}

VarSet int_vars_of(const std::vector<SortedVar>& vars) {
    VarSet out;
    for (const auto& v : vars)
        if (v.sort == Sort::Int) out.insert(v.name);
    return out;
}

Box box_of(const std::vector<SortedVar>& vars) {
    Box out;
    for (const auto& v : vars)
        if (v.bounds) out[v.name] = *v.bounds;
    return out;
}

bool all_bounded_int(const std::vector<SortedVar>& vars) {
    return std::all_of(vars.begin(), vars.end(),
                       [](const SortedVar& v) { return v.sort == Sort::Int && v.bounds.has_value(); });
}

// ---------------------------------------------------------------------------
// Well-formedness

namespace {

struct Checker {
    const HornSystem& hs;
    std::vector<std::string> out;

    void atom(const std::string& where, const Atom& a, const std::vector<const std::vector<SortedVar>*>& scopes) {
        const PredicateSymbol* p = hs.find(a.pred);
        if (!p) {
            out.push_back(where + ": undeclared predicate '" + a.pred + "'");
            return;
        }
        if (p->arity() != a.args.size()) {
            out.push_back(where + ": '" + a.pred + "' expects " + std::to_string(p->arity()) + " arguments, got " +
                          std::to_string(a.args.size()));
            return;
        }
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            const SortedVar* v = lookup(a.args[i], scopes);
            if (!v) {
                out.push_back(where + ": variable '" + a.args[i] + "' in " + a.pred + " is not in scope");
                continue;
            }
            if (v->sort != p->params[i].sort)
                out.push_back(where + ": sort mismatch for argument " + std::to_string(i + 1) + " of " + a.pred);
        }
    }

    void formula(const std::string& where, const Formula& f, const std::vector<const std::vector<SortedVar>*>& scopes) {
        for (const auto& v : f.vars())
            if (!lookup(v, scopes)) out.push_back(where + ": constraint variable '" + v + "' is not in scope");
    }

    static const SortedVar* lookup(const std::string& name, const std::vector<const std::vector<SortedVar>*>& scopes) {
        for (const auto* scope : scopes)
            for (const auto& v : *scope)
                if (v.name == name) return &v;
        return nullptr;
    }
};

} // namespace

std::vector<std::string> well_formed(const HornSystem& hs) {
    Checker ck{hs, {}};
    std::set<std::string> names;
    for (const auto& p : hs.predicates) {
        if (!names.insert(p.name).second) ck.out.push_back("duplicate predicate '" + p.name + "'");
        std::set<std::string> params;
        for (const auto& v : p.params)
            if (!params.insert(v.name).second)
                ck.out.push_back("predicate '" + p.name + "' repeats parameter '" + v.name + "'");
    }
    for (std::size_t i = 0; i < hs.clauses.size(); ++i) {
        const Clause& c = hs.clauses[i];
        std::string where = "clause " + std::to_string(i + 1);
        std::set<std::string> seen;
        for (const auto& v : c.universals)
            if (!seen.insert(v.name).second) ck.out.push_back(where + ": duplicate universal '" + v.name + "'");
        std::vector<const std::vector<SortedVar>*> outer{&c.universals};
        for (const auto& a : c.body_atoms) ck.atom(where, a, outer);
        ck.formula(where, c.body_constraint, outer);
        if (const auto* a = std::get_if<Atom>(&c.head)) ck.atom(where + " head", *a, outer);
        if (const auto* e = std::get_if<ExistsHead>(&c.head)) {
            for (const auto& v : e->vars)
                if (seen.count(v.name)) ck.out.push_back(where + ": existential '" + v.name + "' shadows a universal");
            std::vector<const std::vector<SortedVar>*> inner{&c.universals, &e->vars};
            for (const auto& a : e->atoms) ck.atom(where + " head", a, inner);
            ck.formula(where + " head", e->constraint, inner);
        }
    }
    for (const auto& w : hs.wf_marks) {
        const PredicateSymbol* p = hs.find(w);
        if (!p) {
            ck.out.push_back("wf mark on undeclared predicate '" + w + "'");
            continue;
        }
        if (p->kind != PredKind::Unknown) ck.out.push_back("wf mark on defined predicate '" + w + "'");
        if (p->arity() % 2 != 0) {
            ck.out.push_back("wf mark on '" + w + "' of odd arity " + std::to_string(p->arity()));
            continue;
        }
        std::size_t n = p->arity() / 2;
        for (std::size_t k = 0; k < n; ++k)
            if (p->params[k].sort != p->params[k + n].sort)
                ck.out.push_back("wf mark on '" + w + "': parameter " + std::to_string(k + 1) +
                                 " and its successor differ in sort");
    }
    return ck.out;
}

// ---------------------------------------------------------------------------
// Pretty printing

std::string to_text(const Atom& a) {
    std::string s = a.pred + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) s += (i ? ", " : "") + a.args[i];
    return s + ")";
}

namespace {

std::string sorted_var_text(const SortedVar& v) {
    std::string s = v.name + ": ";
    if (v.sort == Sort::Rat) return s + "rat";
    s += "int";
    if (v.bounds) s += "[" + std::to_string(v.bounds->first) + "," + std::to_string(v.bounds->second) + "]";
    return s;
}

std::string conj_text(const std::vector<Atom>& atoms, const Formula& f) {
    std::vector<std::string> parts;
    for (const auto& a : atoms) parts.push_back(to_text(a));
    if (!f.is_true() || parts.empty()) {
        std::string t = to_string(f);
        if (f.kind() == Formula::Kind::Or && !parts.empty()) t = "(" + t + ")";
        parts.push_back(t);
    }
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " && " : "") + parts[i];
    return s;
}

} // namespace

std::string to_text(const HornSystem& hs) {
    std::ostringstream os;
    os << "horn system " << hs.schema << " for " << hs.system << "\n";
    for (const auto& p : hs.predicates) {
        os << (p.kind == PredKind::Unknown ? "unknown " : "defined ") << p.name << "(";
        for (std::size_t i = 0; i < p.params.size(); ++i) os << (i ? ", " : "") << sorted_var_text(p.params[i]);
        os << ")\n";
    }
    for (std::size_t i = 0; i < hs.clauses.size(); ++i) {
        const Clause& c = hs.clauses[i];
        os << "c" << i + 1 << ": forall ";
        for (std::size_t k = 0; k < c.universals.size(); ++k) os << (k ? ", " : "") << sorted_var_text(c.universals[k]);
        os << ". " << conj_text(c.body_atoms, c.body_constraint) << " -> ";
        std::visit(
            [&](const auto& h) {
                using T = std::decay_t<decltype(h)>;
                if constexpr (std::is_same_v<T, FalseHead>) {
                    os << "false";
                } else if constexpr (std::is_same_v<T, Atom>) {
                    os << to_text(h);
                } else {
                    os << "exists ";
                    for (std::size_t k = 0; k < h.vars.size(); ++k) os << (k ? ", " : "") << sorted_var_text(h.vars[k]);
                    os << ". " << conj_text(h.atoms, h.constraint);
                }
            },
            c.head);
        os << "\n";
    }
    for (const auto& w : hs.wf_marks) os << "wf(" << w << ")\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Isomorphism

bool isomorphic(const HornSystem& a, const HornSystem& b) {
    if (a.schema != b.schema || a.system != b.system || a.wf_marks != b.wf_marks) return false;
    if (a.predicates.size() != b.predicates.size() || a.clauses.size() != b.clauses.size()) return false;
    for (std::size_t i = 0; i < a.predicates.size(); ++i) {
        const auto& p = a.predicates[i];
        const auto& q = b.predicates[i];
        if (p.name != q.name || p.kind != q.kind || p.arity() != q.arity()) return false;
        for (std::size_t k = 0; k < p.arity(); ++k)
            if (p.params[k].sort != q.params[k].sort) return false;
    }
    for (std::size_t i = 0; i < a.clauses.size(); ++i) {
        const auto& c = a.clauses[i];
        const auto& d = b.clauses[i];
        if (c.universals != d.universals || c.body_atoms != d.body_atoms || c.body_constraint != d.body_constraint ||
            !(c.head == d.head))
            return false;
    }
    return true;
}

} // namespace hornforge
