#include <algorithm>
#include <set>

#include "hornforge/certify.hpp"
#include "hornforge/errors.hpp"
#include "solve_internal.hpp"

namespace hornforge::detail {

Formula clause_body(const HornSystem& hs, const Clause& c, const Model& m) {
    std::vector<Formula> parts{bounds_formula(c.universals), c.body_constraint};
    for (const auto& a : c.body_atoms) {
        const PredicateSymbol* p = hs.find(a.pred);
        RenameMap map;
        for (std::size_t i = 0; i < p->arity(); ++i) map[p->params[i].name] = a.args[i];
        parts.push_back(m.interp.at(a.pred).renamed(map));
    }
    return Formula::conj(parts);
}

namespace {

constexpr std::size_t kMaxChecks = 400000;
constexpr std::size_t kMaxCex = 64;

Formula head_of(const HornSystem& hs, const Clause& c, const Model& m) {
    const auto* a = std::get_if<Atom>(&c.head);
    if (!a) return Formula::bottom();
    const PredicateSymbol* p = hs.find(a->pred);
    RenameMap map;
    for (std::size_t i = 0; i < p->arity(); ++i) map[p->params[i].name] = a->args[i];
    return m.interp.at(a->pred).renamed(map);
}

// Atoms sum(c_i * x_i) + d >= 0 over the grid, canonical and deduplicated,
// in lexicographic grid order.
std::vector<Formula> grid_atoms(const PredicateSymbol& p, const Budget& b) {
    std::vector<Formula> out;
    std::set<std::string> seen;
    std::size_t n = p.arity();
    std::vector<int> coeff(n, b.coeff_min);
    while (true) {
        std::size_t nonzero = std::count_if(coeff.begin(), coeff.end(), [](int c) { return c != 0; });
        if (nonzero > 0 && (n <= 2 || nonzero <= 2)) {
            for (int d = b.const_min; d <= b.const_max; ++d) {
                LinTerm t{Rational(d)};
                for (std::size_t i = 0; i < n; ++i)
                    if (coeff[i] != 0) t.add(p.params[i].name, Rational(coeff[i]));
                Formula f = Formula::atom(t, Rel::Ge);
                if (f.kind() != Formula::Kind::Atom) continue;
                if (seen.insert(to_string(f)).second) out.push_back(f);
            }
        }
        std::size_t k = n;
        while (k > 0) {
            --k;
            if (++coeff[k] <= b.coeff_max) break;
            coeff[k] = b.coeff_min;
            if (k == 0) return out;
        }
        if (n == 0) return out;
    }
}

class Search {
public:
    Search(const HornSystem& hs, const Budget& b, const Caps& caps, const Deadline& dl)
        : hs_(hs), budget_(b), caps_(caps), dl_(dl) {
        for (const auto& p : hs.predicates)
            if (p.kind == PredKind::Unknown) preds_.push_back(&p);
        for (std::size_t i = 0; i < preds_.size(); ++i) index_[preds_[i]->name] = i;
        // a clause is checked once its last predicate (in search order) is assigned
        ready_.resize(preds_.size());
        for (std::size_t ci = 0; ci < hs.clauses.size(); ++ci) {
            const Clause& c = hs.clauses[ci];
            std::size_t last = 0;
            for (const auto& a : c.body_atoms) last = std::max(last, index_.at(a.pred));
            if (const auto* h = std::get_if<Atom>(&c.head)) last = std::max(last, index_.at(h->pred));
            if (!preds_.empty()) ready_[last].push_back(ci);
        }
    }

    std::optional<Model> run() {
        if (preds_.empty()) return std::nullopt;
        candidates_.resize(preds_.size());
        for (std::size_t i = 0; i < preds_.size(); ++i) candidates_[i] = candidates_for(*preds_[i]);
        if (assign(0)) return model_;
        return std::nullopt;
    }

private:
    bool holds(std::size_t ci) {
        const Clause& c = hs_.clauses[ci];
        // candidate atoms are pre-filtered against fact clauses
        if (c.body_atoms.empty())
            if (const auto* h = std::get_if<Atom>(&c.head); h && !model_.interp.at(h->pred).is_false()) return true;
        // points that refuted earlier candidates usually refute this one too;
        // they satisfy the clause constraint, so only the atoms are evaluated
        auto& seen = cex_[ci];
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (refutes(c, seen[i])) {
                std::rotate(seen.begin(), seen.begin() + i, seen.begin() + i + 1);
                return false;
            }
        if (++checks_ > kMaxChecks) throw ResourceError("template search exceeds its check budget");
        std::optional<Assignment> w;
        try {
            w = find_counter(clause_body(hs_, c, model_), head_of(hs_, c, model_), int_vars_of(c.universals), caps_);
        } catch (const ResourceError&) {
            return false;
        }
        if (!w) return true;
        for (const auto& u : c.universals)
            if (!w->count(u.name)) (*w)[u.name] = u.bounds ? Rational(u.bounds->first) : Rational(0);
        Point pt;
        for (const auto& a : c.body_atoms) pt.body.push_back(bind(a, *w));
        if (const auto* h = std::get_if<Atom>(&c.head)) pt.head = bind(*h, *w);
        seen.insert(seen.begin(), std::move(pt));
        if (seen.size() > kMaxCex) seen.pop_back();
        return false;
    }

    struct Point {
        std::vector<Assignment> body;  // parameter values per body atom
        std::optional<Assignment> head;
    };

    Assignment bind(const Atom& a, const Assignment& w) const {
        const PredicateSymbol* p = hs_.find(a.pred);
        Assignment out;
        for (std::size_t i = 0; i < p->arity(); ++i) out[p->params[i].name] = w.at(a.args[i]);
        return out;
    }

    bool refutes(const Clause& c, const Point& pt) const {
        for (std::size_t i = 0; i < c.body_atoms.size(); ++i)
            if (!model_.interp.at(c.body_atoms[i].pred).eval(pt.body[i])) return false;
        if (const auto* h = std::get_if<Atom>(&c.head)) return !model_.interp.at(h->pred).eval(*pt.head);
        return true;
    }

    // Atoms implied by every fact clause of p; the rest cannot appear in a model.
    std::vector<Formula> candidates_for(const PredicateSymbol& p) {
        std::vector<Formula> atoms;
        Formula box = bounds_formula(p.params);
        VarSet ints = int_vars_of(p.params);
        for (const auto& a : grid_atoms(p, budget_)) {
            // implied by the parameter bounds: same as True
            if (!find_counter(box, a, ints, caps_)) continue;
            bool ok = true;
            for (const auto& c : hs_.clauses) {
                const auto* h = std::get_if<Atom>(&c.head);
                if (!h || h->pred != p.name || !c.body_atoms.empty()) continue;
                RenameMap map;
                for (std::size_t i = 0; i < p.arity(); ++i) map[p.params[i].name] = h->args[i];
                if (find_counter(bounds_formula(c.universals) && c.body_constraint, a.renamed(map),
                                 int_vars_of(c.universals), caps_)) {
                    ok = false;
                    break;
                }
            }
            if (ok) atoms.push_back(a);
        }
        std::vector<Formula> out{Formula::top()};
        out.insert(out.end(), atoms.begin(), atoms.end());
        if (budget_.template_size >= 2)
            for (std::size_t i = 0; i < atoms.size(); ++i)
                for (std::size_t j = i + 1; j < atoms.size(); ++j) out.push_back(atoms[i] && atoms[j]);
        out.push_back(Formula::bottom());
        return out;
    }

    bool assign(std::size_t k) {
        if (k == preds_.size()) return true;
        for (const auto& cand : candidates_[k]) {
            if (dl_.expired()) throw ResourceError("template search ran out of time");
            model_.interp[preds_[k]->name] = cand;
            bool ok = true;
            for (auto ci : ready_[k])
                if (!holds(ci)) {
                    ok = false;
                    break;
                }
            if (ok && assign(k + 1)) return true;
        }
        model_.interp.erase(preds_[k]->name);
        return false;
    }

    const HornSystem& hs_;
    const Budget& budget_;
    const Caps& caps_;
    const Deadline& dl_;
    std::vector<const PredicateSymbol*> preds_;
    std::map<std::string, std::size_t> index_;
    std::vector<std::vector<std::size_t>> ready_;
    std::vector<std::vector<Formula>> candidates_;
    Model model_;
    std::size_t checks_ = 0;
    std::map<std::size_t, std::vector<Point>> cex_;
};

} // namespace

std::optional<Model> templates_impl(const HornSystem& hs, const Budget& budget, const Caps& caps, const Deadline& dl) {
    if (hs.has_exists() || hs.has_wf()) return std::nullopt;
    Search s(hs, budget, caps, dl);
    auto m = s.run();
    if (!m || !all_hold(check_model(hs, *m, caps))) return std::nullopt;
    return m;
}

} // namespace hornforge::detail

namespace hornforge {

std::optional<Model> farkas_templates(const HornSystem& hs, const Budget& budget, const Caps& caps) {
    Deadline dl(budget.time_limit);
    try {
        return detail::templates_impl(hs, budget, caps, dl);
    } catch (const ResourceError&) {
        return std::nullopt;
    }
}

} // namespace hornforge
