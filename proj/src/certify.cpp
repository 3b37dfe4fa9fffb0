#include "hornforge/certify.hpp"

#include <algorithm>
#include <set>

#include "hornforge/errors.hpp"
#include "hornforge/wf.hpp"

namespace hornforge {
namespace {

Formula instance(const Model& m, const HornSystem& hs, const Atom& a) {
    const PredicateSymbol* p = hs.find(a.pred);
    auto it = m.interp.find(a.pred);
    if (!p || it == m.interp.end()) throw InputError("no interpretation for '" + a.pred + "'");
    RenameMap map;
    for (std::size_t i = 0; i < p->arity(); ++i) map[p->params[i].name] = a.args[i];
    return it->second.renamed(map);
}

Assignment complete(Assignment a, const std::vector<SortedVar>& vars) {
    for (const auto& v : vars) a.try_emplace(v.name, v.bounds ? Rational(v.bounds->first) : Rational(0));
    return a;
}

std::string label(std::size_t i) { return "c" + std::to_string(i + 1); }

ClauseReport check_symbolic(const HornSystem& hs, const Model& m, std::size_t i, const Caps& caps) {
    const Clause& c = hs.clauses[i];
    std::vector<Formula> body{bounds_formula(c.universals), c.body_constraint};
    for (const auto& a : c.body_atoms) body.push_back(instance(m, hs, a));
    Formula head = std::holds_alternative<FalseHead>(c.head) ? Formula::bottom()
                                                             : instance(m, hs, std::get<Atom>(c.head));
    auto w = find_counter(Formula::conj(body), head, int_vars_of(c.universals), caps);
    if (!w) return {label(i), true, std::nullopt, ""};
    return {label(i), false, complete(*w, c.universals), "body holds and head fails"};
}

// Existential heads: enumerate ground body instances, then search for witnesses.
ClauseReport check_ground(const HornSystem& hs, const Model& m, std::size_t i, const Caps& caps) {
    const Clause& c = hs.clauses[i];
    const auto& e = std::get<ExistsHead>(c.head);
    if (!all_bounded_int(c.universals) || !all_bounded_int(e.vars))
        return {label(i), false, std::nullopt, "existential clause needs bounded integer variables"};
    std::vector<Formula> body{c.body_constraint};
    for (const auto& a : c.body_atoms) body.push_back(instance(m, hs, a));
    std::vector<Formula> head{e.constraint, bounds_formula(e.vars)};
    for (const auto& a : e.atoms) head.push_back(instance(m, hs, a));
    Formula body_f = Formula::conj(body);
    Formula head_f = Formula::conj(head);
    VarSet ex_ints = int_vars_of(e.vars);
    std::vector<std::string> order;
    for (const auto& v : c.universals) order.push_back(v.name);
    std::optional<Assignment> witness;
    enumerate_solutions(
        body_f, order, box_of(c.universals),
        [&](const Assignment& a) {
            if (find_model(head_f.partial_eval(a), ex_ints, caps)) return true;
            witness = a;
            return false;
        },
        caps.product_points, caps);
    if (!witness) return {label(i), true, std::nullopt, ""};
    return {label(i), false, witness, "no existential witness"};
}

ClauseReport check_wf(const HornSystem& hs, const Model& m, const std::string& pred, const Caps& caps) {
    std::string lab = "wf(" + pred + ")";
    const PredicateSymbol* p = hs.find(pred);
    auto it = m.interp.find(pred);
    if (!p || it == m.interp.end()) return {lab, false, std::nullopt, "no interpretation"};
    auto rk = m.ranks.find(pred);
    if (rk == m.ranks.end()) return {lab, false, std::nullopt, "no ranking witness"};
    auto pre = pre_state(*p);
    auto post = post_state(*p);
    RenameMap map;
    for (std::size_t k = 0; k < post.size(); ++k) map[post[k].name] = primed(pre[k].name);
    if (!check_rank(it->second.renamed(map), rk->second, pre, caps))
        return {lab, false, std::nullopt, "ranking witness does not bound and decrease"};
    return {lab, true, std::nullopt, ""};
}

} // namespace

std::vector<ClauseReport> check_model(const HornSystem& hs, const Model& m, const Caps& caps) {
    std::vector<ClauseReport> out;
    for (std::size_t i = 0; i < hs.clauses.size(); ++i) {
        try {
            out.push_back(hs.clauses[i].has_exists() ? check_ground(hs, m, i, caps) : check_symbolic(hs, m, i, caps));
        } catch (const std::exception& e) {
            out.push_back({label(i), false, std::nullopt, e.what()});
        }
    }
    for (const auto& w : hs.wf_marks) {
        try {
            out.push_back(check_wf(hs, m, w, caps));
        } catch (const std::exception& e) {
            out.push_back({"wf(" + w + ")", false, std::nullopt, e.what()});
        }
    }
    return out;
}

bool all_hold(const std::vector<ClauseReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const ClauseReport& r) { return r.holds; });
}

// ---------------------------------------------------------------------------
// Ground derivations

namespace {

std::string node_error(const HornSystem& hs, const DerivationNode& n, std::size_t depth) {
    if (depth > 100000) return "derivation too deep";
    if (n.clause >= hs.clauses.size()) return "clause index out of range";
    const Clause& c = hs.clauses[n.clause];
    std::string where = label(n.clause) + ": ";
    if (c.has_exists()) return where + "existential clauses cannot appear in a ground derivation";
    for (const auto& v : c.universals) {
        auto it = n.assignment.find(v.name);
        if (it == n.assignment.end()) return where + "no value for '" + v.name + "'";
        if (v.sort == Sort::Int && !is_integer(it->second)) return where + "non-integer value for '" + v.name + "'";
        if (v.bounds && (it->second < v.bounds->first || it->second > v.bounds->second))
            return where + "value of '" + v.name + "' outside its bounds";
    }
    for (const auto& [name, _] : n.assignment)
        if (!c.find_universal(name)) return where + "value for unknown variable '" + name + "'";
    if (!c.body_constraint.eval(n.assignment)) return where + "constraint is false under the assignment";
    if (n.children.size() != c.body_atoms.size()) return where + "child count does not match the body atoms";
    for (std::size_t k = 0; k < n.children.size(); ++k) {
        const DerivationNode& ch = n.children[k];
        if (ch.clause >= hs.clauses.size()) return where + "child clause index out of range";
        const auto* head = std::get_if<Atom>(&hs.clauses[ch.clause].head);
        if (!head || head->pred != c.body_atoms[k].pred)
            return where + "child " + std::to_string(k + 1) + " does not derive " + c.body_atoms[k].pred;
        std::string sub = node_error(hs, ch, depth + 1);
        if (!sub.empty()) return sub;
        if (atom_values(*head, ch.assignment) != atom_values(c.body_atoms[k], n.assignment))
            return where + "child " + std::to_string(k + 1) + " derives different arguments";
    }
    return "";
}

std::size_t node_height(const DerivationNode& n) {
    std::size_t h = 0;
    for (const auto& ch : n.children) h = std::max(h, 1 + node_height(ch));
    return h;
}

} // namespace

std::string derivation_error(const HornSystem& hs, const Derivation& d) {
    if (!d.root) return "empty derivation";
    if (d.root->clause >= hs.clauses.size() || !hs.clauses[d.root->clause].is_query())
        return "root clause does not conclude false";
    return node_error(hs, *d.root, 0);
}

bool check_derivation(const HornSystem& hs, const Derivation& d) { return derivation_error(hs, d).empty(); }

std::size_t derivation_height(const Derivation& d) { return d.root ? node_height(*d.root) : 0; }

std::string lasso_error(const HornSystem& hs, const Lasso& l) {
    if (!hs.is_wf(l.pred)) return "'" + l.pred + "' is not wf-marked";
    if (l.cycle.empty()) return "empty cycle";
    std::vector<std::vector<Rational>> pre, post;
    for (const auto& n : l.cycle) {
        if (n.clause >= hs.clauses.size()) return "clause index out of range";
        const auto* head = std::get_if<Atom>(&hs.clauses[n.clause].head);
        if (!head || head->pred != l.pred) return label(n.clause) + " does not derive " + l.pred;
        std::string e = node_error(hs, n, 0);
        if (!e.empty()) return e;
        auto vals = atom_values(*head, n.assignment);
        std::size_t half = vals.size() / 2;
        pre.emplace_back(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(half));
        post.emplace_back(vals.begin() + static_cast<std::ptrdiff_t>(half), vals.end());
    }
    for (std::size_t i = 0; i < l.cycle.size(); ++i)
        if (post[i] != pre[(i + 1) % l.cycle.size()]) return "cycle does not close at step " + std::to_string(i + 1);
    return "";
}

bool check_lasso(const HornSystem& hs, const Lasso& l) { return lasso_error(hs, l).empty(); }

// ---------------------------------------------------------------------------
// Traps for ∀∃ systems

std::string trap_error(const HornSystem& hs, const TrapEvidence& t, const Caps& caps) {
    const Clause* fact = nullptr;
    const Clause* step = nullptr;
    const Clause* query = nullptr;
    for (const auto& c : hs.clauses) {
        if (c.has_exists()) step = &c;
        else if (c.body_atoms.empty() && std::holds_alternative<Atom>(c.head)) fact = &c;
        else if (c.is_query() && c.body_atoms.size() == 1) query = &c;
    }
    if (!fact || !step || step->body_atoms.size() != 1) return "system does not have the fact/step shape";
    const auto& inv = std::get<Atom>(fact->head);
    const auto& ex = std::get<ExistsHead>(step->head);
    const Atom* target = nullptr;
    for (const auto& a : ex.atoms)
        if (a.pred == inv.pred) target = &a;
    if (!target || step->body_atoms[0].pred != inv.pred) return "existential head does not re-enter " + inv.pred;
    if (t.vars.size() != inv.args.size()) return "trap variables do not match the state";

    std::set<State> losing(t.losing.begin(), t.losing.end());
    auto bind = [&](const std::vector<std::string>& names, const State& s, Assignment& a) {
        for (std::size_t i = 0; i < names.size(); ++i) a[names[i]] = Rational(s[i]);
    };
    auto in_bounds = [](const std::vector<SortedVar>& vars, const Assignment& a) {
        return bounds_formula(vars).eval(a);
    };
    if (!losing.count(t.initial)) return "initial state is not in the trap";
    {
        Assignment a;
        bind(inv.args, t.initial, a);
        if (!in_bounds(fact->universals, a) || !fact->body_constraint.eval(a)) return "trap initial state is not initial";
    }
    const auto& state_names = step->body_atoms[0].args;
    std::vector<std::string> extra;  // opponent move variables
    for (const auto& v : step->universals)
        if (std::find(state_names.begin(), state_names.end(), v.name) == state_names.end()) extra.push_back(v.name);
    std::vector<std::string> ex_order;
    for (const auto& v : ex.vars) ex_order.push_back(v.name);

    for (const auto& s : t.losing) {
        if (s.size() != t.vars.size()) return "trap state of wrong size";
        Assignment base;
        bind(state_names, s, base);
        if (query) {
            Assignment qa;
            bind(query->body_atoms[0].args, s, qa);
            if (in_bounds(query->universals, qa) && query->body_constraint.eval(qa)) continue;
        }
        Assignment a = base;
        if (!extra.empty()) {
            auto it = t.counter.find(s);
            if (it == t.counter.end()) return "no opponent move for a trap state";
            if (it->second.size() != extra.size()) return "opponent move of wrong size";
            bind(extra, it->second, a);
        }
        if (!in_bounds(step->universals, a) || !step->body_constraint.eval(a))
            return "trap state can leave through a state outside the step clause";
        bool escapes = false;
        enumerate_solutions(
            ex.constraint.partial_eval(a) && bounds_formula(ex.vars), ex_order, box_of(ex.vars),
            [&](const Assignment& e) {
                State next;
                for (const auto& x : target->args) next.push_back(e.at(x).get_num().get_si());
                if (!losing.count(next)) escapes = true;
                return !escapes;
            },
            caps.product_points, caps);
        if (escapes) return "a move leaves the trap";
    }
    return "";
}

bool check_trap(const HornSystem& hs, const TrapEvidence& t, const Caps& caps) { return trap_error(hs, t, caps).empty(); }

bool check_refutation(const HornSystem& hs, const Refutation& r, const Caps& caps) {
    if (const auto* d = std::get_if<Derivation>(&r)) return check_derivation(hs, *d);
    if (const auto* l = std::get_if<Lasso>(&r)) return check_lasso(hs, *l);
    return check_trap(hs, std::get<TrapEvidence>(r), caps);
}

} // namespace hornforge
