#include <algorithm>

#include "hornforge/certify.hpp"
#include "hornforge/errors.hpp"
#include "solve_internal.hpp"

namespace hornforge::detail {
namespace {

constexpr std::size_t kMaxEntries = 20000;
constexpr std::size_t kMaxCombinations = 2000000;
constexpr std::size_t kGroundBudget = 4000;

Cube conj(Cube a, const Cube& b) {
    a.constraints.insert(a.constraints.end(), b.constraints.begin(), b.constraints.end());
    return a;
}

bool feasible(const Cube& c, const VarSet& ints, const Caps& caps) {
    auto t = tighten_integer(c, ints);
    if (!t) return false;
    return std::holds_alternative<Assignment>(sat_cube(*t, caps));
}

// Values of an equality-only cube fixing every variable in `vars`.
std::optional<Assignment> as_point(const Cube& c, const std::vector<SortedVar>& vars) {
    Assignment a;
    for (const auto& k : c.constraints) {
        if (k.rel != Rel::Eq || k.term.coeffs().size() != 1) return std::nullopt;
        const auto& [name, coeff] = *k.term.coeffs().begin();
        a[name] = -k.term.constant() / coeff;
    }
    for (const auto& v : vars)
        if (!a.count(v.name)) return std::nullopt;
    return a;
}

bool implies(const Cube& a, const Cube& b, const VarSet& ints, const Caps& caps) {
    for (const auto& c : b.constraints) {
        for (const auto& n : negate(c)) {
            Cube t = a;
            t.constraints.push_back(n);
            if (feasible(t, ints, caps)) return false;
        }
    }
    return true;
}

// Calls visit on every tuple of entry ids (one per body atom) drawn from
// `pools`, keeping only tuples with at least one member of height `fresh`.
template <class Visit>
bool for_each_tuple(const std::vector<std::vector<std::size_t>>& pools,
                    const std::vector<Unfolder::Entry>& entries, std::size_t fresh, Visit&& visit) {
    std::vector<std::size_t> pick(pools.size());
    std::vector<std::size_t> idx(pools.size(), 0);
    for (const auto& p : pools)
        if (p.empty()) return true;
    while (true) {
        bool has_fresh = false;
        for (std::size_t i = 0; i < pools.size(); ++i) {
            pick[i] = pools[i][idx[i]];
            has_fresh = has_fresh || entries[pick[i]].height == fresh;
        }
        if (has_fresh && !visit(pick)) return false;
        std::size_t k = pools.size();
        while (k > 0) {
            --k;
            if (++idx[k] < pools[k].size()) break;
            idx[k] = 0;
            if (k == 0) return true;
        }
        if (pools.empty()) return true;
    }
}

} // namespace

Unfolder::Unfolder(const HornSystem& hs, const Caps& caps, const Deadline* deadline)
    : hs_(hs), caps_(caps), deadline_(deadline) {
    for (const auto& c : hs.clauses) {
        std::vector<Cube> cubes;
        if (!c.has_exists()) {
            VarSet ints = int_vars_of(c.universals);
            for (auto& cube : dnf(bounds_formula(c.universals) && c.body_constraint, caps))
                if (feasible(cube, ints, caps)) cubes.push_back(std::move(cube));
        }
        clause_cubes_.push_back(std::move(cubes));
    }
}

Cube Unfolder::instance(std::size_t entry, const Atom& a) const {
    const PredicateSymbol* p = hs_.find(a.pred);
    RenameMap map;
    for (std::size_t i = 0; i < p->arity(); ++i) map[p->params[i].name] = a.args[i];
    return entries_[entry].cube.renamed(map);
}

bool Unfolder::subsumed(const std::string& pred, const Cube& c) const {
    const PredicateSymbol* p = hs_.find(pred);
    VarSet ints = int_vars_of(p->params);
    auto point = as_point(c, p->params);
    for (const auto& e : entries_) {
        if (e.pred != pred) continue;
        if (e.cube == c) return true;
        if (point) {
            if (e.cube.holds(*point)) return true;
            continue;
        }
        if (implies(c, e.cube, ints, caps_)) return true;
    }
    return false;
}

std::optional<DerivationNode> Unfolder::ground(std::size_t clause, const Cube& body,
                                               const std::vector<std::size_t>& children,
                                               const std::optional<std::vector<Rational>>& target,
                                               std::size_t& budget) {
    const Clause& c = hs_.clauses[clause];
    VarSet ints = int_vars_of(c.universals);
    Cube start = body;
    for (std::size_t i = 0; i < children.size(); ++i) start = conj(start, instance(children[i], c.body_atoms[i]));
    if (target) {
        const auto& head = std::get<Atom>(c.head);
        for (std::size_t j = 0; j < head.args.size(); ++j)
            start.constraints.push_back({LinTerm::var(head.args[j]) - LinTerm((*target)[j]), Rel::Eq});
    }
    std::vector<Cube> work{start};
    while (!work.empty()) {
        if (budget == 0 || (deadline_ && deadline_->expired())) return std::nullopt;
        --budget;
        Cube cube = std::move(work.back());
        work.pop_back();
        std::optional<Assignment> w;
        try {
            w = sat_mixed(cube, ints, caps_);
        } catch (const ResourceError&) {
            continue;
        }
        if (!w) continue;
        DerivationNode node;
        node.clause = clause;
        for (const auto& v : c.universals) {
            auto it = w->find(v.name);
            node.assignment[v.name] = it != w->end() ? it->second
                                                     : (v.bounds ? Rational(v.bounds->first) : Rational(0));
        }
        bool ok = true;
        for (std::size_t i = 0; i < children.size() && ok; ++i) {
            const Entry& ch = entries_[children[i]];
            auto vals = atom_values(c.body_atoms[i], node.assignment);
            auto sub = ground(ch.clause, ch.body, ch.children, vals, budget);
            if (sub) {
                node.children.push_back(std::move(*sub));
                continue;
            }
            ok = false;
            // exclude this argument tuple by splitting on its first integer coordinate
            for (std::size_t j = 0; j < vals.size(); ++j) {
                const std::string& arg = c.body_atoms[i].args[j];
                if (!ints.count(arg)) continue;
                Cube lo = cube, hi = cube;
                lo.constraints.push_back({LinTerm(vals[j] - 1) - LinTerm::var(arg), Rel::Ge});
                hi.constraints.push_back({LinTerm::var(arg) - LinTerm(vals[j] + 1), Rel::Ge});
                work.push_back(std::move(hi));
                work.push_back(std::move(lo));
                break;
            }
        }
        if (ok) return node;
    }
    return std::nullopt;
}

std::optional<DerivationNode> Unfolder::ground_fact(const std::string& pred, const std::vector<Rational>& values) {
    const PredicateSymbol* p = hs_.find(pred);
    if (!p) return std::nullopt;
    Assignment at = bind_params(*p, values);
    std::size_t budget = kGroundBudget;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const Entry& e = entries_[i];
        if (e.pred != pred || !e.cube.holds(at)) continue;
        if (auto n = ground(e.clause, e.body, e.children, values, budget)) return n;
    }
    return std::nullopt;
}

bool Unfolder::fire_queries(std::size_t min_height, std::optional<Derivation>& out) {
    for (std::size_t ci = 0; ci < hs_.clauses.size(); ++ci) {
        const Clause& c = hs_.clauses[ci];
        if (!c.is_query()) continue;
        if (c.body_atoms.empty()) {
            if (min_height != 0) continue;
            for (const auto& body : clause_cubes_[ci]) {
                std::size_t budget = kGroundBudget;
                if (auto n = ground(ci, body, {}, std::nullopt, budget)) {
                    out = Derivation{std::move(*n)};
                    return true;
                }
            }
            continue;
        }
        if (min_height == 0) continue;
        std::vector<std::vector<std::size_t>> pools;
        for (const auto& a : c.body_atoms) {
            std::vector<std::size_t> pool;
            for (std::size_t i = 0; i < entries_.size(); ++i)
                if (entries_[i].pred == a.pred && entries_[i].height <= min_height) pool.push_back(i);
            pools.push_back(std::move(pool));
        }
        VarSet ints = int_vars_of(c.universals);
        std::size_t combos = 0;
        bool stopped = false;
        for (const auto& body : clause_cubes_[ci]) {
            for_each_tuple(pools, entries_, min_height, [&](const std::vector<std::size_t>& pick) {
                if (++combos > kMaxCombinations || (deadline_ && deadline_->expired())) {
                    stopped = true;
                    return false;
                }
                Cube cube = body;
                for (std::size_t i = 0; i < pick.size(); ++i) cube = conj(cube, instance(pick[i], c.body_atoms[i]));
                if (!feasible(cube, ints, caps_)) return true;
                std::size_t budget = kGroundBudget;
                if (auto n = ground(ci, body, pick, std::nullopt, budget)) {
                    out = Derivation{std::move(*n)};
                    return false;
                }
                return true;
            });
            if (out) return true;
            if (stopped) {
                reason = "query search stopped by a resource cap";
                return false;
            }
        }
    }
    return false;
}

std::optional<Derivation> Unfolder::step() {
    std::optional<Derivation> out;
    if (height_ == 0 && fire_queries(0, out)) return out;
    std::size_t h = height_ + 1;
    std::size_t before = entries_.size();
    std::size_t combos = 0;
    bool added = false;
    for (std::size_t ci = 0; ci < hs_.clauses.size(); ++ci) {
        const Clause& c = hs_.clauses[ci];
        const auto* head = std::get_if<Atom>(&c.head);
        if (!head) continue;
        if (c.body_atoms.empty() && h != 1) continue;
        std::vector<std::vector<std::size_t>> pools;
        for (const auto& a : c.body_atoms) {
            std::vector<std::size_t> pool;
            for (std::size_t i = 0; i < before; ++i)
                if (entries_[i].pred == a.pred) pool.push_back(i);
            pools.push_back(std::move(pool));
        }
        const PredicateSymbol* hp = hs_.find(head->pred);
        VarSet ints = int_vars_of(c.universals);
        VarSet head_ints = int_vars_of(hp->params);
        std::vector<std::string> elim;
        for (const auto& v : c.universals)
            if (std::find(head->args.begin(), head->args.end(), v.name) == head->args.end()) elim.push_back(v.name);
        RenameMap to_params;
        for (std::size_t j = 0; j < head->args.size(); ++j) to_params[head->args[j]] = hp->params[j].name;
        for (const auto& body : clause_cubes_[ci]) {
            auto visit = [&](const std::vector<std::size_t>& pick) {
                if (++combos > kMaxCombinations || entries_.size() >= kMaxEntries ||
                    (deadline_ && deadline_->expired())) {
                    reason = "unfolding stopped by a resource cap at height " + std::to_string(h);
                    return false;
                }
                Cube cube = body;
                for (std::size_t i = 0; i < pick.size(); ++i) cube = conj(cube, instance(pick[i], c.body_atoms[i]));
                auto tight = tighten_integer(cube, ints);
                if (!tight || !std::holds_alternative<Assignment>(sat_cube(*tight, caps_))) return true;
                auto proj = tighten_integer(eliminate(elim, *tight, caps_).renamed(to_params), head_ints);
                if (!proj) return true;
                Cube norm = proj->normalized();
                if (subsumed(head->pred, norm)) return true;
                entries_.push_back({head->pred, std::move(norm), h, ci, body, pick});
                added = true;
                return true;
            };
            if (c.body_atoms.empty()) {
                if (!visit({})) break;
            } else if (!for_each_tuple(pools, entries_, h - 1, visit)) {
                break;
            }
        }
        if (!reason.empty()) break;
    }
    height_ = h;
    saturated_ = !added && reason.empty();
    if (fire_queries(h, out)) return out;
    return std::nullopt;
}

Model Unfolder::saturation_model() const {
    Model m;
    for (const auto& p : hs_.predicates) {
        if (p.kind != PredKind::Unknown) continue;
        std::vector<Formula> parts;
        for (const auto& e : entries_)
            if (e.pred == p.name) parts.push_back(e.cube.to_formula());
        m.interp[p.name] = Formula::disj(parts);
    }
    return m;
}

} // namespace hornforge::detail

namespace hornforge {

std::optional<Derivation> bmc(const HornSystem& hs, std::size_t k, const Caps& caps, std::string* reason) {
    if (hs.has_exists()) {
        if (reason) *reason = "existential heads are outside the unfolding fragment";
        return std::nullopt;
    }
    try {
        detail::Unfolder u(hs, caps);
        // after step j every refutation of height <= j has been tried
        while (u.height() == 0 || u.height() < k) {
            if (auto r = u.step()) {
                if (derivation_height(*r) <= k) return r;
                return std::nullopt;
            }
            if (u.saturated() || !u.reason.empty()) break;
        }
        if (reason) *reason = u.reason;
    } catch (const ResourceError& e) {
        if (reason) *reason = e.what();
    }
    return std::nullopt;
}

} // namespace hornforge
