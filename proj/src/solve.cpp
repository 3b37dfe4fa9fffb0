#include "hornforge/solve.hpp"

#include <algorithm>
#include <functional>
#include <future>

#include "hornforge/certify.hpp"
#include "hornforge/errors.hpp"
#include "hornforge/game.hpp"
#include "hornforge/wf.hpp"
#include "solve_internal.hpp"

namespace hornforge {

Deadline::Deadline(double seconds, const std::atomic<bool>* cancel)
    : end_(std::chrono::steady_clock::now() +
           std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(seconds))),
      cancel_(cancel) {}

bool Deadline::expired() const {
    if (cancel_ && cancel_->load()) return true;
    return std::chrono::steady_clock::now() >= end_;
}

namespace {

using detail::Unfolder;

// Receives each certified candidate model; returning true stops the search.
using Accept = std::function<bool(const Model&, const std::string& strategy)>;

Verdict unknown(std::string reason, std::string strategy = "portfolio") {
    Verdict v;
    v.status = Status::Unknown;
    v.reason = std::move(reason);
    v.strategy = std::move(strategy);
    return v;
}

std::string failed_clauses(const std::vector<ClauseReport>& reports) {
    std::string out;
    for (const auto& r : reports)
        if (!r.holds) out += (out.empty() ? "" : ", ") + r.label;
    return out;
}

struct PlainOutcome {
    std::optional<Derivation> refutation;
    std::optional<Model> model;
    std::string strategy;
    std::string reason;
    std::map<std::string, std::uint64_t> counters;
};

// Unfolding interleaved with intervals, then templates. Models are handed to
// `accept` in order; the unfolder is returned for further ground searches.
PlainOutcome run_plain(const HornSystem& hs, const SolveOptions& opts, const Deadline& dl, Unfolder& u,
                       const Accept& accept) {
    PlainOutcome out;
    const Budget& b = opts.budget;
    auto offer = [&](std::optional<Model> m, const std::string& strategy) {
        if (m && accept(*m, strategy)) {
            out.model = std::move(m);
            out.strategy = strategy;
            return true;
        }
        return false;
    };
    auto safe_kleene = [&](const Deadline& d) -> std::optional<Model> {
        try {
            return detail::kleene_impl(hs, b, opts.caps, d);
        } catch (const ResourceError&) {
            return std::nullopt;
        }
    };
    auto safe_templates = [&](const Deadline& d) -> std::optional<Model> {
        try {
            return detail::templates_impl(hs, b, opts.caps, d);
        } catch (const ResourceError&) {
            return std::nullopt;
        }
    };

    std::atomic<bool> cancel{false};
    Deadline helper_dl(b.time_limit, &cancel);
    std::future<std::optional<Model>> kleene_f, templates_f;
    if (!opts.deterministic) {
        kleene_f = std::async(std::launch::async, safe_kleene, std::cref(helper_dl));
        templates_f = std::async(std::launch::async, safe_templates, std::cref(helper_dl));
    }
    auto poll = [&](std::future<std::optional<Model>>& f, const std::string& strategy) {
        if (!f.valid() || f.wait_for(std::chrono::seconds(0)) != std::future_status::ready) return false;
        return offer(f.get(), strategy);
    };
    auto finish = [&] {
        cancel = true;
        if (kleene_f.valid()) kleene_f.wait();
        if (templates_f.valid()) templates_f.wait();
    };

    bool kleene_done = !opts.deterministic;
    bool unfolding = true;
    for (std::size_t depth = 1; depth <= b.max_depth && unfolding; ++depth) {
        if (dl.expired()) {
            out.reason = "time limit reached during unfolding";
            break;
        }
        try {
            if (auto d = u.step()) {
                if (check_derivation(hs, *d)) {
                    out.refutation = std::move(d);
                    out.strategy = "unfold";
                    break;
                }
            }
        } catch (const ResourceError& e) {
            out.reason = e.what();
            unfolding = false;
        }
        if (u.saturated() && offer(u.saturation_model(), "unfold-saturation")) break;
        if (!u.reason.empty()) {
            out.reason = u.reason;
            unfolding = false;
        }
        if (!kleene_done) {
            kleene_done = true;
            if (offer(safe_kleene(dl), "kleene-intervals")) break;
        }
        if (poll(kleene_f, "kleene-intervals") || poll(templates_f, "farkas-templates")) break;
        if (u.saturated()) break;
    }
    out.counters["unfold_height"] = u.height();
    out.counters["unfold_entries"] = u.entries().size();
    if (out.refutation || out.model) {
        finish();
        return out;
    }
    if (opts.deterministic) {
        if (!dl.expired() && offer(safe_templates(dl), "farkas-templates")) return out;
    } else {
        for (auto* f : {&kleene_f, &templates_f}) {
            if (!f->valid()) continue;
            while (f->wait_for(std::chrono::milliseconds(20)) != std::future_status::ready)
                if (dl.expired()) cancel = true;
            if (offer(f->get(), f == &kleene_f ? "kleene-intervals" : "farkas-templates")) {
                finish();
                return out;
            }
        }
    }
    finish();
    if (out.reason.empty())
        out.reason = dl.expired() ? "time limit reached" : "no strategy found a certified model or refutation";
    return out;
}

Verdict solve_plain(const HornSystem& hs, const SolveOptions& opts, const Deadline& dl) {
    Unfolder u(hs, opts.caps, &dl);
    std::vector<ClauseReport> last;
    auto accept = [&](const Model& m, const std::string&) {
        last = check_model(hs, m, opts.caps);
        return all_hold(last);
    };
    PlainOutcome o = run_plain(hs, opts, dl, u, accept);
    Verdict v;
    v.counters = o.counters;
    v.strategy = o.strategy.empty() ? "portfolio" : o.strategy;
    if (o.refutation) {
        v.status = Status::Refuted;
        v.refutation = std::move(*o.refutation);
    } else if (o.model) {
        v.status = Status::Solved;
        v.model = std::move(o.model);
    } else {
        v.status = Status::Unknown;
        v.reason = o.reason;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Well-foundedness

struct Split {
    HornSystem sub;
    std::vector<std::size_t> to_full;  // sub clause index -> full index
    std::vector<std::size_t> wf_clauses;
};

Split split_wf(const HornSystem& hs) {
    Split s;
    s.sub.schema = hs.schema;
    s.sub.system = hs.system;
    for (const auto& p : hs.predicates)
        if (!hs.is_wf(p.name)) s.sub.predicates.push_back(p);
    for (std::size_t i = 0; i < hs.clauses.size(); ++i) {
        const auto* a = std::get_if<Atom>(&hs.clauses[i].head);
        if (a && hs.is_wf(a->pred)) {
            s.wf_clauses.push_back(i);
            continue;
        }
        s.sub.clauses.push_back(hs.clauses[i]);
        s.to_full.push_back(i);
    }
    return s;
}

void remap(DerivationNode& n, const std::vector<std::size_t>& to_full) {
    n.clause = to_full.at(n.clause);
    for (auto& c : n.children) remap(c, to_full);
}

// Projection of the wf clauses of `pred` under the sub-model, over the
// predicate's parameters.
std::vector<Cube> round_cubes(const HornSystem& hs, const Split& s, const std::string& pred, const Model& m,
                              const Caps& caps) {
    std::vector<Cube> out;
    const PredicateSymbol* p = hs.find(pred);
    for (auto ci : s.wf_clauses) {
        const Clause& c = hs.clauses[ci];
        const auto& head = std::get<Atom>(c.head);
        if (head.pred != pred) continue;
        VarSet ints = int_vars_of(c.universals);
        std::vector<std::string> elim;
        for (const auto& v : c.universals)
            if (std::find(head.args.begin(), head.args.end(), v.name) == head.args.end()) elim.push_back(v.name);
        RenameMap to_params;
        for (std::size_t j = 0; j < head.args.size(); ++j) to_params[head.args[j]] = p->params[j].name;
        for (const auto& cube : dnf(detail::clause_body(hs, c, m), caps)) {
            auto t = tighten_integer(cube, ints);
            if (!t || !std::holds_alternative<Assignment>(sat_cube(*t, caps))) continue;
            auto proj = tighten_integer(eliminate(elim, *t, caps).renamed(to_params), int_vars_of(p->params));
            if (proj) out.push_back(proj->normalized());
        }
    }
    return out;
}

std::optional<RankWitness> synthesize_rank(const PredicateSymbol& p, const std::vector<Cube>& cubes, const Caps& caps) {
    if (cubes.empty()) return AffineRank{};
    auto pre = pre_state(p);
    auto post = post_state(p);
    RenameMap to_primed;
    for (std::size_t k = 0; k < post.size(); ++k) to_primed[post[k].name] = primed(pre[k].name);
    std::vector<Cube> rel;
    for (const auto& c : cubes) rel.push_back(c.renamed(to_primed));
    VarSet ints;
    for (const auto& v : pre)
        if (v.sort == Sort::Int) {
            ints.insert(v.name);
            ints.insert(primed(v.name));
        }
    if (rel.size() == 1)
        if (auto r = pr_synthesize(rel.front(), ints, caps)) return *r;
    if (auto r = lex_synthesize(rel, ints, caps)) {
        if (r->components.size() == 1) return r->components.front();
        return *r;
    }
    return std::nullopt;
}

// Ground cycles of length <= 3 through a wf clause, with every body atom
// derived from the unfolded facts.
std::optional<Lasso> find_lasso(const HornSystem& hs, const Split& s, Unfolder& u, const Caps& caps,
                                const Deadline& dl) {
    constexpr std::size_t kMaxDisjuncts = 64;
    for (auto ci : s.wf_clauses) {
        const Clause& c = hs.clauses[ci];
        const auto& head = std::get<Atom>(c.head);
        std::size_t half = head.args.size() / 2;
        for (std::size_t len = 1; len <= 3; ++len) {
            if (dl.expired()) return std::nullopt;
            std::vector<Formula> parts;
            VarSet ints;
            bool too_big = false;
            auto copy = [&](std::size_t j) {
                RenameMap map;
                for (const auto& v : c.universals) map[v.name] = v.name + "#" + std::to_string(j);
                return map;
            };
            for (std::size_t j = 0; j < len; ++j) {
                RenameMap map = copy(j);
                for (const auto& v : c.universals)
                    if (v.sort == Sort::Int) ints.insert(map[v.name]);
                parts.push_back((bounds_formula(c.universals) && c.body_constraint).renamed(map));
                for (const auto& a : c.body_atoms) {
                    const PredicateSymbol* p = hs.find(a.pred);
                    std::vector<Formula> alts;
                    for (const auto& e : u.entries()) {
                        if (e.pred != a.pred) continue;
                        RenameMap inst;
                        for (std::size_t i = 0; i < p->arity(); ++i) inst[p->params[i].name] = map[a.args[i]];
                        alts.push_back(e.cube.renamed(inst).to_formula());
                    }
                    if (alts.size() > kMaxDisjuncts && len > 1) too_big = true;
                    parts.push_back(Formula::disj(alts));
                }
                RenameMap next = copy((j + 1) % len);
                for (std::size_t k = 0; k < half; ++k)
                    parts.push_back(Formula::atom(LinTerm::var(map[head.args[half + k]]) -
                                                      LinTerm::var(next[head.args[k]]),
                                                  Rel::Eq));
            }
            if (too_big) break;
            std::optional<Assignment> w;
            try {
                w = find_model(Formula::conj(parts), ints, caps);
            } catch (const ResourceError&) {
                break;
            }
            if (!w) continue;
            Lasso l;
            l.pred = head.pred;
            bool ok = true;
            for (std::size_t j = 0; j < len && ok; ++j) {
                RenameMap map = copy(j);
                DerivationNode n;
                n.clause = ci;
                for (const auto& v : c.universals) {
                    auto it = w->find(map[v.name]);
                    n.assignment[v.name] = it != w->end() ? it->second : Rational(v.bounds ? v.bounds->first : 0);
                }
                for (const auto& a : c.body_atoms) {
                    auto g = u.ground_fact(a.pred, atom_values(a, n.assignment));
                    if (!g) {
                        ok = false;
                        break;
                    }
                    remap(*g, s.to_full);
                    n.children.push_back(std::move(*g));
                }
                l.cycle.push_back(std::move(n));
            }
            if (ok && check_lasso(hs, l)) return l;
        }
    }
    return std::nullopt;
}

Verdict solve_wf(const HornSystem& hs, const SolveOptions& opts, const Deadline& dl) {
    Split s = split_wf(hs);
    Unfolder u(s.sub, opts.caps, &dl);
    Model found;
    std::string why = "no ranking function found for any candidate invariant";
    auto accept = [&](const Model& m, const std::string&) {
        if (!all_hold(check_model(s.sub, m, opts.caps))) return false;
        Model full = m;
        for (const auto& w : hs.wf_marks) {
            try {
                const PredicateSymbol* p = hs.find(w);
                auto cubes = round_cubes(hs, s, w, m, opts.caps);
                auto rank = synthesize_rank(*p, cubes, opts.caps);
                if (!rank) return false;
                std::vector<Formula> parts;
                for (const auto& c : cubes) parts.push_back(c.to_formula());
                full.interp[w] = Formula::disj(parts);
                full.ranks[w] = *rank;
            } catch (const std::exception& e) {
                why = e.what();
                return false;
            }
        }
        auto reports = check_model(hs, full, opts.caps);
        if (!all_hold(reports)) {
            why = "ranked model failed certification at " + failed_clauses(reports);
            return false;
        }
        found = std::move(full);
        return true;
    };
    PlainOutcome o = run_plain(s.sub, opts, dl, u, accept);
    Verdict v;
    v.counters = o.counters;
    if (o.refutation) {
        remap(*o.refutation->root, s.to_full);
        if (check_derivation(hs, *o.refutation)) {
            v.status = Status::Refuted;
            v.refutation = std::move(*o.refutation);
            v.strategy = "unfold";
            return v;
        }
    }
    if (o.model) {
        v.status = Status::Solved;
        v.model = std::move(found);
        v.strategy = o.strategy + "+ranking";
        return v;
    }
    if (auto l = find_lasso(hs, s, u, opts.caps, dl)) {
        v.status = Status::Refuted;
        v.refutation = std::move(*l);
        v.strategy = "lasso";
        return v;
    }
    v.status = Status::Unknown;
    v.strategy = "portfolio";
    v.reason = o.reason.empty() || o.reason.rfind("no strategy", 0) == 0 ? why : o.reason;
    return v;
}

// ---------------------------------------------------------------------------
// Existential heads

Verdict solve_exists(const HornSystem& hs, const SolveOptions& opts) {
    if (!opts.ts) return unknown("existential clauses need the source program for explicit-state solving");
    ExplicitSpace space = enumerate(*opts.ts, opts.cfg, opts.caps);
    bool game = opts.ts->has(Role::Env);
    Verdict v = game ? solve_reach_game(space, hs) : solve_eu(space, hs);
    if (v.status == Status::Solved) {
        auto reports = check_model(hs, *v.model, opts.caps);
        if (!all_hold(reports)) return unknown("explicit-state model failed certification at " + failed_clauses(reports), v.strategy);
    } else if (v.status == Status::Refuted) {
        const auto& trap = std::get<TrapEvidence>(*v.refutation);
        std::string e = trap_error(hs, trap, opts.caps);
        if (!e.empty()) return unknown("explicit-state trap failed certification: " + e, v.strategy);
    }
    return v;
}

} // namespace

Verdict solve(const HornSystem& hs, const SolveOptions& opts) {
    Deadline dl(opts.budget.time_limit);
    try {
        auto problems = well_formed(hs);
        if (!problems.empty()) return unknown("ill-formed system: " + problems.front());
        if (hs.has_exists()) return solve_exists(hs, opts);
        if (hs.has_wf()) return solve_wf(hs, opts, dl);
        return solve_plain(hs, opts, dl);
    } catch (const std::exception& e) {
        return unknown(e.what());
    }
}

} // namespace hornforge
