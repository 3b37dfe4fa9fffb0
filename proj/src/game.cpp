#include "hornforge/game.hpp"

#include <algorithm>
#include <set>

#include "hornforge/errors.hpp"

namespace hornforge {

std::optional<std::size_t> ExplicitSpace::index_of(const StateVec& s) const {
    auto it = std::lower_bound(states.begin(), states.end(), s);
    if (it == states.end() || *it != s) return std::nullopt;
    return static_cast<std::size_t>(it - states.begin());
}

ExplicitSpace enumerate(const TransitionSystem& ts, const SchemaConfig& cfg, const Caps& caps) {
    for (const auto& v : ts.vars)
        if (v.sort != Sort::Int || !v.bounds)
            throw ResourceError("explicit enumeration needs bounded int variables ('" + v.name + "' is not)");
    std::uint64_t n = 1;
    for (const auto& v : ts.vars) {
        auto w = static_cast<std::uint64_t>(v.bounds->second - v.bounds->first + 1);
        if (w > caps.states || n * w > caps.states)
            throw ResourceError("state space has more than " + std::to_string(caps.states) + " states");
        n *= w;
    }
    ExplicitSpace sp;
    sp.vars = ts.var_names();
    sp.states.reserve(n);
    StateVec cur;
    for (const auto& v : ts.vars) cur.push_back(v.bounds->first);
    for (std::uint64_t k = 0; k < n; ++k) {
        sp.states.push_back(cur);
        for (std::size_t i = cur.size(); i-- > 0;) {
            if (cur[i] < ts.vars[i].bounds->second) {
                ++cur[i];
                break;
            }
            cur[i] = ts.vars[i].bounds->first;
        }
    }
    std::vector<std::string> primes;
    Box box;
    for (const auto& v : ts.vars) {
        primes.push_back(primed(v.name));
        box[primed(v.name)] = *v.bounds;
    }
    auto env_of = [&](const StateVec& s) {
        Assignment a;
        for (std::size_t i = 0; i < s.size(); ++i) a[sp.vars[i]] = Rational(s[i]);
        return a;
    };
    auto succ = [&](const Formula& rel, const StateVec& s) {
        std::vector<std::size_t> out;
        enumerate_solutions(
            rel.partial_eval(env_of(s)), primes, box,
            [&](const Assignment& a) {
                StateVec t;
                for (const auto& p : primes) t.push_back(a.at(p).get_num().get_si());
                out.push_back(*sp.index_of(t));
                return true;
            },
            caps.box_points, caps);
        std::sort(out.begin(), out.end());
        return out;
    };
    auto cand = sys_candidate(ts, cfg);
    sp.has_sys = cand.has_value();
    sp.next.resize(n);
    sp.env.resize(n);
    if (sp.has_sys) sp.sys.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const StateVec& s = sp.states[i];
        Assignment a = env_of(s);
        sp.init.push_back(ts.get(Role::Init).eval(a));
        sp.p.push_back(ts.get(Role::P).eval(a));
        sp.q.push_back(ts.get(Role::Q).eval(a));
        sp.goal.push_back(ts.get(Role::Goal).eval(a));
        if (ts.has(Role::Next)) sp.next[i] = succ(ts.get(Role::Next), s);
        if (ts.has(Role::Env)) sp.env[i] = succ(ts.get(Role::Env), s);
        if (sp.has_sys) sp.sys[i] = cand->is_true() ? std::vector<std::size_t>{} : succ(*cand, s);
    }
    if (sp.has_sys && cand->is_true()) sp.has_sys = false;
    return sp;
}

AttractorResult eu_attractor(const ExplicitSpace& sp) {
    AttractorResult r;
    std::size_t n = sp.size();
    r.winning.assign(n, 0);
    r.distance.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i)
        if (sp.q[i]) {
            r.winning[i] = 1;
            r.distance[i] = 0;
        }
    for (std::int64_t layer = 1;; ++layer) {
        std::vector<std::size_t> add;
        for (std::size_t i = 0; i < n; ++i) {
            if (r.winning[i] || !sp.p[i]) continue;
            if (std::any_of(sp.next[i].begin(), sp.next[i].end(), [&](std::size_t t) { return r.winning[t] != 0; }))
                add.push_back(i);
        }
        if (add.empty()) break;
        for (auto i : add) {
            r.winning[i] = 1;
            r.distance[i] = layer;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!r.winning[i] || r.distance[i] == 0) continue;
        for (auto t : sp.next[i])
            if (r.winning[t] && r.distance[t] < r.distance[i]) r.strategy_edges[i].push_back(t);
    }
    return r;
}

AttractorResult game_attractor(const ExplicitSpace& sp) {
    AttractorResult r;
    std::size_t n = sp.size();
    r.winning.assign(n, 0);
    r.distance.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i)
        if (sp.goal[i]) {
            r.winning[i] = 1;
            r.distance[i] = 0;
        }
    auto any_winning = [&] { return std::any_of(r.winning.begin(), r.winning.end(), [](char c) { return c != 0; }); };
    auto answerable = [&](std::size_t mid) {
        if (!sp.has_sys) return any_winning();
        return std::any_of(sp.sys[mid].begin(), sp.sys[mid].end(), [&](std::size_t t) { return r.winning[t] != 0; });
    };
    for (std::int64_t layer = 1;; ++layer) {
        std::vector<std::size_t> add;
        for (std::size_t i = 0; i < n; ++i) {
            if (r.winning[i]) continue;
            if (std::all_of(sp.env[i].begin(), sp.env[i].end(), answerable)) add.push_back(i);
        }
        if (add.empty()) break;
        for (auto i : add) {
            r.winning[i] = 1;
            r.distance[i] = layer;
        }
    }
    std::set<std::size_t> mids;
    for (std::size_t i = 0; i < n; ++i)
        if (r.winning[i] && r.distance[i] > 0) mids.insert(sp.env[i].begin(), sp.env[i].end());
    for (auto m : mids) {
        std::vector<std::size_t> out;
        if (sp.has_sys) {
            for (auto t : sp.sys[m])
                if (r.winning[t]) out.push_back(t);
        } else {
            for (std::size_t t = 0; t < n; ++t)
                if (r.winning[t]) out.push_back(t);
        }
        r.strategy_edges[m] = out;
    }
    return r;
}

std::map<std::size_t, std::size_t> extract_strategy(const ExplicitSpace&, const AttractorResult& r) {
    std::map<std::size_t, std::size_t> out;
    for (const auto& [s, succ] : r.strategy_edges) {
        if (succ.empty()) continue;
        // states are stored in lexicographic order, so the index breaks ties
        out[s] = *std::min_element(succ.begin(), succ.end(), [&](std::size_t a, std::size_t b) {
            return std::make_pair(r.distance[a], a) < std::make_pair(r.distance[b], b);
        });
    }
    return out;
}

namespace {

struct Names {
    std::string inv, round, sys;
};

Names names_of(const HornSystem& hs) {
    Names n;
    for (const auto& c : hs.clauses)
        if (c.body_atoms.empty() && std::holds_alternative<Atom>(c.head)) n.inv = std::get<Atom>(c.head).pred;
    if (!hs.wf_marks.empty()) n.round = hs.wf_marks.front();
    for (const auto& p : hs.predicates)
        if (p.name != n.inv && p.name != n.round) n.sys = p.name;
    if (n.inv.empty() || n.round.empty()) throw InputError("system does not have the inv/round shape");
    return n;
}

std::vector<std::string> param_names(const HornSystem& hs, const std::string& pred) {
    std::vector<std::string> out;
    for (const auto& v : hs.find(pred)->params) out.push_back(v.name);
    return out;
}

std::vector<StateVec> points(const ExplicitSpace& sp, const std::set<std::size_t>& idx) {
    std::vector<StateVec> out;
    for (auto i : idx) out.push_back(sp.states[i]);
    return out;
}

std::vector<StateVec> pairs(const ExplicitSpace& sp, const std::set<std::pair<std::size_t, std::size_t>>& edges) {
    std::vector<StateVec> out;
    for (const auto& [a, b] : edges) {
        StateVec v = sp.states[a];
        v.insert(v.end(), sp.states[b].begin(), sp.states[b].end());
        out.push_back(v);
    }
    return out;
}

// An affine rank for the given edges when one exists, else the distance table.
constexpr std::size_t kMaxFitEdges = 256;

RankWitness rank_for(const ExplicitSpace& sp, const std::vector<std::string>& pre,
                     const std::set<std::pair<std::size_t, std::size_t>>& edges, const AttractorResult& r,
                     const std::set<std::size_t>& domain) {
    TableRank table;
    for (auto s : domain) table.values[sp.states[s]] = r.distance[s];
    // the fit is one FM problem over all edges; large games keep the table
    if (edges.size() > kMaxFitEdges) return table;
    std::vector<LinConstraint> rows;
    auto value = [&](std::size_t s) {
        LinTerm t = LinTerm::var("r0");
        for (std::size_t i = 0; i < pre.size(); ++i) t += LinTerm::var("r:" + pre[i], Rational(sp.states[s][i]));
        return t;
    };
    for (const auto& [a, b] : edges) {
        rows.push_back({value(a), Rel::Ge});
        rows.push_back({value(a) - value(b) - LinTerm(Rational(1)), Rel::Ge});
    }
    CubeResult res;
    try {
        res = sat_cube(Cube{rows});
    } catch (const ResourceError&) {
        return table;
    }
    if (const auto* w = std::get_if<Assignment>(&res)) {
        LinTerm t(w->count("r0") ? w->at("r0") : Rational(0));
        for (const auto& x : pre) {
            auto it = w->find("r:" + x);
            if (it != w->end() && it->second != 0) t.add(x, it->second);
        }
        return AffineRank{t};
    }
    return table;
}

TrapEvidence trap(const ExplicitSpace& sp, const AttractorResult& r, std::size_t initial) {
    TrapEvidence t;
    t.vars = sp.vars;
    t.initial = sp.states[initial];
    for (std::size_t i = 0; i < sp.size(); ++i)
        if (!r.winning[i]) t.losing.push_back(sp.states[i]);
    return t;
}

} // namespace

Verdict solve_eu(const ExplicitSpace& sp, const HornSystem& hs) {
    Names names = names_of(hs);
    AttractorResult r = eu_attractor(sp);
    Verdict v;
    v.strategy = "explicit-eu";
    v.counters["states"] = sp.size();
    for (std::size_t i = 0; i < sp.size(); ++i) {
        if (!sp.init[i] || r.winning[i]) continue;
        v.status = Status::Refuted;
        v.refutation = trap(sp, r, i);
        v.reason = "an initial state has no path satisfying p until q";
        return v;
    }
    auto strat = extract_strategy(sp, r);
    std::set<std::size_t> closure;
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < sp.size(); ++i) {
        if (!sp.init[i]) continue;
        for (std::size_t cur = i; closure.insert(cur).second && !sp.q[cur];) {
            std::size_t nxt = strat.at(cur);
            edges.insert({cur, nxt});
            cur = nxt;
        }
    }
    Model m;
    m.interp[names.inv] = point_set(param_names(hs, names.inv), points(sp, closure));
    m.interp[names.round] = point_set(param_names(hs, names.round), pairs(sp, edges));
    auto pre = pre_state(*hs.find(names.round));
    std::vector<std::string> pre_names;
    for (const auto& x : pre) pre_names.push_back(x.name);
    m.ranks[names.round] = rank_for(sp, pre_names, edges, r, closure);
    v.status = Status::Solved;
    v.model = std::move(m);
    return v;
}

Verdict solve_reach_game(const ExplicitSpace& sp, const HornSystem& hs) {
    Names names = names_of(hs);
    AttractorResult r = game_attractor(sp);
    Verdict v;
    v.strategy = "explicit-game";
    v.counters["states"] = sp.size();
    for (std::size_t i = 0; i < sp.size(); ++i) {
        if (!sp.init[i] || r.winning[i]) continue;
        TrapEvidence t = trap(sp, r, i);
        for (std::size_t s = 0; s < sp.size(); ++s) {
            if (r.winning[s]) continue;
            for (auto mid : sp.env[s]) {
                bool answered = sp.has_sys ? std::any_of(sp.sys[mid].begin(), sp.sys[mid].end(),
                                                         [&](std::size_t x) { return r.winning[x] != 0; })
                                           : std::any_of(r.winning.begin(), r.winning.end(), [](char c) { return c != 0; });
                if (!answered) {
                    t.counter[sp.states[s]] = sp.states[mid];
                    break;
                }
            }
        }
        v.status = Status::Refuted;
        v.refutation = std::move(t);
        v.reason = "the environment can keep an initial state away from the goal";
        return v;
    }
    auto strat = extract_strategy(sp, r);
    std::set<std::size_t> closure;
    std::set<std::pair<std::size_t, std::size_t>> round_edges, sys_edges;
    std::vector<std::size_t> work;
    for (std::size_t i = 0; i < sp.size(); ++i)
        if (sp.init[i] && closure.insert(i).second) work.push_back(i);
    while (!work.empty()) {
        std::size_t s = work.back();
        work.pop_back();
        if (sp.goal[s]) continue;
        for (auto mid : sp.env[s]) {
            std::size_t nxt = strat.at(mid);
            sys_edges.insert({mid, nxt});
            round_edges.insert({s, nxt});
            if (closure.insert(nxt).second) work.push_back(nxt);
        }
    }
    Model m;
    m.interp[names.inv] = point_set(param_names(hs, names.inv), points(sp, closure));
    m.interp[names.round] = point_set(param_names(hs, names.round), pairs(sp, round_edges));
    if (!names.sys.empty()) m.interp[names.sys] = point_set(param_names(hs, names.sys), pairs(sp, sys_edges));
    auto pre = pre_state(*hs.find(names.round));
    std::vector<std::string> pre_names;
    for (const auto& x : pre) pre_names.push_back(x.name);
    m.ranks[names.round] = rank_for(sp, pre_names, round_edges, r, closure);
    v.status = Status::Solved;
    v.model = std::move(m);
    return v;
}

} // namespace hornforge
