#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "hornforge/certify.hpp"
#include "hornforge/errors.hpp"

namespace hornforge {

std::string_view query_name(Query q) {
    switch (q) {
    case Query::Safety: return "safety";
    case Query::Termination: return "termination";
    case Query::Eu: return "eu";
    case Query::Game: return "game";
    case Query::Noninterference: return "noninterference";
    }
    return "?";
}

Query query_from_name(std::string_view name) {
    for (Query q : {Query::Safety, Query::Termination, Query::Eu, Query::Game, Query::Noninterference})
        if (query_name(q) == name) return q;
    throw InputError("unknown query '" + std::string(name) + "'");
}

Query query_for(Schema s) {
    switch (s) {
    case Schema::SafetyFwd:
    case Schema::SafetyBwd:
    case Schema::SafetyComb: return Query::Safety;
    case Schema::Termination: return Query::Termination;
    case Schema::Noninterference: return Query::Noninterference;
    case Schema::ExistsUntil: return Query::Eu;
    case Schema::ReachGame: return Query::Game;
    }
    return Query::Safety;
}

namespace {

// Plain explicit state graph over the declared box.
class Graph {
public:
    Graph(const TransitionSystem& ts, const Caps& caps) : ts_(ts), caps_(caps) {
        if (!ts.all_bounded_int()) throw ResourceError("oracle needs bounded int variables");
        std::uint64_t n = 1;
        for (const auto& v : ts.vars) {
            auto w = static_cast<std::uint64_t>(v.bounds->second - v.bounds->first + 1);
            if (n > caps.states / w + 1 || n * w > caps.states)
                throw ResourceError("state space exceeds " + std::to_string(caps.states) + " states");
            n *= w;
            names_.push_back(v.name);
            primed_.push_back(primed(v.name));
            box_[primed(v.name)] = *v.bounds;
        }
        count_ = n;
    }

    std::size_t count() const { return count_; }
    const std::vector<std::string>& names() const { return names_; }

    State decode(std::size_t idx) const {
        State s(ts_.vars.size());
        for (std::size_t i = ts_.vars.size(); i-- > 0;) {
            const auto& b = *ts_.vars[i].bounds;
            auto w = static_cast<std::size_t>(b.second - b.first + 1);
            s[i] = b.first + static_cast<std::int64_t>(idx % w);
            idx /= w;
        }
        return s;
    }

    std::size_t encode(const State& s) const {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const auto& b = *ts_.vars[i].bounds;
            idx = idx * static_cast<std::size_t>(b.second - b.first + 1) + static_cast<std::size_t>(s[i] - b.first);
        }
        return idx;
    }

    Assignment env(const State& s) const {
        Assignment a;
        for (std::size_t i = 0; i < s.size(); ++i) a[names_[i]] = Rational(s[i]);
        return a;
    }

    bool holds(Role r, std::size_t idx) const { return ts_.get(r).eval(env(decode(idx))); }

    /// Successors under a relational formula over (x, x').
    std::vector<std::size_t> successors(const Formula& rel, std::size_t idx) const {
        std::vector<std::size_t> out;
        enumerate_solutions(
            rel.partial_eval(env(decode(idx))), primed_, box_,
            [&](const Assignment& a) {
                State t;
                for (const auto& p : primed_) t.push_back(a.at(p).get_num().get_si());
                out.push_back(encode(t));
                return true;
            },
            caps_.box_points, caps_);
        std::sort(out.begin(), out.end());
        return out;
    }

    const std::vector<std::size_t>& next(std::size_t idx) const {
        auto it = next_cache_.find(idx);
        if (it != next_cache_.end()) return it->second;
        return next_cache_.emplace(idx, successors(ts_.get(Role::Next), idx)).first->second;
    }

    std::vector<std::size_t> initial() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < count_; ++i)
            if (holds(Role::Init, i)) out.push_back(i);
        return out;
    }

private:
    const TransitionSystem& ts_;
    const Caps& caps_;
    std::vector<std::string> names_, primed_;
    Box box_;
    std::size_t count_ = 0;
    mutable std::map<std::size_t, std::vector<std::size_t>> next_cache_;
};

std::vector<State> path_to(const Graph& g, const std::map<std::size_t, std::size_t>& parent, std::size_t end) {
    std::vector<State> out;
    for (std::size_t cur = end;;) {
        out.push_back(g.decode(cur));
        auto it = parent.find(cur);
        if (it == parent.end() || it->second == cur) break;
        cur = it->second;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

OracleVerdict safety(const Graph& g) {
    OracleVerdict v;
    std::map<std::size_t, std::size_t> parent;
    std::deque<std::size_t> work;
    for (auto i : g.initial()) {
        parent[i] = i;
        work.push_back(i);
    }
    while (!work.empty()) {
        auto s = work.front();
        work.pop_front();
        if (!g.holds(Role::Safe, s)) {
            v.holds = false;
            v.trace = path_to(g, parent, s);
            v.reachable = parent.size();
            return v;
        }
        for (auto t : g.next(s))
            if (parent.emplace(t, s).second) work.push_back(t);
    }
    v.holds = true;
    v.reachable = parent.size();
    return v;
}

OracleVerdict termination(const Graph& g) {
    OracleVerdict v;
    // iterative DFS with colors; a back edge closes a lasso
    std::map<std::size_t, int> color;
    std::map<std::size_t, std::size_t> parent;
    for (auto root : g.initial()) {
        if (color.count(root)) continue;
        std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
        color[root] = 1;
        parent[root] = root;
        while (!stack.empty()) {
            auto& [s, k] = stack.back();
            const auto& succ = g.next(s);
            if (k == succ.size()) {
                color[s] = 2;
                stack.pop_back();
                continue;
            }
            std::size_t t = succ[k++];
            auto c = color.find(t);
            if (c == color.end()) {
                color[t] = 1;
                parent[t] = s;
                stack.push_back({t, 0});
            } else if (c->second == 1) {
                v.holds = false;
                v.trace = path_to(g, parent, s);
                State loop = g.decode(t);
                v.loop_start = static_cast<std::size_t>(std::find(v.trace.begin(), v.trace.end(), loop) - v.trace.begin());
                v.trace.push_back(loop);
                v.reachable = color.size();
                return v;
            }
        }
    }
    v.holds = true;
    v.reachable = color.size();
    return v;
}

OracleVerdict eu(const Graph& g) {
    OracleVerdict v;
    std::vector<char> in(g.count(), 0);
    std::vector<std::size_t> best(g.count(), 0);
    for (std::size_t i = 0; i < g.count(); ++i) in[i] = g.holds(Role::Q, i);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < g.count(); ++i) {
            if (in[i] || !g.holds(Role::P, i)) continue;
            for (auto t : g.next(i))
                if (in[t]) {
                    in[i] = 1;
                    best[i] = t;
                    changed = true;
                    break;
                }
        }
    }
    for (std::size_t i = 0; i < g.count(); ++i)
        if (in[i]) v.winning.push_back(g.decode(i));
    v.holds = true;
    for (auto i : g.initial()) {
        if (!in[i]) {
            v.holds = false;
            v.trace = {g.decode(i)};
            return v;
        }
    }
    auto init = g.initial();
    if (!init.empty()) {
        std::size_t cur = init.front();
        for (std::size_t steps = 0; steps <= g.count(); ++steps) {
            v.trace.push_back(g.decode(cur));
            if (g.holds(Role::Q, cur)) break;
            cur = best[cur];
        }
    }
    return v;
}

OracleVerdict game(const Graph& g, const TransitionSystem& ts, const SchemaConfig& cfg) {
    OracleVerdict v;
    Formula env_rel = ts.get(Role::Env);
    auto cand = sys_candidate(ts, cfg);
    std::vector<std::vector<std::size_t>> env(g.count()), sys(g.count());
    for (std::size_t i = 0; i < g.count(); ++i) {
        env[i] = g.successors(env_rel, i);
        if (cand) {
            sys[i] = g.successors(*cand, i);
        } else {
            sys[i].resize(g.count());
            for (std::size_t k = 0; k < g.count(); ++k) sys[i][k] = k;
        }
    }
    std::vector<char> win(g.count(), 0);
    for (std::size_t i = 0; i < g.count(); ++i) win[i] = g.holds(Role::Goal, i);
    auto answerable = [&](std::size_t mid) {
        return std::any_of(sys[mid].begin(), sys[mid].end(), [&](std::size_t t) { return win[t] != 0; });
    };
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<std::size_t> add;
        for (std::size_t i = 0; i < g.count(); ++i) {
            if (win[i]) continue;
            if (std::all_of(env[i].begin(), env[i].end(), answerable)) add.push_back(i);
        }
        for (auto i : add) win[i] = 1;
        changed = !add.empty();
    }
    for (std::size_t i = 0; i < g.count(); ++i)
        if (win[i]) v.winning.push_back(g.decode(i));
    v.holds = true;
    for (auto i : g.initial()) {
        if (win[i]) continue;
        v.holds = false;
        // env keeps play outside the winning set: pick a move sys cannot answer
        std::size_t cur = i;
        std::set<std::size_t> seen;
        while (seen.insert(cur).second) {
            v.counter_play.push_back(g.decode(cur));
            std::size_t mid = *std::find_if(env[cur].begin(), env[cur].end(), [&](std::size_t m) { return !answerable(m); });
            v.counter_play.push_back(g.decode(mid));
            if (sys[mid].empty()) break;
            cur = sys[mid].front();
        }
        break;
    }
    return v;
}

OracleVerdict noninterference(const Graph& g, const SchemaConfig& cfg, const Caps& caps) {
    OracleVerdict v;
    auto index_of = [&](const std::string& name) {
        auto it = std::find(g.names().begin(), g.names().end(), name);
        if (it == g.names().end()) throw InputError("projection variable '" + name + "' is not declared");
        return static_cast<std::size_t>(it - g.names().begin());
    };
    std::vector<std::size_t> in_idx, out_idx;
    for (const auto& x : cfg.low_in) in_idx.push_back(index_of(x));
    for (const auto& x : cfg.low_out) out_idx.push_back(index_of(x));
    auto project = [](const State& s, const std::vector<std::size_t>& idx) {
        State p;
        for (auto i : idx) p.push_back(s[i]);
        return p;
    };
    auto init = g.initial();
    if (init.size() * g.count() > caps.product_points)
        throw ResourceError("product space exceeds " + std::to_string(caps.product_points) + " points");
    // first witness run per (low input, low output) class
    std::map<State, std::map<State, std::vector<State>>> seen;
    for (auto s : init) {
        // runs of one or more steps ending in a final state
        std::map<std::size_t, std::size_t> parent;
        std::deque<std::size_t> work;
        for (auto t : g.next(s))
            if (parent.emplace(t, s).second) work.push_back(t);
        while (!work.empty()) {
            auto cur = work.front();
            work.pop_front();
            for (auto t : g.next(cur))
                if (parent.emplace(t, cur).second) work.push_back(t);
        }
        State low_in = project(g.decode(s), in_idx);
        for (const auto& [t, _] : parent) {
            if (!g.holds(Role::Final, t)) continue;
            State out = project(g.decode(t), out_idx);
            auto& group = seen[low_in];
            if (group.count(out)) continue;
            std::vector<State> rev{g.decode(t)};
            for (std::size_t cur = t;;) {
                std::size_t p = parent.at(cur);
                rev.push_back(g.decode(p));
                if (p == s) break;
                cur = p;
            }
            std::vector<State> run;
            run.assign(rev.rbegin(), rev.rend());
            if (!group.empty()) {
                v.holds = false;
                v.trace = group.begin()->second;
                v.trace_b = run;
                v.reachable = init.size();
                return v;
            }
            group.emplace(out, run);
        }
    }
    v.holds = true;
    v.reachable = init.size();
    return v;
}

} // namespace

OracleVerdict oracle(const TransitionSystem& ts, Query q, const SchemaConfig& cfg, const Caps& caps) {
    Graph g(ts, caps);
    OracleVerdict v;
    switch (q) {
    case Query::Safety: v = safety(g); break;
    case Query::Termination: v = termination(g); break;
    case Query::Eu: v = eu(g); break;
    case Query::Game: v = game(g, ts, cfg); break;
    case Query::Noninterference: v = noninterference(g, cfg, caps); break;
    }
    v.query = q;
    v.vars = g.names();
    v.states = g.count();
    return v;
}

} // namespace hornforge
