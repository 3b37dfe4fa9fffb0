// Acceptance checks: one PASS/FAIL line per criterion.
// usage: acceptance CORPUS_DIR HORN_FORGE_BINARY [CRITERION...]

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <unistd.h>

#include "hornforge/game.hpp"
#include "hornforge/report.hpp"
#include "hornforge/wf.hpp"
#include "support.hpp"

using namespace hornforge;
namespace fs = std::filesystem;

namespace {

struct Instance {
    std::string file;
    Schema schema;
    SchemaConfig cfg;
    std::string low_in, low_out;
    TransitionSystem ts;
    HornSystem hs;
    Verdict verdict;
    bool truth = false;
    double seconds = 0;
};

struct Line {
    bool pass = true;
    std::vector<std::string> notes;
    void fail(const std::string& why) {
        pass = false;
        if (notes.size() < 6) notes.push_back(why);
    }
};

auto clock_start = std::chrono::steady_clock::now();

void report(int n, const std::string& title, const Line& l, const std::string& summary) {
    auto now = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(now - clock_start).count();
    clock_start = now;
    char took[32];
    std::snprintf(took, sizeof took, " [%.1f s]", secs);
    std::cout << "criterion " << n << " [" << title << "]: " << (l.pass ? "PASS" : "FAIL") << " - " << summary << took
              << "\n" << std::flush;
    for (const auto& s : l.notes) std::cout << "    " << s << "\n";
}

std::string tag(const Instance& i) { return i.file + " " + std::string(schema_name(i.schema)); }

std::string quote(const std::string& s) { return "'" + s + "'"; }

int run(const std::string& cmd, const std::string& out = "/dev/null") {
    int rc = std::system((cmd + " >" + quote(out) + " 2>/dev/null").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::vector<Instance> load(const std::string& dir) {
    auto manifest = nlohmann::json::parse(hf_test::slurp(dir + "/manifest.json"));
    std::vector<Instance> out;
    for (const auto& e : manifest.at("systems")) {
        for (const auto& s : e.at("schemas")) {
            Instance i;
            i.file = e.at("file").get<std::string>();
            i.schema = schema_from_name(s.get<std::string>());
            if (e.contains("low_in")) {
                i.low_in = e.at("low_in").get<std::string>();
                i.low_out = e.at("low_out").get<std::string>();
                i.cfg.low_in = {i.low_in};
                i.cfg.low_out = {i.low_out};
            }
            i.ts = parse_program(hf_test::slurp(dir + "/" + i.file));
            i.hs = generate(i.ts, i.schema, i.cfg);
            out.push_back(std::move(i));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// ground semantics of plain Horn clauses over bounded integer universals

constexpr std::uint64_t kGroundCap = 400000;

std::optional<bool> ground_clause(const HornSystem& hs, const Clause& c, const Model& m) {
    if (c.has_exists() || !all_bounded_int(c.universals)) return std::nullopt;
    std::uint64_t size = 1;
    for (const auto& u : c.universals) {
        size *= static_cast<std::uint64_t>(u.bounds->second - u.bounds->first + 1);
        if (size > kGroundCap) return std::nullopt;
    }
    auto inst = [&](const Atom& a, const Assignment& env) {
        const PredicateSymbol* p = hs.find(a.pred);
        Assignment b;
        for (std::size_t i = 0; i < p->arity(); ++i) b[p->params[i].name] = env.at(a.args[i]);
        return m.interp.at(a.pred).eval(b);
    };
    Assignment env;
    bool ok = true;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (!ok) return;
        if (k == c.universals.size()) {
            if (!c.body_constraint.eval(env)) return;
            for (const auto& a : c.body_atoms)
                if (!inst(a, env)) return;
            if (const auto* h = std::get_if<Atom>(&c.head)) {
                if (!inst(*h, env)) ok = false;
            } else {
                ok = false;
            }
            return;
        }
        const auto& u = c.universals[k];
        for (std::int64_t v = u.bounds->first; v <= u.bounds->second && ok; ++v) {
            env[u.name] = v;
            rec(k + 1);
        }
    };
    rec(0);
    return ok;
}

// Whether m satisfies every non-wf clause of hs; nullopt when too large.
std::optional<bool> ground_model(const HornSystem& hs, const Model& m) {
    for (const auto& c : hs.clauses) {
        auto r = ground_clause(hs, c, m);
        if (!r) return std::nullopt;
        if (!*r) return false;
    }
    return true;
}

std::size_t atom_count(const Formula& f) {
    if (f.kind() == Formula::Kind::Atom) return 1;
    std::size_t n = 0;
    for (const auto& c : f.children()) n += atom_count(c);
    return n;
}

// Shifts the constant of the k-th atom (preorder) by delta.
Formula shift_atom(const Formula& f, std::size_t& k, int delta) {
    switch (f.kind()) {
    case Formula::Kind::Atom: {
        if (k-- != 0) return f;
        LinConstraint c = f.constraint();
        c.term.set_constant(c.term.constant() + delta);
        return Formula::atom(c);
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        std::vector<Formula> parts;
        for (const auto& c : f.children()) parts.push_back(shift_atom(c, k, delta));
        return f.kind() == Formula::Kind::And ? Formula::conj(parts) : Formula::disj(parts);
    }
    default:
        return f;
    }
}

// ---------------------------------------------------------------------------
// game replays against the raw program semantics

std::vector<StateVec> box_states(const TransitionSystem& ts) {
    std::vector<StateVec> out{{}};
    for (const auto& v : ts.vars) {
        std::vector<StateVec> next;
        for (const auto& s : out)
            for (std::int64_t x = v.bounds->first; x <= v.bounds->second; ++x) {
                auto t = s;
                t.push_back(x);
                next.push_back(t);
            }
        out = std::move(next);
    }
    return out;
}

Assignment pair_env(const TransitionSystem& ts, const StateVec& a, const StateVec& b) {
    Assignment env;
    for (std::size_t i = 0; i < ts.vars.size(); ++i) {
        env[ts.vars[i].name] = a[i];
        env[primed(ts.vars[i].name)] = b[i];
    }
    return env;
}

Assignment state_env(const TransitionSystem& ts, const StateVec& a) {
    Assignment env;
    for (std::size_t i = 0; i < ts.vars.size(); ++i) env[ts.vars[i].name] = a[i];
    return env;
}

struct GameSetup {
    const TransitionSystem& ts;
    std::vector<StateVec> all;
    std::map<StateVec, std::vector<StateVec>> env_moves;
    ExplicitSpace sp;
    std::map<std::size_t, std::size_t> strat;
    std::vector<char> winning;

    GameSetup(const TransitionSystem& t, const SchemaConfig& cfg) : ts(t), all(box_states(t)), sp(enumerate(t, cfg)) {
        // brute force on small boxes; larger ones reuse the engine's lists, re-checked move by move
        Formula env = ts.get(Role::Env);
        if (all.size() <= 1000) {
            for (const auto& s : all)
                for (const auto& m : all)
                    if (env.eval(pair_env(ts, s, m))) env_moves[s].push_back(m);
        } else {
            for (std::size_t s = 0; s < sp.size(); ++s)
                for (auto m : sp.env[s]) {
                    if (!env.eval(pair_env(ts, sp.states[s], sp.states[m]))) throw std::runtime_error("bad env move");
                    env_moves[sp.states[s]].push_back(sp.states[m]);
                }
        }
        auto r = game_attractor(sp);
        winning = r.winning;
        strat = extract_strategy(sp, r);
    }

    bool goal(const StateVec& s) const { return ts.get(Role::Goal).eval(state_env(ts, s)); }

    // sys answer to an intermediate state, checked against the next relation
    std::optional<StateVec> answer(const StateVec& mid) const {
        auto i = sp.index_of(mid);
        if (!i) return std::nullopt;
        auto it = strat.find(*i);
        if (it == strat.end()) return std::nullopt;
        StateVec to = sp.states[it->second];
        if (ts.has(Role::Next) && !ts.get(Role::Next).eval(pair_env(ts, mid, to))) return std::nullopt;
        return to;
    }
};

// Every env choice from every initial state: the strategy must reach the goal
// without revisiting a state. Returns an error or empty.
std::string exhaustive_replay(const GameSetup& g) {
    Formula init = g.ts.get(Role::Init);
    std::map<StateVec, int> color;  // 1 on stack, 2 done
    std::string err;
    std::function<void(const StateVec&)> dfs = [&](const StateVec& s) {
        if (!err.empty() || g.goal(s)) return;
        auto& c = color[s];
        if (c == 2) return;
        if (c == 1) {
            err = "play cycles outside the goal";
            return;
        }
        c = 1;
        auto it = g.env_moves.find(s);
        if (it != g.env_moves.end())
            for (const auto& mid : it->second) {
                auto to = g.answer(mid);
                if (!to) {
                    err = "strategy has no legal answer";
                    return;
                }
                dfs(*to);
            }
        color[s] = 2;
    };
    for (const auto& s : g.all)
        if (init.eval(state_env(g.ts, s))) dfs(s);
    return err;
}

std::string random_replays(const GameSetup& g, int count, std::mt19937& rng) {
    Formula init = g.ts.get(Role::Init);
    std::vector<StateVec> starts;
    for (const auto& s : g.all)
        if (init.eval(state_env(g.ts, s))) starts.push_back(s);
    for (int n = 0; n < count; ++n) {
        StateVec s = starts[rng() % starts.size()];
        std::size_t steps = 0;
        while (!g.goal(s)) {
            if (++steps > g.all.size()) return "play does not reach the goal";
            auto it = g.env_moves.find(s);
            if (it == g.env_moves.end() || it->second.empty()) break;
            const auto& mid = it->second[rng() % it->second.size()];
            auto to = g.answer(mid);
            if (!to) return "strategy has no legal answer";
            s = *to;
        }
    }
    return "";
}

TransitionSystem small_game(std::int64_t n, std::int64_t step, int env_kind) {
    static const char* envs[] = {"x' = x", "x' = x || x' = x + 1", "x' = x || (x >= 1 && x' = x - 1)",
                                 "x' = 0 || x' = x"};
    std::string src = "var x: int[0," + std::to_string(n) + "]; init: x = 0; env: " + envs[env_kind] +
                      "; next: x' - x <= " + std::to_string(step) + " && x - x' <= " + std::to_string(step) +
                      "; goal: x >= " + std::to_string(n) + ";";
    return parse_program(src);
}

Cube cube_from(const std::string& s) { return hf_test::cube_of(s); }

Cube random_cube(std::mt19937& rng, const std::vector<std::string>& vars) {
    std::uniform_int_distribution<int> coeff(-3, 3), cst(-6, 6), rows(2, 5), rel(0, 5);
    Cube c;
    int n = rows(rng);
    for (int i = 0; i < n; ++i) {
        LinTerm t{Rational(cst(rng))};
        for (const auto& v : vars) t.add(v, Rational(coeff(rng)));
        int r = rel(rng);
        c.constraints.push_back({t, r < 3 ? Rel::Ge : r < 5 ? Rel::Gt : Rel::Eq});
    }
    return c;
}

bool cube_holds_after(const Cube& c, const Assignment& at) {
    for (const auto& r : c.constraints)
        if (!LinConstraint{r.term.partial_eval(at), r.rel}.constant_truth()) return false;
    return true;
}

bool result_sat(const Cube& c) {
    if (c.vars().empty()) return cube_holds_after(c, {});
    return std::holds_alternative<Assignment>(sat_cube(c));
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance CORPUS_DIR HORN_FORGE_BINARY [CRITERION...]\n";
        return 2;
    }
    const std::string corpus = argv[1], bin = argv[2];
    std::set<int> chosen;
    for (int a = 3; a < argc; ++a) chosen.insert(std::atoi(argv[a]));
    auto want = [&](int n) { return chosen.empty() || chosen.count(n) > 0; };
    bool all = true;
    fs::path tmp = fs::temp_directory_path() / ("horn-forge-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(tmp);

    auto instances = load(corpus);
    double total = 0;
    if (want(1) || want(2) || want(3) || want(6)) {
        for (auto& i : instances) {
            SolveOptions o;
            o.ts = &i.ts;
            o.cfg = i.cfg;
            auto t0 = std::chrono::steady_clock::now();
            i.verdict = solve(i.hs, o);
            i.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            total += i.seconds;
            i.truth = oracle(i.ts, query_for(i.schema), i.cfg).holds;
        }
        clock_start = std::chrono::steady_clock::now();
    }

    // ---- 1. corpus agreement
    if (want(1)) {
        Line l;
        std::set<std::string> systems;
        std::size_t unknown = 0, unsound = 0, decided = 0;
        for (auto& i : instances) {
            systems.insert(i.file);
            switch (i.verdict.status) {
            case Status::Unknown:
                ++unknown;
                l.notes.push_back("unknown: " + tag(i) + " (" + i.verdict.reason + ")");
                break;
            case Status::Solved:
            case Status::Refuted:
                ++decided;
                if ((i.verdict.status == Status::Solved) != i.truth) {
                    ++unsound;
                    l.fail("disagrees with the oracle: " + tag(i));
                }
            }
        }
        if (systems.size() < 12) l.fail("fewer than 12 systems");
        if (unknown > 2) l.fail("more than 2 unknowns");
        if (total >= 120) l.fail("runtime over 120 s");
        report(1, "corpus agreement", l,
               std::to_string(systems.size()) + " systems, " + std::to_string(instances.size()) + " instances, " +
                   std::to_string(decided) + " decided, " + std::to_string(unknown) + " unknown, " +
                   std::to_string(unsound) + " unsound, solver time " + std::to_string(static_cast<int>(total)) + " s");
        all = all && l.pass;
    }

    // ---- 2. certificate soundness
    if (want(2)) {
        Line l;
        std::size_t certified = 0, solved = 0, refuted = 0, replayed = 0, mutants = 0, rejected = 0, equivalent = 0,
                    bmc_checked = 0;
        for (const auto& i : instances) {
            std::string flags = " --schema " + std::string(schema_name(i.schema));
            if (!i.low_in.empty()) flags += " --low-in " + i.low_in + " --low-out " + i.low_out;
            std::string file = quote(corpus + "/" + i.file);
            if (i.verdict.status == Status::Solved) {
                ++solved;
                fs::path report_path = tmp / "report.json";
                int rc = run(quote(bin) + " solve " + file + flags + " --format json", report_path.string());
                if (rc != 0) {
                    l.fail("cli solve exit " + std::to_string(rc) + ": " + tag(i));
                    continue;
                }
                rc = run(quote(bin) + " certify " + file + flags + " --model " + quote(report_path.string()));
                if (rc == 0) ++certified;
                else l.fail("certify rejected the solve report: " + tag(i));
                // a certified model admits no bounded refutation
                if (!i.hs.has_exists() && !i.hs.has_wf() && i.seconds < 1.0) {
                    ++bmc_checked;
                    if (bmc(i.hs, 20)) l.fail("bmc refutes a certified model: " + tag(i));
                }
            } else if (i.verdict.status == Status::Refuted) {
                ++refuted;
                const auto& r = *i.verdict.refutation;
                bool ok = std::holds_alternative<Derivation>(r) ? check_derivation(i.hs, std::get<Derivation>(r))
                                                                : check_refutation(i.hs, r);
                if (ok) ++replayed;
                else l.fail("refutation does not replay: " + tag(i));
            }
        }
        // mutation suite: shift one atom bound of one interpretation by +-1;
        // large union-of-cubes models are covered by the JSON re-certification above
        for (const auto& i : instances) {
            if (i.verdict.status != Status::Solved || i.hs.has_exists() || i.seconds >= 1.0) continue;
            const Model& m = *i.verdict.model;
            std::size_t size = 0;
            for (const auto& [pred, f] : m.interp) size += atom_count(f);
            if (size > 24) continue;
            std::size_t per_instance = 0;
            for (const auto& [pred, f] : m.interp) {
                if (i.hs.is_wf(pred)) continue;
                std::size_t n = atom_count(f);
                for (std::size_t a = 0; a < n && per_instance < 12; ++a)
                    for (int delta : {-1, 1}) {
                        Model mut = m;
                        std::size_t k = a;
                        mut.interp[pred] = shift_atom(f, k, delta);
                        auto truth = ground_model(i.hs, mut);
                        if (!truth) continue;
                        ++per_instance;
                        bool accepted = all_hold(check_model(i.hs, mut));
                        if (*truth) {
                            ++equivalent;
                            if (!accepted) l.fail("certifier rejects a valid mutant of " + tag(i));
                            continue;
                        }
                        ++mutants;
                        if (!accepted) ++rejected;
                        else l.fail("certifier accepts an invalid mutant of " + tag(i) + ": " + pred);
                    }
            }
        }
        if (mutants < 20) l.fail("fewer than 20 invalid mutants");
        report(2, "certificate soundness", l,
               std::to_string(certified) + "/" + std::to_string(solved) + " solved re-certified from JSON, " +
                   std::to_string(replayed) + "/" + std::to_string(refuted) + " refutations replay, " +
                   std::to_string(rejected) + "/" + std::to_string(mutants) + " invalid mutants rejected (" +
                   std::to_string(equivalent) + " still-valid mutants excluded), " + std::to_string(bmc_checked) +
                   " models spot-checked with bmc(20)");
        all = all && l.pass;
    }

    // ---- 3. proof-rule equivalence
    if (want(3)) {
        Line l;
        std::map<std::string, std::map<Schema, Status>> by_file;
        std::map<std::string, bool> truth;
        for (const auto& i : instances)
            if (i.schema == Schema::SafetyFwd || i.schema == Schema::SafetyBwd || i.schema == Schema::SafetyComb) {
                by_file[i.file][i.schema] = i.verdict.status;
                truth[i.file] = i.truth;
            }
        std::size_t agree = 0;
        for (const auto& [file, st] : by_file) {
            bool ok = st.size() == 3;
            Status want = truth[file] ? Status::Solved : Status::Refuted;
            for (const auto& [s, v] : st) ok = ok && v == want;
            if (ok) ++agree;
            else l.fail("schemas disagree on " + file);
        }
        report(3, "proof-rule equivalence", l,
               std::to_string(agree) + "/" + std::to_string(by_file.size()) +
                   " systems agree across forward, backward and combined and with the oracle");
        all = all && l.pass;
    }

    // ---- 4. ranking synthesis
    if (want(4)) {
        Line l;
        std::mt19937 rng(4242);
        std::uniform_int_distribution<int> c(-10, 10), d(1, 4), k(-3, 3), pick(0, 2);
        std::vector<SortedVar> st{{"x", Sort::Int, std::nullopt}, {"y", Sort::Int, std::nullopt}};
        int ok = 0, made = 0;
        while (made < 50) {
            std::string text = "x >= " + std::to_string(c(rng)) + " && x - x' >= " + std::to_string(d(rng));
            for (int n = pick(rng); n > 0; --n) {
                const char* sides[] = {"y' = y + ", "y - x <= ", "y' - y >= "};
                text += std::string(" && ") + sides[pick(rng)] + std::to_string(k(rng));
            }
            Cube rel = cube_from(text);
            if (!std::holds_alternative<Assignment>(sat_cube(rel))) continue;
            ++made;
            auto r = pr_synthesize(rel);
            if (r && check_rank(rel.to_formula(), *r, st)) ++ok;
            else l.fail("no checked rank for " + text);
        }
        bool reflexive = !pr_synthesize(cube_from("x' = x"));
        if (!reflexive) l.fail("rank returned for x' = x");
        auto tp = parse_program(hf_test::slurp(corpus + "/two_phase.ts"));
        auto parts = dnf(tp.get(Role::Next));
        auto lex = lex_synthesize(parts, int_vars_of(tp.vars));
        bool lex_ok = lex && check_rank(tp.get(Role::Next), *lex, tp.vars);
        if (!lex_ok) l.fail("lex_synthesize fails on the two-phase loop");
        report(4, "ranking synthesis", l,
               std::to_string(ok) + "/50 random relations ranked and checked, reflexive " +
                   (reflexive ? "rejected" : "ranked") + ", two-phase lex " + (lex_ok ? "found" : "missing") +
                   (lex ? " (" + std::to_string(lex->components.size()) + " components)" : ""));
        all = all && l.pass;
    }

    // ---- 5. game and EU correctness
    if (want(5)) {
        Line l;
        std::size_t exhaustive = 0, winners = 0, random_plays = 0, eu = 0, eu_match = 0, traps = 0;
        std::mt19937 rng(555);
        auto check_game = [&](const TransitionSystem& ts, const SchemaConfig& cfg, const std::string& name) {
            GameSetup g(ts, cfg);
            bool realizable = oracle(ts, Query::Game, cfg).holds;
            bool init_wins = true;
            for (std::size_t s = 0; s < g.sp.size(); ++s)
                if (g.sp.init[s] && !g.winning[s]) init_wins = false;
            if (init_wins != realizable) l.fail("attractor and oracle disagree on " + name);
            if (!realizable) {
                // the trap must hold up against the oracle's counter play
                auto o = oracle(ts, Query::Game, cfg);
                for (const auto& s : o.counter_play) {
                    auto i = g.sp.index_of(s);
                    if (!i || g.winning[*i]) l.fail("counter play enters the winning set on " + name);
                }
                ++traps;
                return;
            }
            ++winners;
            if (g.sp.size() <= 1000) {
                auto err = exhaustive_replay(g);
                ++exhaustive;
                if (!err.empty()) l.fail(name + ": " + err);
            } else {
                auto err = random_replays(g, 100, rng);
                random_plays += 100;
                if (!err.empty()) l.fail(name + ": " + err);
            }
        };
        for (const auto& i : instances)
            if (i.schema == Schema::ReachGame) check_game(i.ts, i.cfg, i.file);
        for (std::int64_t n : {4, 7, 12, 20, 31})
            for (std::int64_t step : {1, 2, 3})
                for (int kind = 0; kind < 4; ++kind)
                    check_game(small_game(n, step, kind), {},
                               "game n=" + std::to_string(n) + " step=" + std::to_string(step) + " env=" +
                                   std::to_string(kind));
        // EU: verdicts against the oracle, witness paths against the program
        for (const auto& i : instances) {
            if (i.schema != Schema::ExistsUntil) continue;
            ++eu;
            if ((i.verdict.status == Status::Solved) == i.truth) ++eu_match;
            else l.fail("eu verdict disagrees on " + i.file);
            if (!i.truth) continue;
            auto sp = enumerate(i.ts);
            auto r = eu_attractor(sp);
            auto strat = extract_strategy(sp, r);
            Formula p = i.ts.get(Role::P), q = i.ts.get(Role::Q), next = i.ts.get(Role::Next);
            for (std::size_t s = 0; s < sp.size(); ++s) {
                if (!sp.init[s]) continue;
                std::size_t cur = s, steps = 0;
                while (!q.eval(state_env(i.ts, sp.states[cur]))) {
                    auto it = strat.find(cur);
                    if (!p.eval(state_env(i.ts, sp.states[cur])) || it == strat.end() || ++steps > sp.size() ||
                        !next.eval(pair_env(i.ts, sp.states[cur], sp.states[it->second]))) {
                        l.fail("eu witness path breaks on " + i.file);
                        break;
                    }
                    cur = it->second;
                }
            }
        }
        report(5, "game and EU correctness", l,
               std::to_string(winners) + " realizable games, " + std::to_string(exhaustive) +
                   " replayed exhaustively, " + std::to_string(random_plays) + " random plays on larger spaces, " +
                   std::to_string(traps) + " unrealizable games checked, EU " + std::to_string(eu_match) + "/" +
                   std::to_string(eu) + " match the oracle");
        all = all && l.pass;
    }

    // ---- 6. formula kernel
    if (want(6)) {
        Line l;
        std::mt19937 rng(6060);
        std::size_t checked = 0, unsat = 0, certs = 0;
        const std::vector<std::string> vars{"x", "y", "z"};
        for (int n = 0; n < 200; ++n) {
            Cube c = random_cube(rng, vars);
            std::size_t k = 1 + n % 3;
            std::vector<std::string> elim(vars.end() - static_cast<long>(k), vars.end());
            std::vector<std::string> keep(vars.begin(), vars.end() - static_cast<long>(k));
            Cube p = eliminate(elim, c);
            bool ok = true;
            for (const auto& v : elim) ok = ok && !p.vars().count(v);
            // every grid point of the cube survives projection
            bool grid_sat = false;
            for (int x = -5; x <= 5; ++x)
                for (int y = -5; y <= 5; ++y)
                    for (int z = -5; z <= 5; ++z) {
                        Assignment pt{{"x", x}, {"y", y}, {"z", z}};
                        if (!c.holds(pt)) continue;
                        grid_sat = true;
                        Assignment kept;
                        for (const auto& v : keep) kept[v] = pt.at(v);
                        ok = ok && cube_holds_after(p, kept);
                    }
            // equisatisfiability
            auto r = sat_cube(c);
            bool rational_sat = std::holds_alternative<Assignment>(r);
            ok = ok && rational_sat == result_sat(p);
            if (grid_sat) ok = ok && rational_sat;
            if (!rational_sat) {
                ++unsat;
                if (hf_test::farkas_resums(c, std::get<FarkasCertificate>(r))) ++certs;
                else l.fail("certificate does not re-sum: " + to_string(c.to_formula()));
            } else {
                ok = ok && c.holds(std::get<Assignment>(r));
            }
            ok = ok && to_string(eliminate(elim, c).to_formula()) == to_string(p.to_formula());
            if (ok) ++checked;
            else l.fail("projection mismatch: " + to_string(c.to_formula()));
        }
        // byte-identical machine output
        std::size_t same = 0, runs = 0;
        for (const auto& i : instances) {
            if (i.seconds > 1.0) continue;
            std::string flags = " --schema " + std::string(schema_name(i.schema));
            if (!i.low_in.empty()) flags += " --low-in " + i.low_in + " --low-out " + i.low_out;
            std::string base = quote(bin) + " solve " + quote(corpus + "/" + i.file) + flags + " --format json";
            auto a = tmp / "a.json", b = tmp / "b.json";
            run(base, a.string());
            run(base, b.string());
            ++runs;
            if (hf_test::slurp(a.string()) == hf_test::slurp(b.string())) ++same;
            else l.fail("non-deterministic output: " + tag(i));
        }
        report(6, "formula kernel", l,
               std::to_string(checked) + "/200 eliminations equisatisfiable, " + std::to_string(certs) + "/" +
                   std::to_string(unsat) + " farkas certificates re-sum, " + std::to_string(same) + "/" +
                   std::to_string(runs) + " repeated solve runs byte-identical");
        all = all && l.pass;
    }

    // ---- 7. emission round trip
    if (want(7)) {
        Line l;
        std::size_t eligible = 0, ok = 0;
        for (const auto& i : instances) {
            if (i.hs.has_exists() || i.hs.has_wf()) continue;
            ++eligible;
            std::string text = emit_smtlib(i.hs);
            HornSystem back = parse_smtlib_horn(text);
            if (isomorphic(back, i.hs) && emit_smtlib(back) == text) ++ok;
            else l.fail("round trip differs: " + tag(i));
        }
        report(7, "emission round trip", l,
               std::to_string(ok) + "/" + std::to_string(eligible) + " emission-eligible instances round-trip");
        all = all && l.pass;
    }

    fs::remove_all(tmp);
    return all ? 0 : 1;
}
