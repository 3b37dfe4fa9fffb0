#include <algorithm>
#include <cstdlib>

#include "hornforge/errors.hpp"
#include "hornforge/formula.hpp"

namespace hornforge {
namespace {

bool all_integer(const LinTerm& t, const VarSet& int_vars) {
    return std::all_of(t.coeffs().begin(), t.coeffs().end(),
                       [&](const auto& kv) { return int_vars.count(kv.first) > 0; });
}

BigInt gcd_of(const BigInt& a, const BigInt& b) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

} // namespace

std::optional<Cube> tighten_integer(const Cube& cube, const VarSet& int_vars) {
    Cube out;
    out.constraints.reserve(cube.constraints.size());
    for (const auto& c : cube.constraints) {
        if (c.term.is_constant() || !all_integer(c.term, int_vars)) {
            out.constraints.push_back(c);
            continue;
        }
        BigInt lcm = c.term.constant().get_den();
        for (const auto& [_, k] : c.term.coeffs()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), k.get_den_mpz_t());
        LinTerm t = c.term * Rational(lcm);
        BigInt g = 0;
        for (const auto& [_, k] : t.coeffs()) g = gcd_of(g, k.get_num());
        BigInt constant = t.constant().get_num();
        LinTerm vars_only = t;
        vars_only.set_constant(0);
        vars_only *= Rational(1, 1) / Rational(g);
        switch (c.rel) {
        case Rel::Eq: {
            BigInt rem;
            mpz_tdiv_r(rem.get_mpz_t(), constant.get_mpz_t(), g.get_mpz_t());
            if (rem != 0) return std::nullopt;
            vars_only.set_constant(Rational(constant / g));
            out.constraints.push_back({vars_only, Rel::Eq});
            break;
        }
        case Rel::Gt:
            constant -= 1;
            [[fallthrough]];
        case Rel::Ge:
            vars_only.set_constant(Rational(floor_of(Rational(constant, g))));
            out.constraints.push_back({vars_only, Rel::Ge});
            break;
        }
    }
    return out;
}

namespace {

std::optional<Assignment> branch_and_bound(const Cube& cube, const VarSet& int_vars, const Caps& caps,
                                           std::size_t& nodes) {
    if (++nodes > caps.bnb_nodes)
        throw ResourceError("branch and bound exceeds " + std::to_string(caps.bnb_nodes) + " nodes");
    auto tight = tighten_integer(cube, int_vars);
    if (!tight) return std::nullopt;
    auto r = sat_cube(*tight, caps);
    auto* w = std::get_if<Assignment>(&r);
    if (!w) return std::nullopt;
    for (const auto& [name, value] : *w) {
        if (!int_vars.count(name) || is_integer(value)) continue;
        Cube down = *tight;
        down.constraints.push_back({LinTerm::var(name, -1) + LinTerm(Rational(floor_of(value))), Rel::Ge});
        if (auto s = branch_and_bound(down, int_vars, caps, nodes)) return s;
        Cube up = *tight;
        up.constraints.push_back({LinTerm::var(name) - LinTerm(Rational(ceil_of(value))), Rel::Ge});
        return branch_and_bound(up, int_vars, caps, nodes);
    }
    return *w;
}

} // namespace

std::optional<Assignment> sat_mixed(const Cube& cube, const VarSet& int_vars, const Caps& caps) {
    std::size_t nodes = 0;
    return branch_and_bound(cube, int_vars, caps, nodes);
}

std::optional<Assignment> int_sat(const Cube& cube, const Box& bounds, const Caps& caps) {
    Cube boxed = cube;
    VarSet ints;
    std::uint64_t points = 1;
    bool overflow = false;
    for (const auto& v : cube.vars()) {
        auto it = bounds.find(v);
        if (it == bounds.end()) throw InputError("int_sat: variable '" + v + "' has no bounds");
        ints.insert(v);
        auto [lo, hi] = it->second;
        boxed.constraints.push_back({LinTerm::var(v) - LinTerm(Rational(lo)), Rel::Ge});
        boxed.constraints.push_back({LinTerm(Rational(hi)) - LinTerm::var(v), Rel::Ge});
        if (hi < lo) return std::nullopt;
        auto width = static_cast<std::uint64_t>(hi - lo) + 1;
        if (points > caps.box_points / width) overflow = true;
        else points *= width;
    }
    try {
        return sat_mixed(boxed, ints, caps);
    } catch (const ResourceError&) {
        if (overflow) throw ResourceError("int_sat: box exceeds " + std::to_string(caps.box_points) +
                                          " points and branch and bound is inconclusive");
    }
    std::vector<std::string> order(ints.begin(), ints.end());
    std::optional<Assignment> found;
    enumerate_solutions(
        cube.to_formula(), order, bounds,
        [&](const Assignment& a) {
            found = a;
            return false;
        },
        caps.box_points, caps);
    return found;
}

std::optional<Assignment> find_model(const Formula& f, const VarSet& int_vars, const Caps& caps) {
    VarSet vars = f.vars();
    for (const auto& cube : dnf(f, caps)) {
        if (auto w = sat_mixed(cube, int_vars, caps)) {
            for (const auto& v : vars) w->try_emplace(v, 0);
            return w;
        }
    }
    return std::nullopt;
}

std::optional<Assignment> find_counter(const Formula& body, const Formula& head, const VarSet& int_vars,
                                      const Caps& caps) {
    VarSet vars = body.vars();
    for (const auto& v : head.vars()) vars.insert(v);
    auto finish = [&](Assignment w) {
        for (const auto& v : vars) w.try_emplace(v, 0);
        return w;
    };
    std::vector<Cube> head_cubes = dnf(head, caps);
    std::size_t cap = caps.dnf_cubes * 16;
    for (const auto& b : dnf(body, caps)) {
        if (!sat_mixed(b, int_vars, caps)) continue;
        // subtract each head cube from the residual region
        std::vector<Cube> residual{b};
        for (const auto& h : head_cubes) {
            std::vector<Cube> next;
            for (const auto& r : residual) {
                Cube prefix = r;
                for (const auto& c : h.constraints) {
                    for (const auto& n : negate(c)) {
                        Cube cand = prefix;
                        cand.constraints.push_back(n);
                        if (sat_mixed(cand, int_vars, caps)) next.push_back(std::move(cand));
                        if (next.size() > cap) throw ResourceError("cube subtraction exceeds " + std::to_string(cap) + " cubes");
                    }
                    prefix.constraints.push_back(c);
                    if (!sat_mixed(prefix, int_vars, caps)) break;
                }
            }
            residual = std::move(next);
            if (residual.empty()) break;
        }
        if (!residual.empty()) return finish(*sat_mixed(residual.front(), int_vars, caps));
    }
    return std::nullopt;
}

bool valid_mixed(const Formula& f, const VarSet& int_vars, const Caps& caps) {
    return !find_model(negate(f), int_vars, caps).has_value();
}

// ---------------------------------------------------------------------------
// Bounded enumeration with single-variable propagation

namespace {

struct Enumerator {
    const std::vector<std::string>& vars;
    const Box& box;
    const std::function<bool(const Assignment&)>& visit;
    std::uint64_t max_nodes;
    std::uint64_t nodes = 0;

    // constraints grouped by the position of their last variable in `vars`
    std::vector<std::vector<const LinConstraint*>> closing;
    Assignment current;

    bool run(const Cube& cube) {
        std::map<std::string, std::size_t> pos;
        for (std::size_t i = 0; i < vars.size(); ++i) pos[vars[i]] = i;
        closing.assign(vars.size(), {});
        for (const auto& c : cube.constraints) {
            if (c.term.is_constant()) {
                if (!c.constant_truth()) return true;
                continue;
            }
            std::size_t last = 0;
            for (const auto& [name, _] : c.term.coeffs()) {
                auto it = pos.find(name);
                if (it == pos.end()) throw InputError("enumerate: variable '" + name + "' is not enumerated");
                last = std::max(last, it->second);
            }
            closing[last].push_back(&c);
        }
        current.clear();
        return descend(0);
    }

    bool descend(std::size_t i) {
        if (++nodes > max_nodes) throw ResourceError("enumeration exceeds " + std::to_string(max_nodes) + " nodes");
        if (i == vars.size()) return visit(current);
        const std::string& x = vars[i];
        auto b = box.find(x);
        if (b == box.end()) throw InputError("enumerate: variable '" + x + "' has no bounds");
        BigInt lo = b->second.first, hi = b->second.second;
        std::optional<BigInt> fixed;
        for (const LinConstraint* c : closing[i]) {
            Rational a = c->term.coeff(x);
            Rational rest = c->term.constant();
            for (const auto& [name, k] : c->term.coeffs())
                if (name != x) rest += k * current.at(name);
            Rational bound = -rest / a;
            switch (c->rel) {
            case Rel::Eq:
                if (!is_integer(bound)) return true;
                if (fixed && *fixed != bound.get_num()) return true;
                fixed = bound.get_num();
                break;
            case Rel::Ge:
                if (a > 0) lo = std::max(lo, ceil_of(bound));
                else hi = std::min(hi, floor_of(bound));
                break;
            case Rel::Gt:
                if (a > 0) lo = std::max(lo, BigInt(floor_of(bound) + 1));
                else hi = std::min(hi, BigInt(ceil_of(bound) - 1));
                break;
            }
        }
        if (fixed) {
            if (*fixed < lo || *fixed > hi) return true;
            lo = hi = *fixed;
        }
        for (BigInt v = lo; v <= hi; ++v) {
            current[x] = Rational(v);
            if (!descend(i + 1)) return false;
        }
        current.erase(x);
        return true;
    }
};

} // namespace

void enumerate_solutions(const Formula& f, const std::vector<std::string>& vars, const Box& box,
                         const std::function<bool(const Assignment&)>& visit, std::uint64_t max_nodes,
                         const Caps& caps) {
    auto cubes = dnf(f, caps);
    std::vector<Cube> seen;
    std::function<bool(const Assignment&)> filtered = [&](const Assignment& a) {
        for (const auto& prior : seen)
            if (prior.holds(a)) return true;
        return visit(a);
    };
    Enumerator runner{vars, box, filtered, max_nodes, 0, {}, {}};
    for (const auto& cube : cubes) {
        if (!runner.run(cube)) return;
        seen.push_back(cube);
    }
}

} // namespace hornforge
