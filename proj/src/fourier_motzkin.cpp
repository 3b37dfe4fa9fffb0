// Fourier-Motzkin elimination with Farkas provenance. Equalities are
// eliminated first by substitution; inequality elimination uses
// Chernikov's support bound to discard redundant non-strict rows.

#include <algorithm>
#include <map>

#include "hornforge/errors.hpp"
#include "hornforge/formula.hpp"

namespace hornforge {
namespace {

struct Row {
    std::vector<Rational> a;
    Rational c;
    Rel rel = Rel::Ge;
    std::map<std::size_t, Rational> prov;

    bool mentions(std::size_t j) const { return a[j] != 0; }
    bool is_constant() const {
        return std::all_of(a.begin(), a.end(), [](const Rational& q) { return q == 0; });
    }
    bool constant_holds() const {
        switch (rel) {
        case Rel::Ge: return c >= 0;
        case Rel::Gt: return c > 0;
        case Rel::Eq: return c == 0;
        }
        return false;
    }
};

void axpy(Row& dst, const Rational& k, const Row& src) {
    for (std::size_t j = 0; j < dst.a.size(); ++j)
        if (src.a[j] != 0) dst.a[j] += k * src.a[j];
    dst.c += k * src.c;
    for (const auto& [idx, m] : src.prov) {
        auto& slot = dst.prov[idx];
        slot += k * m;
        if (slot == 0) dst.prov.erase(idx);
    }
}

void scale(Row& r, const Rational& k) {
    for (auto& q : r.a) q *= k;
    r.c *= k;
    for (auto& [_, m] : r.prov) m *= k;
}

/// Scales so the first nonzero coefficient has magnitude one.
void normalize(Row& r) {
    for (const auto& q : r.a)
        if (q != 0) {
            if (abs(q) != 1) scale(r, Rational(1) / abs(q));
            return;
        }
}

FarkasCertificate certificate_of(const Row& r) {
    FarkasCertificate cert;
    for (const auto& [idx, m] : r.prov) cert.multipliers.emplace_back(idx, m);
    return cert;
}

struct Contradiction {
    Row row;
};

class Engine {
public:
    Engine(const Cube& cube, const Caps& caps) : caps_(caps) {
        for (const auto& name : cube.vars()) {
            index_.emplace(name, names_.size());
            names_.push_back(name);
        }
        for (std::size_t i = 0; i < cube.constraints.size(); ++i) {
            const auto& lc = cube.constraints[i];
            Row r;
            r.a.assign(names_.size(), 0);
            for (const auto& [name, k] : lc.term.coeffs()) r.a[index_.at(name)] = k;
            r.c = lc.term.constant();
            r.rel = lc.rel;
            r.prov[i] = 1;
            rels_.push_back(lc.rel);
            rows_.push_back(std::move(r));
        }
        prune_constants();
    }

    /// Substitutes away equalities mentioning one of the selected columns.
    void gaussian(const std::vector<bool>& selected) {
        while (true) {
            std::size_t pick_row = rows_.size(), pick_col = 0;
            for (std::size_t i = 0; i < rows_.size() && pick_row == rows_.size(); ++i) {
                if (rows_[i].rel != Rel::Eq) continue;
                std::size_t best = names_.size();
                for (std::size_t j = 0; j < names_.size(); ++j) {
                    if (!selected[j] || rows_[i].a[j] == 0) continue;
                    if (best == names_.size()) best = j;
                    if (abs(rows_[i].a[j]) == 1) {
                        best = j;
                        break;
                    }
                }
                if (best != names_.size()) {
                    pick_row = i;
                    pick_col = best;
                }
            }
            if (pick_row == rows_.size()) return;
            Row eq = rows_[pick_row];
            rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(pick_row));
            for (auto& r : rows_) {
                if (!r.mentions(pick_col)) continue;
                Rational k = -r.a[pick_col] / eq.a[pick_col];
                axpy(r, k, eq);
                r.a[pick_col] = 0;
            }
            substitutions_.push_back({pick_col, std::move(eq)});
            prune_constants();
        }
    }

    /// Eliminates every selected column by pairwise combination.
    void fourier_motzkin(const std::vector<bool>& selected) {
        while (true) {
            std::size_t best = names_.size();
            long long best_cost = 0;
            for (std::size_t j = 0; j < names_.size(); ++j) {
                if (!selected[j]) continue;
                long long pos = 0, neg = 0;
                bool has_eq = false;
                for (const auto& r : rows_) {
                    if (!r.mentions(j)) continue;
                    if (r.rel == Rel::Eq) has_eq = true;
                    (r.a[j] > 0 ? pos : neg) += 1;
                }
                if (pos + neg == 0 || has_eq) continue;
                long long cost = pos * neg - pos - neg;
                if (best == names_.size() || cost < best_cost) {
                    best = j;
                    best_cost = cost;
                }
            }
            if (best == names_.size()) return;
            eliminate_column(best);
        }
    }

    std::optional<Row> contradiction() const { return contradiction_; }

    Assignment witness() const {
        std::vector<Rational> value(names_.size(), 0);
        for (auto it = eliminations_.rbegin(); it != eliminations_.rend(); ++it) {
            const std::size_t j = it->column;
            std::optional<Rational> lo, hi;
            bool lo_strict = false, hi_strict = false;
            for (const auto& r : it->rows) {
                Rational rest = r.c;
                for (std::size_t k = 0; k < names_.size(); ++k)
                    if (k != j && r.a[k] != 0) rest += r.a[k] * value[k];
                Rational bound = -rest / r.a[j];
                bool strict = r.rel == Rel::Gt;
                if (r.a[j] > 0) {
                    if (!lo || bound > *lo || (bound == *lo && strict)) {
                        lo = bound;
                        lo_strict = strict;
                    }
                } else {
                    if (!hi || bound < *hi || (bound == *hi && strict)) {
                        hi = bound;
                        hi_strict = strict;
                    }
                }
            }
            value[j] = choose(lo, lo_strict, hi, hi_strict);
        }
        for (auto it = substitutions_.rbegin(); it != substitutions_.rend(); ++it) {
            const Row& eq = it->row;
            Rational rest = eq.c;
            for (std::size_t k = 0; k < names_.size(); ++k)
                if (k != it->column && eq.a[k] != 0) rest += eq.a[k] * value[k];
            value[it->column] = -rest / eq.a[it->column];
        }
        Assignment out;
        for (std::size_t k = 0; k < names_.size(); ++k) out.emplace(names_[k], value[k]);
        return out;
    }

    Cube remaining() const {
        Cube out;
        if (contradiction_) {
            out.constraints.push_back({LinTerm(Rational(-1)), Rel::Ge});
            return out;
        }
        for (const auto& r : rows_) {
            LinTerm t(r.c);
            for (std::size_t j = 0; j < names_.size(); ++j)
                if (r.a[j] != 0) t.add(names_[j], r.a[j]);
            out.constraints.push_back({std::move(t), r.rel});
        }
        return out;
    }

    std::size_t column(const std::string& name) const {
        auto it = index_.find(name);
        return it == index_.end() ? names_.size() : it->second;
    }
    std::size_t width() const { return names_.size(); }

private:
    struct Substitution {
        std::size_t column;
        Row row;
    };
    struct Elimination {
        std::size_t column;
        std::vector<Row> rows;
    };

    static Rational choose(const std::optional<Rational>& lo, bool lo_strict, const std::optional<Rational>& hi,
                           bool hi_strict) {
        // Smallest-magnitude integer in the interval when one exists.
        std::optional<BigInt> ilo, ihi;
        if (lo) ilo = lo_strict ? BigInt(floor_of(*lo) + 1) : ceil_of(*lo);
        if (hi) ihi = hi_strict ? BigInt(ceil_of(*hi) - 1) : floor_of(*hi);
        if (!ilo || !ihi || *ilo <= *ihi) {
            BigInt v = 0;
            if (ilo && v < *ilo) v = *ilo;
            if (ihi && v > *ihi) v = *ihi;
            return Rational(v);
        }
        if (*lo == *hi) return *lo;
        return (*lo + *hi) / 2;
    }

    std::size_t support(const Row& r) const {
        std::size_t n = 0;
        for (const auto& [idx, _] : r.prov)
            if (rels_[idx] != Rel::Eq) ++n;
        return n;
    }

    void prune_constants() {
        std::vector<Row> kept;
        kept.reserve(rows_.size());
        for (auto& r : rows_) {
            if (!r.is_constant()) {
                kept.push_back(std::move(r));
                continue;
            }
            if (!r.constant_holds() && !contradiction_) contradiction_ = r;
        }
        rows_ = std::move(kept);
        if (contradiction_) throw Contradiction{*contradiction_};
    }

    void eliminate_column(std::size_t j) {
        std::vector<Row> pos, neg, rest;
        for (auto& r : rows_) {
            if (!r.mentions(j))
                rest.push_back(std::move(r));
            else if (r.a[j] > 0)
                pos.push_back(std::move(r));
            else
                neg.push_back(std::move(r));
        }
        Elimination record{j, {}};
        record.rows.insert(record.rows.end(), pos.begin(), pos.end());
        record.rows.insert(record.rows.end(), neg.begin(), neg.end());
        eliminations_.push_back(std::move(record));
        ++fm_steps_;

        std::map<std::vector<Rational>, std::size_t> seen;
        std::vector<Row> out;
        auto insert = [&](Row r) {
            if (r.is_constant()) {
                if (!r.constant_holds()) {
                    contradiction_ = r;
                    throw Contradiction{r};
                }
                return;
            }
            normalize(r);
            auto [it, fresh] = seen.emplace(r.a, out.size());
            if (fresh) {
                out.push_back(std::move(r));
                if (out.size() > caps_.fm_rows)
                    throw ResourceError("Fourier-Motzkin exceeds " + std::to_string(caps_.fm_rows) + " rows");
                return;
            }
            Row& old = out[it->second];
            bool tighter = r.c < old.c || (r.c == old.c && r.rel == Rel::Gt && old.rel != Rel::Gt);
            if (tighter) old = std::move(r);
        };
        for (auto& r : rest) insert(std::move(r));
        for (const auto& p : pos)
            for (const auto& n : neg) {
                Row r = p;
                scale(r, -n.a[j]);
                axpy(r, p.a[j], n);
                r.a[j] = 0;
                r.rel = (p.rel == Rel::Gt || n.rel == Rel::Gt) ? Rel::Gt : Rel::Ge;
                if (r.rel == Rel::Ge && support(r) > fm_steps_ + 1) continue;
                insert(std::move(r));
            }
        rows_ = std::move(out);
    }

    const Caps& caps_;
    std::vector<std::string> names_;
    std::map<std::string, std::size_t> index_;
    std::vector<Rel> rels_;
    std::vector<Row> rows_;
    std::vector<Substitution> substitutions_;
    std::vector<Elimination> eliminations_;
    std::optional<Row> contradiction_;
    std::size_t fm_steps_ = 0;
};

} // namespace

bool check_farkas(const Cube& cube, const FarkasCertificate& cert) {
    if (cert.multipliers.empty()) return false;
    LinTerm sum;
    bool strict = false, any_ineq = false;
    for (const auto& [idx, m] : cert.multipliers) {
        if (idx >= cube.constraints.size()) return false;
        const auto& c = cube.constraints[idx];
        if (c.rel != Rel::Eq) {
            if (m < 0) return false;
            if (m > 0) {
                any_ineq = true;
                if (c.rel == Rel::Gt) strict = true;
            }
        }
        sum += c.term * m;
    }
    if (!sum.is_constant()) return false;
    const Rational& k = sum.constant();
    if (strict) return k <= 0;
    if (any_ineq) return k < 0;
    return k != 0;
}

CubeResult sat_cube(const Cube& cube, const Caps& caps) {
    try {
        Engine engine(cube, caps);
        std::vector<bool> all(engine.width(), true);
        engine.gaussian(all);
        engine.fourier_motzkin(all);
        Assignment w = engine.witness();
        if (!cube.holds(w)) throw std::logic_error("sat_cube: witness violates cube");
        return w;
    } catch (const Contradiction& c) {
        return certificate_of(c.row);
    }
}

std::optional<Assignment> sat(const Formula& f, const Caps& caps) {
    VarSet vars = f.vars();
    for (const auto& cube : dnf(f, caps)) {
        auto r = sat_cube(cube, caps);
        if (auto* w = std::get_if<Assignment>(&r)) {
            for (const auto& v : vars) w->try_emplace(v, 0);
            return *w;
        }
    }
    return std::nullopt;
}

bool valid(const Formula& f, const Caps& caps) {
    return !sat(negate(f), caps).has_value();
}

Cube eliminate(const std::vector<std::string>& vars, const Cube& cube, const Caps& caps) {
    try {
        Engine engine(cube, caps);
        std::vector<bool> selected(engine.width(), false);
        for (const auto& v : vars) {
            std::size_t j = engine.column(v);
            if (j < engine.width()) selected[j] = true;
        }
        engine.gaussian(selected);
        engine.fourier_motzkin(selected);
        return engine.remaining();
    } catch (const Contradiction&) {
        return Cube{{{LinTerm(Rational(-1)), Rel::Ge}}};
    }
}

} // namespace hornforge
