#include "hornforge/model.hpp"

#include <set>
#include <sstream>

#include "hornforge/errors.hpp"
#include "parse_util.hpp"

namespace hornforge {

std::string_view status_name(Status s) {
    switch (s) {
    case Status::Solved: return "SOLVED";
    case Status::Refuted: return "REFUTED";
    case Status::Unknown: return "UNKNOWN";
    }
    return "?";
}

std::vector<SortedVar> pre_state(const PredicateSymbol& p) {
    return {p.params.begin(), p.params.begin() + static_cast<std::ptrdiff_t>(p.arity() / 2)};
}

std::vector<SortedVar> post_state(const PredicateSymbol& p) {
    return {p.params.begin() + static_cast<std::ptrdiff_t>(p.arity() / 2), p.params.end()};
}

std::vector<Rational> atom_values(const Atom& a, const Assignment& env) {
    std::vector<Rational> out;
    out.reserve(a.args.size());
    for (const auto& x : a.args) out.push_back(env.at(x));
    return out;
}

Assignment bind_params(const PredicateSymbol& p, const std::vector<Rational>& values) {
    Assignment out;
    for (std::size_t i = 0; i < p.params.size() && i < values.size(); ++i) out[p.params[i].name] = values[i];
    return out;
}

Formula point_set(const std::vector<std::string>& vars, const std::vector<std::vector<std::int64_t>>& points) {
    std::vector<Formula> cubes;
    cubes.reserve(points.size());
    for (const auto& pt : points) {
        std::vector<Formula> eqs;
        for (std::size_t i = 0; i < vars.size(); ++i)
            eqs.push_back(Formula::atom(LinTerm::var(vars[i]) - LinTerm(Rational(pt[i])), Rel::Eq));
        cubes.push_back(Formula::conj(eqs));
    }
    return Formula::disj(cubes);
}

// ---------------------------------------------------------------------------
// Text form

std::string model_to_text(const HornSystem& hs, const Model& m) {
    std::ostringstream os;
    for (const auto& p : hs.predicates) {
        auto it = m.interp.find(p.name);
        if (it == m.interp.end()) continue;
        os << p.name << "(";
        for (std::size_t i = 0; i < p.params.size(); ++i) os << (i ? ", " : "") << p.params[i].name;
        os << ") := " << to_string(it->second) << ";\n";
    }
    for (const auto& [name, w] : m.ranks) {
        os << "rank " << name << " := ";
        if (const auto* a = std::get_if<AffineRank>(&w)) {
            os << to_string(a->term);
        } else if (const auto* l = std::get_if<LexRank>(&w)) {
            os << "lex(";
            for (std::size_t i = 0; i < l->components.size(); ++i) os << (i ? ", " : "") << to_string(l->components[i].term);
            os << ")";
        } else {
            const auto& t = std::get<TableRank>(w);
            os << "table {";
            bool first = true;
            for (const auto& [key, value] : t.values) {
                os << (first ? " " : ", ") << "(";
                for (std::size_t i = 0; i < key.size(); ++i) os << (i ? ", " : "") << key[i];
                os << "): " << value;
                first = false;
            }
            os << " }";
        }
        os << ";\n";
    }
    return os.str();
}

namespace {

struct PendingRank {
    std::string pred;
    detail::Token at;
    std::variant<RawTerm, std::vector<RawTerm>, TableRank> body;
};

class ModelReader {
public:
    ModelReader(std::string_view text, const HornSystem& hs) : p_(text), hs_(hs) {}

    Model read() {
        std::vector<PendingRank> ranks;
        bool any = false;
        while (!p_.at_end()) {
            any = true;
            if (p_.is_word("rank") && p_.peek(1).kind == detail::Token::Kind::Ident && p_.is(":=", 2)) ranks.push_back(rank());
            else interpretation();
        }
        if (!any) throw InputError("empty model");
        for (const auto& r : ranks) finish_rank(r);
        return std::move(m_);
    }

private:
    const PredicateSymbol& predicate(const detail::Token& at, const std::string& name) {
        const PredicateSymbol* p = hs_.find(name);
        if (!p) p_.fail(at, "unknown predicate '" + name + "'");
        return *p;
    }

    void interpretation() {
        detail::Token at = p_.peek();
        std::string name = p_.ident();
        const PredicateSymbol& pred = predicate(at, name);
        if (m_.interp.count(name)) p_.fail(at, "duplicate interpretation of '" + name + "'");
        std::vector<std::string> params;
        p_.expect("(");
        if (!p_.is(")")) {
            do {
                params.push_back(p_.ident());
            } while (p_.accept(","));
        }
        p_.expect(")");
        if (params.size() != pred.arity())
            p_.fail(at, "'" + name + "' has arity " + std::to_string(pred.arity()) + ", got " +
                            std::to_string(params.size()) + " parameters");
        if (std::set<std::string>(params.begin(), params.end()).size() != params.size())
            p_.fail(at, "repeated parameter in '" + name + "'");
        p_.expect(":=");
        RenameMap map;
        for (std::size_t i = 0; i < params.size(); ++i) map[params[i]] = pred.params[i].name;
        p_.on_var = [&](const detail::Token& t) {
            if (!map.count(t.text)) p_.fail(t, "'" + t.text + "' is not a parameter of " + name);
        };
        Formula f = nnf(p_.formula());
        p_.on_var = nullptr;
        p_.expect(";");
        headers_[name] = params;
        m_.interp.emplace(name, f.renamed(map));
    }

    PendingRank rank() {
        p_.expect_word("rank");
        PendingRank r;
        r.at = p_.peek();
        r.pred = p_.ident();
        predicate(r.at, r.pred);
        if (seen_ranks_.count(r.pred)) p_.fail(r.at, "duplicate rank for '" + r.pred + "'");
        seen_ranks_.insert(r.pred);
        p_.expect(":=");
        if (p_.is_word("lex") && p_.is("(", 1)) {
            p_.next();
            p_.expect("(");
            std::vector<RawTerm> parts;
            do {
                parts.push_back(p_.term());
            } while (p_.accept(","));
            p_.expect(")");
            r.body = std::move(parts);
        } else if (p_.is_word("table") && p_.is("{", 1)) {
            p_.next();
            p_.expect("{");
            TableRank t;
            while (!p_.is("}")) {
                p_.expect("(");
                std::vector<std::int64_t> key;
                if (!p_.is(")")) {
                    do {
                        key.push_back(small(p_.integer()));
                    } while (p_.accept(","));
                }
                p_.expect(")");
                p_.expect(":");
                detail::Token vt = p_.peek();
                std::int64_t value = small(p_.integer());
                if (!t.values.emplace(key, value).second) p_.fail(vt, "duplicate table key");
                if (!p_.accept(",")) break;
            }
            p_.expect("}");
            r.body = std::move(t);
        } else {
            r.body = p_.term();
        }
        p_.expect(";");
        return r;
    }

    std::int64_t small(const BigInt& v) {
        if (!v.fits_slong_p()) p_.fail(p_.peek(), "table entry out of range");
        return v.get_si();
    }

    void finish_rank(const PendingRank& r) {
        const PredicateSymbol& pred = *hs_.find(r.pred);
        auto pre = pre_state(pred);
        RenameMap map;
        auto header = headers_.find(r.pred);
        for (std::size_t i = 0; i < pre.size(); ++i)
            map[header != headers_.end() ? header->second[i] : pre[i].name] = pre[i].name;
        auto affine = [&](const RawTerm& raw) {
            LinTerm t;
            try {
                t = linearize(raw);
            } catch (const InputError& e) {
                p_.fail(r.at, e.what());
            }
            for (const auto& v : t.vars())
                if (!map.count(v)) p_.fail(r.at, "rank of " + r.pred + " mentions '" + v + "', not a pre-state parameter");
            return AffineRank{t.renamed(map)};
        };
        if (const auto* raw = std::get_if<RawTerm>(&r.body)) {
            m_.ranks.emplace(r.pred, affine(*raw));
        } else if (const auto* parts = std::get_if<std::vector<RawTerm>>(&r.body)) {
            LexRank lex;
            for (const auto& part : *parts) lex.components.push_back(affine(part));
            m_.ranks.emplace(r.pred, lex);
        } else {
            const auto& t = std::get<TableRank>(r.body);
            for (const auto& [key, _] : t.values)
                if (key.size() != pre.size()) p_.fail(r.at, "table key arity does not match " + r.pred);
            m_.ranks.emplace(r.pred, t);
        }
    }

    detail::Parser p_;
    const HornSystem& hs_;
    Model m_;
    std::map<std::string, std::vector<std::string>> headers_;
    std::set<std::string> seen_ranks_;
};

} // namespace

Model parse_model(std::string_view text, const HornSystem& hs) { return ModelReader(text, hs).read(); }

} // namespace hornforge
