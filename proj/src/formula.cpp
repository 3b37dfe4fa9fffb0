#include "hornforge/formula.hpp"

#include <algorithm>
#include <sstream>

#include "hornforge/errors.hpp"

namespace hornforge {

std::string to_string(const Rational& q) {
    return q.get_str();
}

bool is_integer(const Rational& q) {
    return q.get_den() == 1;
}

BigInt floor_of(const Rational& q) {
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

BigInt ceil_of(const Rational& q) {
    BigInt r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

// ---------------------------------------------------------------------------
// LinTerm

LinTerm LinTerm::var(const std::string& name, const Rational& coeff) {
    LinTerm t;
    t.add(name, coeff);
    return t;
}

Rational LinTerm::coeff(const std::string& name) const {
    auto it = coeffs_.find(name);
    return it == coeffs_.end() ? Rational(0) : it->second;
}

VarSet LinTerm::vars() const {
    VarSet out;
    for (const auto& [name, _] : coeffs_) out.insert(name);
    return out;
}

void LinTerm::add(const std::string& name, const Rational& coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = coeffs_.try_emplace(name, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) coeffs_.erase(it);
    }
}

LinTerm& LinTerm::operator+=(const LinTerm& other) {
    for (const auto& [name, c] : other.coeffs_) add(name, c);
    constant_ += other.constant_;
    return *this;
}

LinTerm& LinTerm::operator-=(const LinTerm& other) {
    for (const auto& [name, c] : other.coeffs_) add(name, -c);
    constant_ -= other.constant_;
    return *this;
}

LinTerm& LinTerm::operator*=(const Rational& k) {
    if (k == 0) {
        coeffs_.clear();
        constant_ = 0;
        return *this;
    }
    for (auto& [_, c] : coeffs_) c *= k;
    constant_ *= k;
    return *this;
}

LinTerm LinTerm::operator-() const {
    LinTerm t = *this;
    t *= -1;
    return t;
}

bool operator==(const LinTerm& a, const LinTerm& b) {
    return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
}

bool operator<(const LinTerm& a, const LinTerm& b) {
    if (a.coeffs_ != b.coeffs_) return a.coeffs_ < b.coeffs_;
    return a.constant_ < b.constant_;
}

Rational LinTerm::eval(const Assignment& env) const {
    Rational v = constant_;
    for (const auto& [name, c] : coeffs_) v += c * env.at(name);
    return v;
}

LinTerm LinTerm::renamed(const RenameMap& map) const {
    LinTerm t(constant_);
    for (const auto& [name, c] : coeffs_) {
        auto it = map.find(name);
        t.add(it == map.end() ? name : it->second, c);
    }
    return t;
}

LinTerm LinTerm::partial_eval(const Assignment& env) const {
    LinTerm t(constant_);
    for (const auto& [name, c] : coeffs_) {
        auto it = env.find(name);
        if (it == env.end())
            t.add(name, c);
        else
            t.constant_ += c * it->second;
    }
    return t;
}

LinTerm LinTerm::substituted(const std::string& name, const LinTerm& replacement) const {
    auto it = coeffs_.find(name);
    if (it == coeffs_.end()) return *this;
    LinTerm t = *this;
    Rational c = it->second;
    t.coeffs_.erase(name);
    t += replacement * c;
    return t;
}

// ---------------------------------------------------------------------------
// LinConstraint

bool LinConstraint::holds(const Assignment& env) const {
    Rational v = term.eval(env);
    switch (rel) {
    case Rel::Ge: return v >= 0;
    case Rel::Gt: return v > 0;
    case Rel::Eq: return v == 0;
    }
    return false;
}

bool LinConstraint::constant_truth() const {
    const Rational& v = term.constant();
    switch (rel) {
    case Rel::Ge: return v >= 0;
    case Rel::Gt: return v > 0;
    case Rel::Eq: return v == 0;
    }
    return false;
}

LinConstraint LinConstraint::canonical() const {
    if (term.is_constant()) return *this;
    BigInt lcm_den = term.constant().get_den();
    for (const auto& [_, c] : term.coeffs()) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den_mpz_t());
    BigInt g = 0;
    auto fold = [&](const Rational& c) {
        BigInt n = c.get_num() * (lcm_den / c.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    };
    for (const auto& [_, c] : term.coeffs()) fold(c);
    fold(term.constant());
    Rational scale(lcm_den, g);
    scale.canonicalize();
    if (rel == Rel::Eq && term.coeffs().begin()->second < 0) scale = -scale;
    return {term * scale, rel};
}

bool operator<(const LinConstraint& a, const LinConstraint& b) {
    if (a.term == b.term) return a.rel < b.rel;
    return a.term < b.term;
}

std::vector<LinConstraint> negate(const LinConstraint& c) {
    switch (c.rel) {
    case Rel::Ge: return {{-c.term, Rel::Gt}};
    case Rel::Gt: return {{-c.term, Rel::Ge}};
    case Rel::Eq: return {{c.term, Rel::Gt}, {-c.term, Rel::Gt}};
    }
    return {};
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
    Kind kind = Kind::True;
    std::vector<Formula> children;
    LinConstraint atom;
};

Formula::Formula() : Formula(top()) {}

Formula Formula::top() {
    static const auto node = std::make_shared<const Node>(Node{Kind::True, {}, {}});
    return Formula(node);
}

Formula Formula::bottom() {
    static const auto node = std::make_shared<const Node>(Node{Kind::False, {}, {}});
    return Formula(node);
}

Formula Formula::atom(const LinConstraint& c) {
    if (c.term.is_constant()) return c.constant_truth() ? top() : bottom();
    return Formula(std::make_shared<const Node>(Node{Kind::Atom, {}, c.canonical()}));
}

Formula Formula::conj(const std::vector<Formula>& parts) {
    std::vector<Formula> kids;
    for (const auto& p : parts) {
        switch (p.kind()) {
        case Kind::True: break;
        case Kind::False: return bottom();
        case Kind::And:
            for (const auto& k : p.children()) kids.push_back(k);
            break;
        default: kids.push_back(p);
        }
    }
    if (kids.empty()) return top();
    if (kids.size() == 1) return kids.front();
    return Formula(std::make_shared<const Node>(Node{Kind::And, std::move(kids), {}}));
}

Formula Formula::disj(const std::vector<Formula>& parts) {
    std::vector<Formula> kids;
    for (const auto& p : parts) {
        switch (p.kind()) {
        case Kind::False: break;
        case Kind::True: return top();
        case Kind::Or:
            for (const auto& k : p.children()) kids.push_back(k);
            break;
        default: kids.push_back(p);
        }
    }
    if (kids.empty()) return bottom();
    if (kids.size() == 1) return kids.front();
    return Formula(std::make_shared<const Node>(Node{Kind::Or, std::move(kids), {}}));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const std::vector<Formula>& Formula::children() const { return node_->children; }
const LinConstraint& Formula::constraint() const { return node_->atom; }

bool Formula::eval(const Assignment& env) const {
    switch (kind()) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Atom: return constraint().holds(env);
    case Kind::And:
        return std::all_of(children().begin(), children().end(), [&](const Formula& f) { return f.eval(env); });
    case Kind::Or:
        return std::any_of(children().begin(), children().end(), [&](const Formula& f) { return f.eval(env); });
    }
    return false;
}

VarSet Formula::vars() const {
    VarSet out;
    switch (kind()) {
    case Kind::Atom: return constraint().term.vars();
    case Kind::And:
    case Kind::Or:
        for (const auto& c : children()) {
            VarSet v = c.vars();
            out.insert(v.begin(), v.end());
        }
        break;
    default: break;
    }
    return out;
}

Formula Formula::renamed(const RenameMap& map) const {
    switch (kind()) {
    case Kind::Atom: return atom(constraint().renamed(map));
    case Kind::And:
    case Kind::Or: {
        std::vector<Formula> kids;
        kids.reserve(children().size());
        for (const auto& c : children()) kids.push_back(c.renamed(map));
        return kind() == Kind::And ? conj(kids) : disj(kids);
    }
    default: return *this;
    }
}

Formula Formula::partial_eval(const Assignment& env) const {
    switch (kind()) {
    case Kind::Atom: return atom({constraint().term.partial_eval(env), constraint().rel});
    case Kind::And:
    case Kind::Or: {
        std::vector<Formula> kids;
        kids.reserve(children().size());
        for (const auto& c : children()) kids.push_back(c.partial_eval(env));
        return kind() == Kind::And ? conj(kids) : disj(kids);
    }
    default: return *this;
    }
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False: return true;
    case Formula::Kind::Atom: return a.constraint() == b.constraint();
    default: return a.children() == b.children();
    }
}

Formula operator&&(const Formula& a, const Formula& b) { return Formula::conj({a, b}); }
Formula operator||(const Formula& a, const Formula& b) { return Formula::disj({a, b}); }

Formula negate(const Formula& f) {
    switch (f.kind()) {
    case Formula::Kind::True: return Formula::bottom();
    case Formula::Kind::False: return Formula::top();
    case Formula::Kind::Atom: {
        std::vector<Formula> alts;
        for (const auto& c : negate(f.constraint())) alts.push_back(Formula::atom(c));
        return Formula::disj(alts);
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        std::vector<Formula> kids;
        for (const auto& c : f.children()) kids.push_back(negate(c));
        return f.kind() == Formula::Kind::And ? Formula::disj(kids) : Formula::conj(kids);
    }
    }
    return f;
}

Formula implies(const Formula& a, const Formula& b) {
    return negate(a) || b;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_monomials(std::ostream& os, const LinTerm& t) {
    bool first = true;
    for (const auto& [name, c] : t.coeffs()) {
        Rational mag = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (mag != 1) os << to_string(mag) << "*";
        os << name;
        first = false;
    }
}

const char* rel_text(Rel r) {
    switch (r) {
    case Rel::Ge: return ">=";
    case Rel::Gt: return ">";
    case Rel::Eq: return "=";
    }
    return "?";
}

void print_formula(std::ostream& os, const Formula& f, bool parenthesize_or) {
    switch (f.kind()) {
    case Formula::Kind::True: os << "true"; return;
    case Formula::Kind::False: os << "false"; return;
    case Formula::Kind::Atom: os << to_string(f.constraint()); return;
    case Formula::Kind::And: {
        bool first = true;
        for (const auto& c : f.children()) {
            if (!first) os << " && ";
            print_formula(os, c, true);
            first = false;
        }
        return;
    }
    case Formula::Kind::Or: {
        if (parenthesize_or) os << "(";
        bool first = true;
        for (const auto& c : f.children()) {
            if (!first) os << " || ";
            print_formula(os, c, false);
            first = false;
        }
        if (parenthesize_or) os << ")";
        return;
    }
    }
}

} // namespace

std::string to_string(const LinTerm& t) {
    std::ostringstream os;
    if (t.is_constant()) return to_string(t.constant());
    print_monomials(os, t);
    if (t.constant() != 0) os << (t.constant() < 0 ? " - " : " + ") << to_string(abs(t.constant()));
    return os.str();
}

std::string to_string(const LinConstraint& c) {
    std::ostringstream os;
    if (c.term.is_constant()) {
        os << to_string(c.term.constant()) << " " << rel_text(c.rel) << " 0";
        return os.str();
    }
    print_monomials(os, c.term);
    os << " " << rel_text(c.rel) << " " << to_string(Rational(-c.term.constant()));
    return os.str();
}

std::string to_string(const Formula& f) {
    std::ostringstream os;
    print_formula(os, f, false);
    return os.str();
}

// ---------------------------------------------------------------------------
// Raw formulas

RawTerm RawTerm::constant(Rational v) {
    RawTerm t;
    t.op = Op::Const;
    t.value = std::move(v);
    return t;
}

RawTerm RawTerm::variable(std::string n) {
    RawTerm t;
    t.op = Op::Var;
    t.name = std::move(n);
    return t;
}

RawTerm RawTerm::binary(Op op, RawTerm a, RawTerm b) {
    RawTerm t;
    t.op = op;
    t.args = {std::move(a), std::move(b)};
    return t;
}

RawTerm RawTerm::negated(RawTerm a) {
    RawTerm t;
    t.op = Op::Neg;
    t.args = {std::move(a)};
    return t;
}

RawFormula RawFormula::boolean(bool b) {
    RawFormula f;
    f.op = b ? Op::True : Op::False;
    return f;
}

RawFormula RawFormula::compare(RawTerm lhs, CmpOp op, RawTerm rhs) {
    RawFormula f;
    f.op = Op::Cmp;
    f.cmp = op;
    f.lhs = std::move(lhs);
    f.rhs = std::move(rhs);
    return f;
}

RawFormula RawFormula::negation(RawFormula inner) {
    RawFormula f;
    f.op = Op::Not;
    f.args = {std::move(inner)};
    return f;
}

RawFormula RawFormula::conjunction(std::vector<RawFormula> fs) {
    RawFormula f;
    f.op = Op::And;
    f.args = std::move(fs);
    return f;
}

RawFormula RawFormula::disjunction(std::vector<RawFormula> fs) {
    RawFormula f;
    f.op = Op::Or;
    f.args = std::move(fs);
    return f;
}

RawFormula RawFormula::from(const Formula& f) {
    switch (f.kind()) {
    case Formula::Kind::True: return boolean(true);
    case Formula::Kind::False: return boolean(false);
    case Formula::Kind::Atom: {
        const LinConstraint& c = f.constraint();
        RawTerm t = RawTerm::constant(c.term.constant());
        for (const auto& [name, k] : c.term.coeffs())
            t = RawTerm::binary(RawTerm::Op::Add, std::move(t),
                                RawTerm::binary(RawTerm::Op::Mul, RawTerm::constant(k), RawTerm::variable(name)));
        CmpOp op = c.rel == Rel::Ge ? CmpOp::Ge : c.rel == Rel::Gt ? CmpOp::Gt : CmpOp::Eq;
        return compare(std::move(t), op, RawTerm::constant(0));
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        std::vector<RawFormula> kids;
        for (const auto& c : f.children()) kids.push_back(from(c));
        return f.kind() == Formula::Kind::And ? conjunction(std::move(kids)) : disjunction(std::move(kids));
    }
    }
    return boolean(true);
}

LinTerm linearize(const RawTerm& t) {
    switch (t.op) {
    case RawTerm::Op::Const: return LinTerm(t.value);
    case RawTerm::Op::Var: return LinTerm::var(t.name);
    case RawTerm::Op::Neg: return -linearize(t.args.at(0));
    case RawTerm::Op::Add: return linearize(t.args.at(0)) + linearize(t.args.at(1));
    case RawTerm::Op::Sub: return linearize(t.args.at(0)) - linearize(t.args.at(1));
    case RawTerm::Op::Mul: {
        LinTerm a = linearize(t.args.at(0));
        LinTerm b = linearize(t.args.at(1));
        if (a.is_constant()) return b * a.constant();
        if (b.is_constant()) return a * b.constant();
        throw InputError("nonlinear term: product of " + to_string(a) + " and " + to_string(b));
    }
    }
    return {};
}

namespace {

Formula nnf_polar(const RawFormula& f, bool negated) {
    using Op = RawFormula::Op;
    switch (f.op) {
    case Op::True: return negated ? Formula::bottom() : Formula::top();
    case Op::False: return negated ? Formula::top() : Formula::bottom();
    case Op::Not: return nnf_polar(f.args.at(0), !negated);
    case Op::And:
    case Op::Or: {
        std::vector<Formula> kids;
        for (const auto& a : f.args) kids.push_back(nnf_polar(a, negated));
        bool as_and = (f.op == Op::And) != negated;
        return as_and ? Formula::conj(kids) : Formula::disj(kids);
    }
    case Op::Cmp: {
        LinTerm t = linearize(f.lhs) - linearize(f.rhs);
        CmpOp op = f.cmp;
        if (negated) {
            switch (op) {
            case CmpOp::Le: op = CmpOp::Gt; break;
            case CmpOp::Lt: op = CmpOp::Ge; break;
            case CmpOp::Eq: op = CmpOp::Ne; break;
            case CmpOp::Ne: op = CmpOp::Eq; break;
            case CmpOp::Ge: op = CmpOp::Lt; break;
            case CmpOp::Gt: op = CmpOp::Le; break;
            }
        }
        switch (op) {
        case CmpOp::Le: return Formula::atom(-t, Rel::Ge);
        case CmpOp::Lt: return Formula::atom(-t, Rel::Gt);
        case CmpOp::Eq: return Formula::atom(t, Rel::Eq);
        case CmpOp::Ne: return Formula::disj({Formula::atom(t, Rel::Gt), Formula::atom(-t, Rel::Gt)});
        case CmpOp::Ge: return Formula::atom(t, Rel::Ge);
        case CmpOp::Gt: return Formula::atom(t, Rel::Gt);
        }
    }
    }
    return Formula::top();
}

} // namespace

Formula nnf(const RawFormula& f) {
    return nnf_polar(f, false);
}

// ---------------------------------------------------------------------------
// Cubes and DNF

VarSet Cube::vars() const {
    VarSet out;
    for (const auto& c : constraints)
        for (const auto& [name, _] : c.term.coeffs()) out.insert(name);
    return out;
}

bool Cube::holds(const Assignment& env) const {
    return std::all_of(constraints.begin(), constraints.end(), [&](const LinConstraint& c) { return c.holds(env); });
}

Formula Cube::to_formula() const {
    std::vector<Formula> parts;
    for (const auto& c : constraints) parts.push_back(Formula::atom(c));
    return Formula::conj(parts);
}

Cube Cube::renamed(const RenameMap& map) const {
    Cube out;
    out.constraints.reserve(constraints.size());
    for (const auto& c : constraints) out.constraints.push_back(c.renamed(map));
    return out;
}

Cube Cube::normalized() const {
    Cube out;
    for (const auto& c : constraints) out.constraints.push_back(c.canonical());
    std::sort(out.constraints.begin(), out.constraints.end());
    out.constraints.erase(std::unique(out.constraints.begin(), out.constraints.end()), out.constraints.end());
    return out;
}

namespace {

std::vector<Cube> dnf_rec(const Formula& f, const Caps& caps) {
    switch (f.kind()) {
    case Formula::Kind::True: return {Cube{}};
    case Formula::Kind::False: return {};
    case Formula::Kind::Atom: return {Cube{{f.constraint()}}};
    case Formula::Kind::Or: {
        std::vector<Cube> out;
        for (const auto& c : f.children()) {
            auto sub = dnf_rec(c, caps);
            out.insert(out.end(), sub.begin(), sub.end());
            if (out.size() > caps.dnf_cubes)
                throw ResourceError("DNF exceeds " + std::to_string(caps.dnf_cubes) + " cubes");
        }
        return out;
    }
    case Formula::Kind::And: {
        std::vector<Cube> acc{Cube{}};
        for (const auto& c : f.children()) {
            auto sub = dnf_rec(c, caps);
            if (acc.size() * sub.size() > caps.dnf_cubes)
                throw ResourceError("DNF exceeds " + std::to_string(caps.dnf_cubes) + " cubes");
            std::vector<Cube> next;
            next.reserve(acc.size() * sub.size());
            for (const auto& a : acc)
                for (const auto& b : sub) {
                    Cube m = a;
                    m.constraints.insert(m.constraints.end(), b.constraints.begin(), b.constraints.end());
                    next.push_back(std::move(m));
                }
            acc = std::move(next);
        }
        return acc;
    }
    }
    return {};
}

} // namespace

std::vector<Cube> dnf(const Formula& f, const Caps& caps) {
    return dnf_rec(f, caps);
}

} // namespace hornforge
