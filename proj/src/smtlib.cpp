#include <cctype>
#include <map>
#include <sstream>

#include "hornforge/errors.hpp"
#include "hornforge/horn.hpp"

namespace hornforge {
namespace {

// ---------------------------------------------------------------------------
// Emission

std::string symbol(const std::string& name) {
    bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
    for (char c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || std::string_view("~!@$%^&*_-+=<>.?/").find(c) != std::string_view::npos))
            simple = false;
    return simple ? name : "|" + name + "|";
}

std::string sort_text(Sort s) { return s == Sort::Int ? "Int" : "Real"; }

std::string numeral(const BigInt& v, bool real) {
    std::string digits = BigInt(abs(v)).get_str() + (real ? ".0" : "");
    return v < 0 ? "(- " + digits + ")" : digits;
}

class Emitter {
public:
    explicit Emitter(const std::map<std::string, Sort>& sorts) : sorts_(sorts) {}

    std::string formula(const Formula& f) const {
        switch (f.kind()) {
        case Formula::Kind::True: return "true";
        case Formula::Kind::False: return "false";
        case Formula::Kind::Atom: return atom(f.constraint());
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::string s = f.kind() == Formula::Kind::And ? "(and" : "(or";
            for (const auto& c : f.children()) s += " " + formula(c);
            return s + ")";
        }
        }
        return "";
    }

private:
    // Canonical atoms have integer coefficients and constants.
    std::string atom(const LinConstraint& c) const {
        bool real = false;
        for (const auto& [name, _] : c.term.coeffs()) {
            auto it = sorts_.find(name);
            if (it != sorts_.end() && it->second == Sort::Rat) real = true;
        }
        std::vector<std::string> mono;
        for (const auto& [name, k] : c.term.coeffs()) {
            std::string v = real && sort_of(name) == Sort::Int ? "(to_real " + symbol(name) + ")" : symbol(name);
            if (k == 1) mono.push_back(v);
            else if (k == -1) mono.push_back("(- " + v + ")");
            else mono.push_back("(* " + numeral(k.get_num(), real) + " " + v + ")");
        }
        std::string lhs = mono.size() == 1 ? mono.front() : "(+";
        if (mono.size() > 1) {
            for (const auto& m : mono) lhs += " " + m;
            lhs += ")";
        }
        std::string rel = c.rel == Rel::Ge ? ">=" : c.rel == Rel::Gt ? ">" : "=";
        return "(" + rel + " " + lhs + " " + numeral(BigInt(-c.term.constant().get_num()), real) + ")";
    }

    Sort sort_of(const std::string& name) const {
        auto it = sorts_.find(name);
        return it == sorts_.end() ? Sort::Int : it->second;
    }

    const std::map<std::string, Sort>& sorts_;
};

std::string atom_text(const Atom& a) {
    if (a.args.empty()) return symbol(a.pred);
    std::string s = "(" + symbol(a.pred);
    for (const auto& x : a.args) s += " " + symbol(x);
    return s + ")";
}

} // namespace

std::string emit_smtlib(const HornSystem& hs) {
    if (hs.has_exists()) throw UnsupportedFragment("existential clause heads have no SMT-LIB HORN encoding");
    if (hs.has_wf()) throw UnsupportedFragment("well-foundedness marks have no SMT-LIB HORN encoding");
    std::ostringstream os;
    os << "(set-logic HORN)\n";
    os << "(set-info :source |horn-forge schema=" << hs.schema << " system=" << hs.system << "|)\n";
    for (const auto& p : hs.predicates) {
        os << "(declare-fun " << symbol(p.name) << " (";
        for (std::size_t i = 0; i < p.params.size(); ++i) os << (i ? " " : "") << sort_text(p.params[i].sort);
        os << ") Bool)\n";
    }
    for (const auto& c : hs.clauses) {
        std::map<std::string, Sort> sorts;
        for (const auto& v : c.universals) sorts[v.name] = v.sort;
        Emitter em(sorts);
        std::vector<std::string> body;
        for (const auto& v : c.universals)
            if (v.bounds)
                body.push_back("(<= " + numeral(v.bounds->first, false) + " " + symbol(v.name) + " " +
                               numeral(v.bounds->second, false) + ")");
        for (const auto& a : c.body_atoms) body.push_back(atom_text(a));
        if (c.body_constraint.kind() == Formula::Kind::And) {
            for (const auto& k : c.body_constraint.children()) body.push_back(em.formula(k));
        } else if (!c.body_constraint.is_true()) {
            body.push_back(em.formula(c.body_constraint));
        }
        std::string body_text;
        if (body.empty()) body_text = "true";
        else if (body.size() == 1) body_text = body.front();
        else {
            body_text = "(and";
            for (const auto& b : body) body_text += " " + b;
            body_text += ")";
        }
        std::string head = std::holds_alternative<FalseHead>(c.head) ? "false" : atom_text(std::get<Atom>(c.head));
        std::string impl = "(=> " + body_text + " " + head + ")";
        if (c.universals.empty()) {
            os << "(assert " << impl << ")\n";
        } else {
            os << "(assert (forall (";
            for (std::size_t i = 0; i < c.universals.size(); ++i)
                os << (i ? " " : "") << "(" << symbol(c.universals[i].name) << " " << sort_text(c.universals[i].sort)
                   << ")";
            os << ") " << impl << "))\n";
        }
    }
    os << "(check-sat)\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct SExpr {
    bool is_list = false;
    bool quoted = false;  // |symbol|
    std::string atom;
    std::vector<SExpr> items;
    int line = 1, column = 1;

    bool is(std::string_view s) const { return !is_list && !quoted && atom == s; }
};

[[noreturn]] void fail(const SExpr& at, const std::string& msg) {
    throw InputError(msg, static_cast<std::size_t>(at.line), static_cast<std::size_t>(at.column));
}

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    std::vector<SExpr> all() {
        std::vector<SExpr> out;
        skip();
        while (i_ < text_.size()) {
            out.push_back(read());
            skip();
        }
        return out;
    }

private:
    void skip() {
        while (i_ < text_.size()) {
            char c = text_[i_];
            if (c == ';') {
                while (i_ < text_.size() && text_[i_] != '\n') step();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                step();
            } else {
                break;
            }
        }
    }

    void step() {
        if (text_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    SExpr read() {
        SExpr e;
        e.line = line_;
        e.column = col_;
        char c = text_[i_];
        if (c == '(') {
            step();
            e.is_list = true;
            skip();
            while (i_ < text_.size() && text_[i_] != ')') {
                e.items.push_back(read());
                skip();
            }
            if (i_ >= text_.size()) fail(e, "unbalanced parenthesis");
            step();
            return e;
        }
        if (c == ')') fail(e, "unexpected ')'");
        if (c == '|') {
            step();
            std::size_t start = i_;
            while (i_ < text_.size() && text_[i_] != '|') step();
            if (i_ >= text_.size()) fail(e, "unterminated quoted symbol");
            e.atom = std::string(text_.substr(start, i_ - start));
            e.quoted = true;
            step();
            return e;
        }
        if (c == '"') {
            step();
            std::size_t start = i_;
            while (i_ < text_.size() && text_[i_] != '"') step();
            if (i_ >= text_.size()) fail(e, "unterminated string");
            e.atom = "\"" + std::string(text_.substr(start, i_ - start)) + "\"";
            step();
            return e;
        }
        std::size_t start = i_;
        while (i_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[i_])) && text_[i_] != '(' &&
               text_[i_] != ')' && text_[i_] != '|' && text_[i_] != ';')
            step();
        e.atom = std::string(text_.substr(start, i_ - start));
        return e;
    }

    std::string_view text_;
    std::size_t i_ = 0;
    int line_ = 1, col_ = 1;
};

bool is_numeral(const SExpr& e) {
    if (e.is_list || e.quoted || e.atom.empty()) return false;
    bool dot = false;
    for (char c : e.atom) {
        if (c == '.' && !dot) dot = true;
        else if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return std::isdigit(static_cast<unsigned char>(e.atom.front())) && std::isdigit(static_cast<unsigned char>(e.atom.back()));
}

Rational numeral_value(const SExpr& e) {
    auto dot = e.atom.find('.');
    if (dot == std::string::npos) return Rational(BigInt(e.atom));
    std::string frac = e.atom.substr(dot + 1);
    BigInt den = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
    Rational q(BigInt(e.atom.substr(0, dot) + frac), den);
    q.canonicalize();
    return q;
}

class HornReader {
public:
    HornSystem read(std::string_view text) {
        auto cmds = Reader(text).all();
        if (cmds.empty()) throw InputError("empty SMT-LIB input");
        bool logic = false, check = false;
        for (const auto& cmd : cmds) {
            if (!cmd.is_list || cmd.items.empty() || cmd.items[0].is_list) fail(cmd, "expected a command");
            const std::string& head = cmd.items[0].atom;
            if (check) fail(cmd, "command after check-sat");
            if (head == "set-logic") {
                if (cmd.items.size() != 2 || !cmd.items[1].is("HORN")) fail(cmd, "only (set-logic HORN) is supported");
                logic = true;
            } else if (head == "set-info") {
                info(cmd);
            } else if (head == "declare-fun") {
                declare(cmd);
            } else if (head == "assert") {
                if (!logic) fail(cmd, "assert before set-logic");
                if (cmd.items.size() != 2) fail(cmd, "assert takes one argument");
                hs_.clauses.push_back(clause(cmd.items[1]));
            } else if (head == "check-sat") {
                check = true;
            } else {
                fail(cmd, "unsupported command '" + head + "'");
            }
        }
        if (!logic) throw InputError("missing (set-logic HORN)");
        return std::move(hs_);
    }

private:
    void info(const SExpr& cmd) {
        if (cmd.items.size() != 3) fail(cmd, "malformed set-info");
        if (cmd.items[1].atom != ":source") return;
        std::istringstream is(cmd.items[2].atom);
        std::string word;
        while (is >> word) {
            if (word.rfind("schema=", 0) == 0) hs_.schema = word.substr(7);
            else if (word.rfind("system=", 0) == 0) hs_.system = word.substr(7);
        }
    }

    void declare(const SExpr& cmd) {
        if (cmd.items.size() != 4 || cmd.items[1].is_list || !cmd.items[2].is_list || cmd.items[3].is_list)
            fail(cmd, "malformed declare-fun");
        if (!cmd.items[3].is("Bool")) fail(cmd.items[3], "declare-fun with non-Bool codomain");
        PredicateSymbol p;
        p.name = cmd.items[1].atom;
        if (hs_.find(p.name)) fail(cmd.items[1], "duplicate declaration of '" + p.name + "'");
        for (const auto& s : cmd.items[2].items) {
            SortedVar v;
            v.name = "a" + std::to_string(p.params.size());
            v.sort = sort(s);
            p.params.push_back(v);
        }
        hs_.predicates.push_back(std::move(p));
    }

    static Sort sort(const SExpr& s) {
        if (s.is("Int")) return Sort::Int;
        if (s.is("Real")) return Sort::Rat;
        fail(s, "unsupported sort");
    }

    Clause clause(const SExpr& e) {
        Clause c;
        const SExpr* impl = &e;
        if (e.is_list && !e.items.empty() && e.items[0].is("forall")) {
            if (e.items.size() != 3 || !e.items[1].is_list) fail(e, "malformed forall");
            for (const auto& b : e.items[1].items) {
                if (!b.is_list || b.items.size() != 2 || b.items[0].is_list) fail(b, "malformed binder");
                SortedVar v;
                v.name = b.items[0].atom;
                v.sort = sort(b.items[1]);
                c.universals.push_back(v);
            }
            impl = &e.items[2];
        }
        if (!impl->is_list || impl->items.size() != 3 || !impl->items[0].is("=>")) fail(*impl, "expected (=> body head)");
        scope_ = &c;
        std::vector<const SExpr*> elems;
        const SExpr& body = impl->items[1];
        if (body.is_list && !body.items.empty() && body.items[0].is("and")) {
            for (std::size_t k = 1; k < body.items.size(); ++k) elems.push_back(&body.items[k]);
        } else if (!body.is("true")) {
            elems.push_back(&body);
        }
        std::vector<Formula> constraint;
        for (const SExpr* el : elems) {
            if (auto a = pred_atom(*el)) {
                c.body_atoms.push_back(*a);
            } else if (bound(*el, c)) {
                continue;
            } else {
                constraint.push_back(formula(*el));
            }
        }
        c.body_constraint = Formula::conj(constraint);
        const SExpr& head = impl->items[2];
        if (head.is("false")) {
            c.head = FalseHead{};
        } else if (auto a = pred_atom(head)) {
            c.head = *a;
        } else {
            fail(head, "clause head must be false or a predicate application");
        }
        scope_ = nullptr;
        return c;
    }

    std::optional<Atom> pred_atom(const SExpr& e) const {
        const SExpr* name = e.is_list ? (e.items.empty() ? nullptr : &e.items[0]) : &e;
        if (!name || name->is_list || !hs_.find(name->atom)) return std::nullopt;
        Atom a;
        a.pred = name->atom;
        if (e.is_list)
            for (std::size_t k = 1; k < e.items.size(); ++k) {
                if (e.items[k].is_list) fail(e.items[k], "predicate arguments must be variables");
                a.args.push_back(var(e.items[k]));
            }
        return a;
    }

    // (<= lo x hi) over a universal
    bool bound(const SExpr& e, Clause& c) const {
        if (!e.is_list || e.items.size() != 4 || !e.items[0].is("<=") || e.items[2].is_list) return false;
        auto lo = int_literal(e.items[1]);
        auto hi = int_literal(e.items[3]);
        if (!lo || !hi) return false;
        for (auto& v : c.universals)
            if (v.name == e.items[2].atom) {
                if (v.bounds) fail(e, "duplicate bound for '" + v.name + "'");
                v.bounds = std::make_pair(*lo, *hi);
                return true;
            }
        return false;
    }

    static std::optional<std::int64_t> int_literal(const SExpr& e) {
        if (is_numeral(e) && e.atom.find('.') == std::string::npos) return BigInt(e.atom).get_si();
        if (e.is_list && e.items.size() == 2 && e.items[0].is("-") && is_numeral(e.items[1]) &&
            e.items[1].atom.find('.') == std::string::npos)
            return -BigInt(e.items[1].atom).get_si();
        return std::nullopt;
    }

    std::string var(const SExpr& e) const {
        if (e.is_list) fail(e, "expected a variable");
        if (!scope_->find_universal(e.atom)) fail(e, "unbound variable '" + e.atom + "'");
        return e.atom;
    }

    Formula formula(const SExpr& e) const { return nnf(raw_formula(e)); }

    RawFormula raw_formula(const SExpr& e) const {
        if (e.is("true")) return RawFormula::boolean(true);
        if (e.is("false")) return RawFormula::boolean(false);
        if (!e.is_list || e.items.empty() || e.items[0].is_list) fail(e, "expected a formula");
        const std::string& op = e.items[0].atom;
        std::vector<RawFormula> args;
        if (op == "and" || op == "or") {
            for (std::size_t k = 1; k < e.items.size(); ++k) args.push_back(raw_formula(e.items[k]));
            return op == "and" ? RawFormula::conjunction(std::move(args)) : RawFormula::disjunction(std::move(args));
        }
        if (op == "not") {
            if (e.items.size() != 2) fail(e, "not takes one argument");
            return RawFormula::negation(raw_formula(e.items[1]));
        }
        static const std::map<std::string, CmpOp> cmp{{"<=", CmpOp::Le}, {"<", CmpOp::Lt}, {"=", CmpOp::Eq},
                                                      {">=", CmpOp::Ge}, {">", CmpOp::Gt}};
        auto it = cmp.find(op);
        if (it == cmp.end()) fail(e, "unsupported operator '" + op + "'");
        if (e.items.size() != 3) fail(e, "comparison takes two arguments");
        return RawFormula::compare(term(e.items[1]), it->second, term(e.items[2]));
    }

    RawTerm term(const SExpr& e) const {
        if (is_numeral(e)) return RawTerm::constant(numeral_value(e));
        if (!e.is_list) return RawTerm::variable(var(e));
        if (e.items.empty() || e.items[0].is_list) fail(e, "expected a term");
        const std::string& op = e.items[0].atom;
        std::size_t n = e.items.size() - 1;
        if (op == "to_real" && n == 1) return term(e.items[1]);
        if (op == "-" && n == 1) return RawTerm::negated(term(e.items[1]));
        if ((op == "+" || op == "-" || op == "*") && n >= 2) {
            RawTerm acc = term(e.items[1]);
            auto kind = op == "+" ? RawTerm::Op::Add : op == "-" ? RawTerm::Op::Sub : RawTerm::Op::Mul;
            for (std::size_t k = 2; k <= n; ++k) acc = RawTerm::binary(kind, std::move(acc), term(e.items[k]));
            return acc;
        }
        if (op == "/" && n == 2 && is_numeral(e.items[1]) && is_numeral(e.items[2])) {
            Rational den = numeral_value(e.items[2]);
            if (den == 0) fail(e, "division by zero");
            return RawTerm::constant(numeral_value(e.items[1]) / den);
        }
        fail(e, "unsupported term");
    }

    HornSystem hs_;
    const Clause* scope_ = nullptr;
};

} // namespace

HornSystem parse_smtlib_horn(std::string_view text) { return HornReader().read(text); }

} // namespace hornforge
