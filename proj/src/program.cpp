#include "hornforge/program.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

#include "hornforge/errors.hpp"
#include "parse_util.hpp"

namespace hornforge {

// ---------------------------------------------------------------------------
// Tokenizer and expression parser

namespace detail {

std::vector<Token> tokenize(std::string_view text) {
    static constexpr std::array<std::string_view, 7> two_char{"&&", "||", "<=", ">=", "!=", ":=", "=="};
    static constexpr std::string_view one_char = "{}:;[](),+-*/!<>=";
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (text.substr(i, 2) == "//") {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.column = col;
        std::size_t start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' ||
                                       text[j] == '.'))
                ++j;
            while (j < text.size() && text[j] == '\'') ++j;
            t.kind = Token::Kind::Ident;
            t.text = std::string(text.substr(start, j - start));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            t.kind = Token::Kind::Number;
            t.text = std::string(text.substr(start, j - start));
            advance(j - i);
        } else if (std::find(two_char.begin(), two_char.end(), text.substr(i, 2)) != two_char.end()) {
            t.kind = Token::Kind::Punct;
            t.text = std::string(text.substr(i, 2));
            advance(2);
        } else if (one_char.find(c) != std::string_view::npos) {
            t.kind = Token::Kind::Punct;
            t.text = std::string(1, c);
            advance(1);
        } else {
            throw InputError(std::string("unexpected character '") + c + "'", line, col);
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

const Token& Parser::peek(std::size_t ahead) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
}

Token Parser::next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
}

bool Parser::is(std::string_view punct, std::size_t ahead) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Punct && t.text == punct;
}

bool Parser::is_word(std::string_view word, std::size_t ahead) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Ident && t.text == word;
}

bool Parser::accept(std::string_view punct) {
    if (!is(punct)) return false;
    next();
    return true;
}

void Parser::expect(std::string_view punct) {
    if (!accept(punct)) {
        const Token& t = peek();
        // a missing terminator belongs to the line it should have ended
        if (pos_ > 0 && toks_[pos_ - 1].line < t.line) {
            const Token& prev = toks_[pos_ - 1];
            Token at = prev;
            at.column = prev.column + static_cast<int>(prev.text.size());
            fail(at, "expected '" + std::string(punct) + "' after '" + prev.text + "'");
        }
        fail(t, "expected '" + std::string(punct) + "' but found " +
                    (t.kind == Token::Kind::End ? std::string("end of input") : "'" + t.text + "'"));
    }
}

void Parser::expect_word(std::string_view word) {
    if (!is_word(word)) fail(peek(), "expected '" + std::string(word) + "'");
    next();
}

std::string Parser::ident() {
    if (peek().kind != Token::Kind::Ident) fail(peek(), "expected an identifier");
    return next().text;
}

BigInt Parser::integer() {
    bool neg = accept("-");
    if (peek().kind != Token::Kind::Number) fail(peek(), "expected an integer");
    BigInt v(next().text);
    return neg ? BigInt(-v) : v;
}

void Parser::fail(const Token& at, const std::string& message) const {
    throw InputError(message, static_cast<std::size_t>(at.line), static_cast<std::size_t>(at.column));
}

RawFormula Parser::formula() { return disjunction(); }

RawFormula Parser::disjunction() {
    std::vector<RawFormula> parts{conjunction()};
    while (accept("||")) parts.push_back(conjunction());
    return parts.size() == 1 ? parts.front() : RawFormula::disjunction(std::move(parts));
}

RawFormula Parser::conjunction() {
    std::vector<RawFormula> parts{unary()};
    while (accept("&&")) parts.push_back(unary());
    return parts.size() == 1 ? parts.front() : RawFormula::conjunction(std::move(parts));
}

RawFormula Parser::unary() {
    if (accept("!")) return RawFormula::negation(unary());
    if (is_word("true")) {
        next();
        return RawFormula::boolean(true);
    }
    if (is_word("false")) {
        next();
        return RawFormula::boolean(false);
    }
    if (is("(")) {
        // either a parenthesized term starting a comparison or a nested formula
        std::size_t save = pos_;
        try {
            return comparison();
        } catch (const InputError&) {
            pos_ = save;
        }
        expect("(");
        RawFormula inner = formula();
        expect(")");
        return inner;
    }
    return comparison();
}

RawFormula Parser::comparison() {
    RawTerm lhs = term();
    const Token& t = peek();
    CmpOp op;
    if (is("<=")) op = CmpOp::Le;
    else if (is("<")) op = CmpOp::Lt;
    else if (is("=") || is("==")) op = CmpOp::Eq;
    else if (is("!=")) op = CmpOp::Ne;
    else if (is(">=")) op = CmpOp::Ge;
    else if (is(">")) op = CmpOp::Gt;
    else fail(t, "expected a comparison operator");
    next();
    RawTerm rhs = term();
    return RawFormula::compare(std::move(lhs), op, std::move(rhs));
}

RawTerm Parser::term() {
    RawTerm acc = product();
    while (is("+") || is("-")) {
        auto op = next().text == "+" ? RawTerm::Op::Add : RawTerm::Op::Sub;
        acc = RawTerm::binary(op, std::move(acc), product());
    }
    return acc;
}

RawTerm Parser::product() {
    RawTerm acc = factor();
    while (accept("*")) acc = RawTerm::binary(RawTerm::Op::Mul, std::move(acc), factor());
    if (is("/")) fail(peek(), "division is only allowed between integer literals");
    return acc;
}

RawTerm Parser::factor() {
    if (accept("-")) return RawTerm::negated(factor());
    const Token& t = peek();
    if (t.kind == Token::Kind::Number) {
        BigInt num(next().text);
        if (accept("/")) {
            if (peek().kind != Token::Kind::Number)
                fail(peek(), "division is only allowed between integer literals");
            BigInt den(next().text);
            if (den == 0) fail(t, "division by zero");
            Rational q(num, den);
            q.canonicalize();
            return RawTerm::constant(q);
        }
        return RawTerm::constant(Rational(num));
    }
    if (t.kind == Token::Kind::Ident) {
        if (t.text == "true" || t.text == "false") fail(t, "boolean constant used as a term");
        if (on_var) on_var(t);
        return RawTerm::variable(next().text);
    }
    if (accept("(")) {
        RawTerm inner = term();
        expect(")");
        return inner;
    }
    fail(t, t.kind == Token::Kind::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
}

} // namespace detail

// ---------------------------------------------------------------------------
// Vocabulary

namespace {

constexpr std::array<std::pair<Role, std::string_view>, 8> kRoles{{
    {Role::Init, "init"},
    {Role::Next, "next"},
    {Role::Safe, "safe"},
    {Role::Final, "final"},
    {Role::P, "p"},
    {Role::Q, "q"},
    {Role::Env, "env"},
    {Role::Goal, "goal"},
}};

constexpr std::array<std::pair<Schema, std::string_view>, 7> kSchemas{{
    {Schema::SafetyFwd, "safety-fwd"},
    {Schema::SafetyBwd, "safety-bwd"},
    {Schema::SafetyComb, "safety-comb"},
    {Schema::Termination, "termination"},
    {Schema::Noninterference, "noninterference"},
    {Schema::ExistsUntil, "exists-until"},
    {Schema::ReachGame, "reach-game"},
}};

int prime_count(const std::string& name) {
    int n = 0;
    for (auto it = name.rbegin(); it != name.rend() && *it == '\''; ++it) ++n;
    return n;
}

std::string unprimed(const std::string& name) {
    return name.substr(0, name.size() - static_cast<std::size_t>(prime_count(name)));
}

} // namespace

std::string_view role_name(Role r) {
    for (const auto& [role, name] : kRoles)
        if (role == r) return name;
    return "?";
}

std::optional<Role> role_from_name(std::string_view name) {
    for (const auto& [role, text] : kRoles)
        if (text == name) return role;
    return std::nullopt;
}

bool is_relational(Role r) { return r == Role::Next || r == Role::Env; }

std::string_view schema_name(Schema s) {
    for (const auto& [schema, name] : kSchemas)
        if (schema == s) return name;
    return "?";
}

Schema schema_from_name(std::string_view name) {
    for (const auto& [schema, text] : kSchemas)
        if (text == name) return schema;
    throw InputError("unknown schema '" + std::string(name) + "'");
}

const std::vector<Schema>& all_schemas() {
    static const std::vector<Schema> all = [] {
        std::vector<Schema> v;
        for (const auto& [schema, _] : kSchemas) v.push_back(schema);
        return v;
    }();
    return all;
}

Formula TransitionSystem::get(Role r) const {
    auto it = assertions.find(r);
    return it == assertions.end() ? Formula::top() : it->second;
}

const SortedVar* TransitionSystem::find_var(const std::string& n) const {
    for (const auto& v : vars)
        if (v.name == n) return &v;
    return nullptr;
}

std::vector<std::string> TransitionSystem::var_names() const {
    std::vector<std::string> out;
    for (const auto& v : vars) out.push_back(v.name);
    return out;
}

bool TransitionSystem::all_bounded_int() const {
    return std::all_of(vars.begin(), vars.end(),
                       [](const SortedVar& v) { return v.sort == Sort::Int && v.bounds.has_value(); });
}

std::string primed(const std::string& name, int count) {
    return name + std::string(static_cast<std::size_t>(count), '\'');
}

// ---------------------------------------------------------------------------
// Program parser

namespace {

class ProgramReader {
public:
    explicit ProgramReader(std::string_view text) : p_(text) {}

    TransitionSystem read() {
        bool wrapped = p_.is_word("system");
        if (wrapped) {
            p_.next();
            ts_.name = p_.ident();
            p_.expect("{");
        } else {
            ts_.name = "main";
        }
        while (!(wrapped ? p_.is("}") : p_.at_end())) {
            if (p_.at_end()) p_.fail(p_.peek(), "missing '}' at end of system");
            if (p_.is_word("var")) declaration();
            else section();
        }
        if (wrapped) {
            p_.expect("}");
            if (!p_.at_end()) p_.fail(p_.peek(), "trailing input after system");
        }
        return std::move(ts_);
    }

private:
    void declaration() {
        detail::Token at = p_.next();
        detail::Token name_tok = p_.peek();
        std::string name = p_.ident();
        if (name.find('\'') != std::string::npos || name.find('.') != std::string::npos)
            p_.fail(name_tok, "declared variable names may not contain primes or dots");
        if (ts_.find_var(name)) p_.fail(name_tok, "duplicate variable '" + name + "'");
        if (!ts_.assertions.empty()) p_.fail(at, "variable declarations must precede sections");
        p_.expect(":");
        SortedVar v;
        v.name = name;
        detail::Token sort_tok = p_.peek();
        std::string sort = p_.ident();
        if (sort == "int") {
            v.sort = Sort::Int;
            if (p_.accept("[")) {
                detail::Token lo_tok = p_.peek();
                BigInt lo = p_.integer();
                p_.expect(",");
                BigInt hi = p_.integer();
                p_.expect("]");
                if (!lo.fits_slong_p() || !hi.fits_slong_p()) p_.fail(lo_tok, "bound out of range");
                if (lo > hi) p_.fail(lo_tok, "empty range for '" + name + "'");
                v.bounds = std::make_pair(static_cast<std::int64_t>(lo.get_si()), static_cast<std::int64_t>(hi.get_si()));
            }
        } else if (sort == "rat") {
            v.sort = Sort::Rat;
            if (p_.is("[")) p_.fail(p_.peek(), "sort error: bounds are only allowed on int variables");
        } else {
            p_.fail(sort_tok, "unknown sort '" + sort + "'");
        }
        p_.expect(";");
        ts_.vars.push_back(std::move(v));
    }

    void section() {
        detail::Token role_tok = p_.peek();
        std::string word = p_.ident();
        auto role = role_from_name(word);
        if (!role) p_.fail(role_tok, "unknown section '" + word + "'");
        if (ts_.has(*role)) p_.fail(role_tok, "duplicate section '" + word + "'");
        p_.expect(":");
        p_.on_var = [this, r = *role](const detail::Token& t) {
            int primes = prime_count(t.text);
            std::string base = unprimed(t.text);
            if (!ts_.find_var(base)) p_.fail(t, "undeclared variable '" + base + "'");
            if (primes > 1) p_.fail(t, "only single primes are allowed in source text");
            if (primes == 1 && !is_relational(r))
                p_.fail(t, "primed variable '" + t.text + "' outside next/env");
        };
        RawFormula raw = p_.formula();
        p_.on_var = nullptr;
        Formula f;
        try {
            f = nnf(raw);
        } catch (const InputError& e) {
            p_.fail(role_tok, e.what());
        }
        p_.expect(";");
        ts_.assertions.emplace(*role, std::move(f));
    }

    detail::Parser p_;
    TransitionSystem ts_;
};

} // namespace

TransitionSystem parse_program(std::string_view text) {
    return ProgramReader(text).read();
}

Formula parse_formula(std::string_view text) {
    detail::Parser p(text);
    RawFormula raw = p.formula();
    if (!p.at_end()) p.fail(p.peek(), "trailing input after formula");
    return nnf(raw);
}

std::string to_source(const TransitionSystem& ts) {
    std::ostringstream os;
    os << "system " << ts.name << " {\n";
    for (const auto& v : ts.vars) {
        os << "  var " << v.name << ": ";
        if (v.sort == Sort::Rat) {
            os << "rat";
        } else {
            os << "int";
            if (v.bounds) os << "[" << v.bounds->first << "," << v.bounds->second << "]";
        }
        os << ";\n";
    }
    for (const auto& [role, f] : ts.assertions) os << "  " << role_name(role) << ": " << to_string(f) << ";\n";
    os << "}\n";
    return os.str();
}

Formula rename(const Formula& f, const RenameMap& map) { return f.renamed(map); }

std::vector<Role> required_roles(Schema schema) {
    switch (schema) {
    case Schema::SafetyFwd:
    case Schema::SafetyBwd:
    case Schema::SafetyComb: return {Role::Init, Role::Next, Role::Safe};
    case Schema::Termination: return {Role::Init, Role::Next};
    case Schema::Noninterference: return {Role::Init, Role::Next, Role::Final};
    case Schema::ExistsUntil: return {Role::Init, Role::Next, Role::P, Role::Q};
    case Schema::ReachGame: return {Role::Init, Role::Env, Role::Goal};
    }
    return {};
}

std::vector<Role> validate_for(const TransitionSystem& ts, Schema schema) {
    std::vector<Role> missing;
    for (Role r : required_roles(schema))
        if (!ts.has(r)) missing.push_back(r);
    return missing;
}

} // namespace hornforge
