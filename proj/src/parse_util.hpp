#pragma once

// Tokenizer and expression parser shared by the program and model readers.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hornforge/formula.hpp"

namespace hornforge::detail {

struct Token {
    enum class Kind { Ident, Number, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    int line = 1;
    int column = 1;
};

std::vector<Token> tokenize(std::string_view text);

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

    const Token& peek(std::size_t ahead = 0) const;
    Token next();
    bool at_end() const { return peek().kind == Token::Kind::End; }
    bool is(std::string_view punct, std::size_t ahead = 0) const;
    bool is_word(std::string_view word, std::size_t ahead = 0) const;
    bool accept(std::string_view punct);
    void expect(std::string_view punct);
    void expect_word(std::string_view word);
    std::string ident();
    BigInt integer();  // optional leading minus
    [[noreturn]] void fail(const Token& at, const std::string& message) const;

    RawFormula formula();
    RawTerm term();

    /// Called for each variable occurrence in formulas and terms.
    std::function<void(const Token&)> on_var;

private:
    RawFormula disjunction();
    RawFormula conjunction();
    RawFormula unary();
    RawFormula comparison();
    RawTerm product();
    RawTerm factor();

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

} // namespace hornforge::detail
