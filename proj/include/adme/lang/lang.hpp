#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adme/lang/ast.hpp"

namespace adme::lang {

enum class TokenKind { Keyword, Identifier, StringLiteral, IntegerLiteral, Punctuation };

/// One lexeme. For string literals `text` holds the unescaped contents.
struct Token {
    TokenKind kind = TokenKind::Identifier;
    std::string text;
    int line = 1;
    int column = 1;

    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
    bool is_keyword(std::string_view t) const { return is(TokenKind::Keyword, t); }
    bool is_punct(std::string_view t) const { return is(TokenKind::Punctuation, t); }

    friend bool operator==(const Token&, const Token&) = default;
};

bool is_keyword(std::string_view word);

class LexError : public std::runtime_error {
public:
    LexError(int line, int column, char offending);
    int line() const { return line_; }
    int column() const { return column_; }
    char offending() const { return offending_; }

private:
    int line_;
    int column_;
    char offending_;
};

class ParseError : public std::runtime_error {
public:
    /// `token_index` equals the token count when input ended early.
    ParseError(std::size_t token_index, int line, int column, std::string found,
               std::vector<std::string> expected);
    std::size_t token_index() const { return token_index_; }
    int line() const { return line_; }
    int column() const { return column_; }
    bool at_end() const { return found_.empty(); }
    const std::string& found() const { return found_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t token_index_;
    int line_;
    int column_;
    std::string found_;
    std::vector<std::string> expected_;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<Token> tokenize(std::string_view source);

/// Parses without semantic validation.
SpecDocument parse_tokens(std::span<const Token> tokens);

/// Tokenizes, parses and validates.
SpecDocument parse(std::string_view source);

/// Throws ValidationError on the first problem found: duplicate names,
/// missing or unknown attributes, unbound or shadowed variables, ill-sorted
/// operands, ports absent from the referenced type.
void validate(const SpecDocument& doc);

/// Canonical Deladas text. parse(pretty_print(d)) == d for every valid d.
std::string pretty_print(const SpecDocument& doc);
std::string pretty_print(const ConstraintExpr& expr);

/// Only the component and host declarations, or only the constraintsets.
SpecDocument resources_of(const SpecDocument& doc);
SpecDocument constraints_of(const SpecDocument& doc);

}  // namespace adme::lang
