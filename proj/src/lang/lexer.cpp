#include <array>
#include <cctype>
#include <string>

#include "adme/lang/lang.hpp"

namespace adme::lang {

namespace {

constexpr std::array<std::string_view, 14> kKeywords = {
    "component", "host",         "constraintset", "forall",      "exists",
    "in",        "deployment",   "card",          "instancesof", "connectsto",
    "connectedto", "reachable",  "and",           "or"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

bool is_keyword(std::string_view word) {
    for (auto k : kKeywords) {
        if (k == word) return true;
    }
    return false;
}

LexError::LexError(int line, int column, char offending)
    : std::runtime_error("lex error at " + std::to_string(line) + ":" + std::to_string(column) +
                         ": unexpected character '" + std::string(1, offending) + "'"),
      line_(line),
      column_(column),
      offending_(offending) {}

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };

    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }

        Token tok;
        tok.line = line;
        tok.column = col;

        if (ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            tok.text = std::string(src.substr(i, j - i));
            tok.kind = is_keyword(tok.text) ? TokenKind::Keyword : TokenKind::Identifier;
            advance(j - i);
        } else if (digit(c)) {
            std::size_t j = i;
            while (j < src.size() && digit(src[j])) ++j;
            tok.kind = TokenKind::IntegerLiteral;
            tok.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (c == '"') {
            tok.kind = TokenKind::StringLiteral;
            advance(1);
            bool closed = false;
            while (i < src.size()) {
                char d = src[i];
                if (d == '"') {
                    advance(1);
                    closed = true;
                    break;
                }
                if (d == '\n') break;
                if (d == '\\') {
                    if (i + 1 >= src.size()) break;
                    char e = src[i + 1];
                    if (e != '"' && e != '\\') throw LexError(line, col, d);
                    tok.text.push_back(e);
                    advance(2);
                    continue;
                }
                tok.text.push_back(d);
                advance(1);
            }
            if (!closed) throw LexError(tok.line, tok.column, '"');
        } else {
            tok.kind = TokenKind::Punctuation;
            char n = i + 1 < src.size() ? src[i + 1] : '\0';
            if ((c == '!' || c == '<' || c == '>') && n == '=') {
                tok.text = std::string{c, '='};
            } else if (c == '(' || c == ')' || c == '{' || c == '}' || c == '[' || c == ']' ||
                       c == ',' || c == '.' || c == '=' || c == '<' || c == '>') {
                tok.text = std::string(1, c);
            } else {
                throw LexError(line, col, c);
            }
            advance(tok.text.size());
        }
        out.push_back(std::move(tok));
    }
    return out;
}

}  // namespace adme::lang
