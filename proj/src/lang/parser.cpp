#include <charconv>
#include <optional>
#include <string>

#include "adme/lang/lang.hpp"

namespace adme::lang {

ParseError::ParseError(std::size_t token_index, int line, int column, std::string found,
                       std::vector<std::string> expected)
    : std::runtime_error([&] {
          std::string msg = "parse error at " + std::to_string(line) + ":" + std::to_string(column) +
                            ": expected ";
          for (std::size_t i = 0; i < expected.size(); ++i) {
              if (i) msg += i + 1 == expected.size() ? " or " : ", ";
              msg += expected[i];
          }
          msg += found.empty() ? " before end of input" : ", found '" + found + "'";
          return msg;
      }()),
      token_index_(token_index),
      line_(line),
      column_(column),
      found_(std::move(found)),
      expected_(std::move(expected)) {}

namespace {

struct Parsed {
    ConstraintExpr expr;
    bool juxtaposed = false;  // an and-chain built at this level, not parenthesized
};

struct RawAttr {
    std::string key;
    std::optional<std::string> string_value;
    std::vector<Port> ports;
    const Token* at = nullptr;
};

class Parser {
public:
    explicit Parser(std::span<const Token> toks) : toks_(toks) {}

    SpecDocument document() {
        SpecDocument doc;
        while (!at_end()) {
            const Token& t = peek();
            if (t.is_keyword("component")) {
                doc.components.push_back(component_decl());
            } else if (t.is_keyword("host")) {
                doc.hosts.push_back(host_decl());
            } else if (t.is_keyword("constraintset")) {
                doc.constraintsets.push_back(cs_decl());
            } else {
                fail({"component", "host", "constraintset"});
            }
        }
        return doc;
    }

private:
    std::span<const Token> toks_;
    std::size_t pos_ = 0;

    bool at_end() const { return pos_ >= toks_.size(); }
    const Token& peek(std::size_t ahead = 0) const {
        static const Token eof{TokenKind::Punctuation, "", 0, 0};
        return pos_ + ahead < toks_.size() ? toks_[pos_ + ahead] : eof;
    }
    bool peek_ident(std::size_t ahead = 0) const {
        return pos_ + ahead < toks_.size() && toks_[pos_ + ahead].kind == TokenKind::Identifier;
    }
    bool peek_punct(std::string_view p, std::size_t ahead = 0) const {
        return pos_ + ahead < toks_.size() && toks_[pos_ + ahead].is_punct(p);
    }
    bool peek_keyword(std::string_view k, std::size_t ahead = 0) const {
        return pos_ + ahead < toks_.size() && toks_[pos_ + ahead].is_keyword(k);
    }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        if (at_end()) {
            int line = 1, col = 1;
            if (!toks_.empty()) {
                line = toks_.back().line;
                col = toks_.back().column + static_cast<int>(toks_.back().text.size());
            }
            throw ParseError(toks_.size(), line, col, "", std::move(expected));
        }
        const Token& t = toks_[pos_];
        std::string found = t.kind == TokenKind::StringLiteral ? "\"" + t.text + "\"" : t.text;
        throw ParseError(pos_, t.line, t.column, found, std::move(expected));
    }

    const Token& take() { return toks_[pos_++]; }

    void punct(std::string_view p) {
        if (!peek_punct(p)) fail({"'" + std::string(p) + "'"});
        ++pos_;
    }
    void keyword(std::string_view k) {
        if (!peek_keyword(k)) fail({std::string(k)});
        ++pos_;
    }
    std::string ident() {
        if (!peek_ident()) fail({"identifier"});
        return take().text;
    }
    // Port names may coincide with keywords (Client declares `in`).
    std::string port_name() {
        if (at_end() || (peek().kind != TokenKind::Identifier && peek().kind != TokenKind::Keyword))
            fail({"port name"});
        return take().text;
    }

    std::vector<RawAttr> attributes() {
        std::vector<RawAttr> attrs;
        punct("(");
        while (true) {
            RawAttr a;
            a.at = &peek();
            a.key = ident();
            punct("=");
            if (!at_end() && peek().kind == TokenKind::StringLiteral) {
                a.string_value = take().text;
            } else if (peek_punct("{")) {
                ++pos_;
                while (true) {
                    Port p;
                    p.name = port_name();
                    if (peek_punct("[")) {
                        ++pos_;
                        punct("]");
                        p.variadic = true;
                    }
                    a.ports.push_back(std::move(p));
                    if (peek_punct(",")) {
                        ++pos_;
                        continue;
                    }
                    if (peek_punct("}")) {
                        ++pos_;
                        break;
                    }
                    fail({"','", "'}'", "'['"});
                }
            } else {
                fail({"string literal", "'{'"});
            }
            attrs.push_back(std::move(a));
            if (peek_punct(",")) {
                ++pos_;
                continue;
            }
            if (peek_punct(")")) {
                ++pos_;
                break;
            }
            fail({"','", "')'"});
        }
        return attrs;
    }

    ComponentType component_decl() {
        keyword("component");
        ComponentType c;
        c.name = ident();
        auto attrs = attributes();
        bool have_code = false, have_ports = false;
        for (auto& a : attrs) {
            if (a.key == "code" || a.key == "bundles") {
                if (have_code)
                    throw ValidationError("component " + c.name +
                                          ": exactly one of 'code' or 'bundles' is allowed");
                if (!a.string_value)
                    throw ValidationError("component " + c.name + ": '" + a.key +
                                          "' must be a string");
                have_code = true;
                c.code_uri = *a.string_value;
            } else if (a.key == "ports") {
                if (have_ports) throw ValidationError("component " + c.name + ": duplicate 'ports'");
                if (a.string_value)
                    throw ValidationError("component " + c.name + ": 'ports' must be a port set");
                have_ports = true;
                c.ports = std::move(a.ports);
            } else {
                throw ValidationError("component " + c.name + ": unknown attribute '" + a.key + "'");
            }
        }
        if (!have_code)
            throw ValidationError("component " + c.name + ": missing mandatory attribute 'code'");
        if (!have_ports)
            throw ValidationError("component " + c.name + ": missing mandatory attribute 'ports'");
        return c;
    }

    HostSpec host_decl() {
        keyword("host");
        HostSpec h;
        h.name = ident();
        punct("=");
        keyword("host");
        for (auto& a : attributes()) {
            if (!a.string_value)
                throw ValidationError("host " + h.name + ": attribute '" + a.key +
                                      "' must be a string");
            h.attributes.emplace_back(a.key, *a.string_value);
        }
        return h;
    }

    NamedConstraintSet cs_decl() {
        keyword("constraintset");
        NamedConstraintSet cs;
        cs.name = ident();
        punct("=");
        keyword("constraintset");
        punct("{");
        while (!peek_punct("}")) {
            if (at_end()) fail({"constraint", "'}'"});
            Parsed p = or_expr();
            if (p.juxtaposed) {
                auto& terms = std::get<And>(p.expr.node).terms;
                for (auto& t : terms) cs.set.constraints.push_back(std::move(t));
            } else {
                cs.set.constraints.push_back(std::move(p.expr));
            }
        }
        punct("}");
        return cs;
    }

    bool starts_primary() const {
        if (at_end()) return false;
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Identifier:
            case TokenKind::IntegerLiteral:
                return true;
            case TokenKind::Keyword:
                return t.text == "forall" || t.text == "exists" || t.text == "card" ||
                       t.text == "reachable";
            case TokenKind::Punctuation:
                return t.text == "(";
            default:
                return false;
        }
    }

    Parsed or_expr() {
        Parsed first = and_expr();
        if (!peek_keyword("or")) return first;
        Or o;
        o.terms.push_back(std::move(first.expr));
        while (peek_keyword("or")) {
            ++pos_;
            o.terms.push_back(and_expr().expr);
        }
        return {ConstraintExpr{std::move(o)}, false};
    }

    Parsed and_expr() {
        std::vector<ConstraintExpr> items;
        items.push_back(primary());
        while (true) {
            if (peek_keyword("and")) {
                ++pos_;
                items.push_back(primary());
            } else if (starts_primary()) {
                items.push_back(primary());
            } else {
                break;
            }
        }
        if (items.size() == 1) return {std::move(items.front()), false};
        return {ConstraintExpr{And{std::move(items)}}, true};
    }

    ConstraintExpr primary() {
        if (peek_keyword("forall") || peek_keyword("exists")) return quantified();
        if (peek_keyword("reachable")) {
            ++pos_;
            punct("(");
            Reachable r;
            r.from = ident();
            punct(",");
            r.to = ident();
            punct(")");
            return ConstraintExpr{std::move(r)};
        }
        if (peek_punct("(")) {
            ++pos_;
            Parsed inner = or_expr();
            punct(")");
            return std::move(inner.expr);
        }
        if (peek_ident() && peek_punct(".", 1)) {
            ConnectsTo c;
            c.src.var = ident();
            punct(".");
            c.src.port = port_name();
            keyword("connectsto");
            c.dst.var = ident();
            punct(".");
            c.dst.port = port_name();
            return ConstraintExpr{std::move(c)};
        }
        if (peek_ident() || peek_keyword("card") ||
            (!at_end() && peek().kind == TokenKind::IntegerLiteral)) {
            return compare();
        }
        fail({"forall", "exists", "reachable", "card", "'('", "identifier", "integer"});
    }

    ConstraintExpr quantified() {
        Quantifier kind = take().text == "forall" ? Quantifier::Forall : Quantifier::Exists;
        std::vector<Binder> binders;
        binders.push_back(binder(nullptr));
        while (peek_punct(",")) {
            ++pos_;
            binders.push_back(binder(&binders.back()));
        }
        keyword("in");
        keyword("deployment");
        punct("(");
        Parsed body = or_expr();
        punct(")");
        return ConstraintExpr{Quantified{kind, std::move(binders), Box<ConstraintExpr>(std::move(body.expr))}};
    }

    Binder binder(const Binder* previous) {
        if (peek_keyword("host")) {
            ++pos_;
            return Binder{"", ident()};
        }
        if (!peek_ident()) {
            if (previous) fail({"host", "identifier"});
            fail({"host", "type name"});
        }
        if (peek_ident(1)) {
            std::string sort = take().text;
            return Binder{std::move(sort), take().text};
        }
        if (!previous) {
            ++pos_;
            fail({"identifier"});
        }
        return Binder{previous->sort, take().text};
    }

    ConstraintExpr compare() {
        Compare c;
        c.lhs = value();
        static const std::pair<const char*, CompareOp> ops[] = {
            {"=", CompareOp::Eq}, {"!=", CompareOp::Ne}, {"<=", CompareOp::Le},
            {">=", CompareOp::Ge}, {"<", CompareOp::Lt}, {">", CompareOp::Gt}};
        bool found = false;
        for (auto& [text, op] : ops) {
            if (peek_punct(text)) {
                c.op = op;
                found = true;
                break;
            }
        }
        if (!found) fail({"'='", "'!='", "'<='", "'>='", "'<'", "'>'"});
        ++pos_;
        c.rhs = value();
        return ConstraintExpr{std::move(c)};
    }

    ValueExpr value() {
        if (!at_end() && peek().kind == TokenKind::IntegerLiteral) {
            const std::string& text = take().text;
            IntLiteral lit;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), lit.value);
            if (ec != std::errc{}) throw ValidationError("integer literal out of range: " + text);
            return lit;
        }
        if (peek_ident()) return VarRef{take().text};
        if (peek_keyword("card")) {
            ++pos_;
            punct("(");
            Card card;
            if (peek_keyword("instancesof")) {
                ++pos_;
                InstancesOf s;
                s.type = ident();
                keyword("in");
                s.host_var = ident();
                card.set = std::move(s);
            } else if (peek_ident()) {
                ConnectedTo s;
                s.type = take().text;
                s.var = ident();
                keyword("connectedto");
                s.peer_var = ident();
                card.set = std::move(s);
            } else {
                fail({"instancesof", "type name"});
            }
            punct(")");
            return card;
        }
        fail({"integer", "identifier", "card"});
    }
};

}  // namespace

SpecDocument parse_tokens(std::span<const Token> tokens) { return Parser(tokens).document(); }

SpecDocument parse(std::string_view source) {
    auto tokens = tokenize(source);
    SpecDocument doc = parse_tokens(tokens);
    validate(doc);
    return doc;
}

}  // namespace adme::lang
