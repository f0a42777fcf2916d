#include <string>

#include "adme/lang/lang.hpp"

namespace adme::lang {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string pad(int n) { return std::string(static_cast<std::size_t>(n), ' '); }

std::string value(const ValueExpr& v) {
    if (auto* lit = std::get_if<IntLiteral>(&v)) return std::to_string(lit->value);
    if (auto* ref = std::get_if<VarRef>(&v)) return ref->name;
    const auto& card = std::get<Card>(v);
    if (auto* s = std::get_if<InstancesOf>(&card.set))
        return "card(instancesof " + s->type + " in " + s->host_var + ")";
    const auto& s = std::get<ConnectedTo>(card.set);
    return "card(" + s.type + " " + s.var + " connectedto " + s.peer_var + ")";
}

// The first line carries no indentation; continuation lines are indented
// absolutely by `indent`.
std::string expr(const ConstraintExpr& e, int indent) {
    struct Printer {
        int indent;
        std::string operator()(const Quantified& q) const {
            std::string out = q.kind == Quantifier::Forall ? "forall " : "exists ";
            for (std::size_t i = 0; i < q.binders.size(); ++i) {
                const Binder& b = q.binders[i];
                if (i) out += ", ";
                bool inherit = i > 0 && q.binders[i - 1].sort == b.sort;
                if (!inherit) out += (b.is_host() ? std::string("host") : b.sort) + " ";
                out += b.var;
            }
            out += " in deployment (\n" + pad(indent + 2) + expr(*q.body, indent + 2) + "\n" +
                   pad(indent) + ")";
            return out;
        }
        std::string operator()(const Or& o) const {
            std::string out;
            for (std::size_t i = 0; i < o.terms.size(); ++i) {
                if (i) out += " or\n" + pad(indent);
                bool group = std::holds_alternative<Or>(o.terms[i].node);
                out += group ? "(" + expr(o.terms[i], indent + 1) + ")" : expr(o.terms[i], indent);
            }
            return out;
        }
        std::string operator()(const And& a) const {
            std::string out;
            for (std::size_t i = 0; i < a.terms.size(); ++i) {
                if (i) out += "\n" + pad(indent);
                const auto& t = a.terms[i];
                bool group = std::holds_alternative<Or>(t.node) || std::holds_alternative<And>(t.node);
                out += group ? "(" + expr(t, indent + 1) + ")" : expr(t, indent);
            }
            return out;
        }
        std::string operator()(const Compare& c) const {
            return value(c.lhs) + " " + to_string(c.op) + " " + value(c.rhs);
        }
        std::string operator()(const ConnectsTo& c) const {
            return c.src.var + "." + c.src.port + " connectsto " + c.dst.var + "." + c.dst.port;
        }
        std::string operator()(const Reachable& r) const {
            return "reachable(" + r.from + ", " + r.to + ")";
        }
    };
    return std::visit(Printer{indent}, e.node);
}

}  // namespace

std::string pretty_print(const ConstraintExpr& e) { return expr(e, 0); }

std::string pretty_print(const SpecDocument& doc) {
    std::string out;
    for (const auto& c : doc.components) {
        out += "component " + c.name + "(\n  code = " + quote(c.code_uri) + ",\n  ports = {";
        for (std::size_t i = 0; i < c.ports.size(); ++i) {
            if (i) out += ", ";
            out += c.ports[i].name + (c.ports[i].variadic ? "[]" : "");
        }
        out += "}\n)\n";
    }
    for (const auto& h : doc.hosts) {
        out += "host " + h.name + " = host(";
        for (std::size_t i = 0; i < h.attributes.size(); ++i) {
            if (i) out += ", ";
            out += h.attributes[i].first + " = " + quote(h.attributes[i].second);
        }
        out += ")\n";
    }
    for (const auto& cs : doc.constraintsets) {
        out += "constraintset " + cs.name + " = constraintset {\n";
        for (const auto& e : cs.set.constraints) {
            // Top-level and/or must be grouped or it would merge with its neighbours.
            bool group = std::holds_alternative<Or>(e.node) || std::holds_alternative<And>(e.node);
            out += "  " + (group ? "(" + expr(e, 3) + ")" : expr(e, 2)) + "\n";
        }
        out += "}\n";
    }
    return out;
}

}  // namespace adme::lang
