#include <map>
#include <set>
#include <string>

#include "adme/lang/lang.hpp"

namespace adme::lang {

namespace {

// Sort of a bound variable: empty for hosts, else the component type name.
using Scope = std::map<std::string, std::string>;

class ConstraintChecker {
public:
    // A document without component declarations holds constraints only; its
    // type and port references are resolved once merged with resources.
    ConstraintChecker(const SpecDocument& doc, const std::string& cs_name)
        : doc_(doc), where_("constraintset " + cs_name), resolve_types_(!doc.components.empty()) {}

    void check(const ConstraintExpr& e, Scope& scope) {
        std::visit([&](const auto& n) { node(n, scope); }, e.node);
    }

private:
    const SpecDocument& doc_;
    std::string where_;
    bool resolve_types_;

    [[noreturn]] void error(const std::string& what) const {
        throw ValidationError(where_ + ": " + what);
    }

    const std::string& bound(const Scope& scope, const std::string& var) const {
        auto it = scope.find(var);
        if (it == scope.end()) error("unbound variable " + var);
        return it->second;
    }

    const ComponentType* instance_var(const Scope& scope, const std::string& var) const {
        const std::string& sort = bound(scope, var);
        if (sort.empty()) error("variable " + var + " is bound to a host, not an instance");
        return doc_.find_component(sort);
    }

    void require_type(const std::string& type) const {
        if (resolve_types_ && !doc_.find_component(type)) error("unknown component type " + type);
    }

    void declare(Scope& scope, const std::string& sort, const std::string& var) const {
        if (!sort.empty()) require_type(sort);
        if (scope.count(var)) error("variable " + var + " is already bound");
        scope.emplace(var, sort);
    }

    void node(const Quantified& q, Scope& scope) {
        Scope inner = scope;
        for (const auto& b : q.binders) declare(inner, b.sort, b.var);
        check(*q.body, inner);
    }
    void node(const Or& o, Scope& scope) {
        for (const auto& t : o.terms) check(t, scope);
    }
    void node(const And& a, Scope& scope) {
        for (const auto& t : a.terms) check(t, scope);
    }
    void node(const ConnectsTo& c, Scope& scope) {
        for (const PortRef* ref : {&c.src, &c.dst}) {
            const ComponentType* type = instance_var(scope, ref->var);
            if (type && !type->find_port(ref->port))
                error("component type " + type->name + " has no port " + ref->port);
        }
    }
    void node(const Reachable& r, Scope& scope) {
        instance_var(scope, r.from);
        instance_var(scope, r.to);
    }
    void node(const Compare& c, Scope& scope) {
        // Operand sort: nullopt for integers, else the variable's sort.
        auto sort_of = [&](const ValueExpr& v) -> std::optional<std::string> {
            if (auto* ref = std::get_if<VarRef>(&v)) return bound(scope, ref->name);
            if (auto* card = std::get_if<Card>(&v)) {
                if (auto* s = std::get_if<InstancesOf>(&card->set)) {
                    require_type(s->type);
                    if (!bound(scope, s->host_var).empty())
                        error("variable " + s->host_var + " is not bound to a host");
                } else {
                    const auto& set = std::get<ConnectedTo>(card->set);
                    Scope inner = scope;
                    declare(inner, set.type, set.var);
                    instance_var(scope, set.peer_var);
                }
            }
            return std::nullopt;
        };
        auto lhs = sort_of(c.lhs);
        auto rhs = sort_of(c.rhs);
        bool ordering = c.op != CompareOp::Eq && c.op != CompareOp::Ne;
        if (ordering && (lhs || rhs)) error(std::string("ordering comparison '") + to_string(c.op) +
                                            "' requires integer operands");
        if (lhs.has_value() != rhs.has_value()) error("cannot compare a variable with an integer");
        if (lhs && rhs && lhs->empty() != rhs->empty())
            error("cannot compare a host with a component instance");
    }
};

}  // namespace

void validate(const SpecDocument& doc) {
    std::set<std::string> seen;
    for (const auto& c : doc.components) {
        if (!seen.insert(c.name).second) throw ValidationError("duplicate component type " + c.name);
        if (c.code_uri.empty()) throw ValidationError("component " + c.name + ": empty code URI");
        std::set<std::string> ports;
        for (const auto& p : c.ports) {
            if (!ports.insert(p.name).second)
                throw ValidationError("component " + c.name + ": duplicate port " + p.name);
        }
    }
    seen.clear();
    for (const auto& h : doc.hosts) {
        if (!seen.insert(h.name).second) throw ValidationError("duplicate host " + h.name);
        std::set<std::string> keys;
        for (const auto& [k, v] : h.attributes) {
            if (!keys.insert(k).second)
                throw ValidationError("host " + h.name + ": duplicate attribute " + k);
        }
        if (h.ipaddress().empty())
            throw ValidationError("host " + h.name + ": missing mandatory attribute 'ipaddress'");
    }
    seen.clear();
    for (const auto& cs : doc.constraintsets) {
        if (!seen.insert(cs.name).second) throw ValidationError("duplicate constraintset " + cs.name);
        ConstraintChecker checker(doc, cs.name);
        for (const auto& e : cs.set.constraints) {
            Scope scope;
            checker.check(e, scope);
        }
    }
}

}  // namespace adme::lang
