#pragma once

// Abstract syntax of Deladas documents: component types, hosts and named
// constraintsets. Declaration order is preserved everywhere and defines the
// canonical enumeration order used downstream.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "adme/box.hpp"

namespace adme::lang {

struct Port {
    std::string name;
    bool variadic = false;

    friend bool operator==(const Port&, const Port&) = default;
};

struct ComponentType {
    std::string name;
    std::string code_uri;
    std::vector<Port> ports;

    const Port* find_port(std::string_view port) const;

    friend bool operator==(const ComponentType&, const ComponentType&) = default;
};

struct HostSpec {
    std::string name;
    /// Ordered key/value attributes; always contains `ipaddress`.
    std::vector<std::pair<std::string, std::string>> attributes;

    const std::string* attribute(std::string_view key) const;
    std::string ipaddress() const;

    friend bool operator==(const HostSpec&, const HostSpec&) = default;
};

// ---------------------------------------------------------------------------
// Constraint expressions

enum class Quantifier { Forall, Exists };
enum class CompareOp { Eq, Ne, Le, Ge, Lt, Gt };

const char* to_string(CompareOp op);

/// A quantifier binder. An empty sort means the binder ranges over hosts;
/// otherwise it names a component type.
struct Binder {
    std::string sort;
    std::string var;

    bool is_host() const { return sort.empty(); }

    friend bool operator==(const Binder&, const Binder&) = default;
};

struct InstancesOf {
    std::string type;
    std::string host_var;

    friend bool operator==(const InstancesOf&, const InstancesOf&) = default;
};

/// `T x connectedto y`: x is a fresh binder local to the set expression.
struct ConnectedTo {
    std::string type;
    std::string var;
    std::string peer_var;

    friend bool operator==(const ConnectedTo&, const ConnectedTo&) = default;
};

using SetExpr = std::variant<InstancesOf, ConnectedTo>;

struct IntLiteral {
    std::uint64_t value = 0;
    friend bool operator==(const IntLiteral&, const IntLiteral&) = default;
};
struct VarRef {
    std::string name;
    friend bool operator==(const VarRef&, const VarRef&) = default;
};
struct Card {
    SetExpr set;
    friend bool operator==(const Card&, const Card&) = default;
};

using ValueExpr = std::variant<IntLiteral, VarRef, Card>;

struct PortRef {
    std::string var;
    std::string port;

    friend bool operator==(const PortRef&, const PortRef&) = default;
};

struct ConstraintExpr;

struct Quantified {
    Quantifier kind = Quantifier::Forall;
    std::vector<Binder> binders;
    Box<ConstraintExpr> body;

    friend bool operator==(const Quantified&, const Quantified&) = default;
};
struct Or {
    std::vector<ConstraintExpr> terms;
    friend bool operator==(const Or&, const Or&) = default;
};
struct And {
    std::vector<ConstraintExpr> terms;
    friend bool operator==(const And&, const And&) = default;
};
struct Compare {
    ValueExpr lhs;
    CompareOp op = CompareOp::Eq;
    ValueExpr rhs;
    friend bool operator==(const Compare&, const Compare&) = default;
};
struct ConnectsTo {
    PortRef src;
    PortRef dst;
    friend bool operator==(const ConnectsTo&, const ConnectsTo&) = default;
};
struct Reachable {
    std::string from;
    std::string to;
    friend bool operator==(const Reachable&, const Reachable&) = default;
};

struct ConstraintExpr {
    std::variant<Quantified, Or, And, Compare, ConnectsTo, Reachable> node;

    friend bool operator==(const ConstraintExpr&, const ConstraintExpr&) = default;
};

struct ConstraintSet {
    std::vector<ConstraintExpr> constraints;
    friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;
};

struct NamedConstraintSet {
    std::string name;
    ConstraintSet set;
    friend bool operator==(const NamedConstraintSet&, const NamedConstraintSet&) = default;
};

struct SpecDocument {
    std::vector<ComponentType> components;
    std::vector<HostSpec> hosts;
    std::vector<NamedConstraintSet> constraintsets;

    const ComponentType* find_component(std::string_view name) const;
    const HostSpec* find_host(std::string_view name) const;
    const ConstraintSet* find_constraintset(std::string_view name) const;
    std::optional<std::size_t> host_index(std::string_view name) const;
    std::optional<std::size_t> component_index(std::string_view name) const;

    friend bool operator==(const SpecDocument&, const SpecDocument&) = default;
};

/// Merges a resources document and a constraints document. Either may carry
/// any kind of declaration; duplicates are reported by validation.
SpecDocument merge(SpecDocument resources, const SpecDocument& constraints);

/// Picks the constraintset to use: `requested` if non-empty, else the only
/// declared one. Throws lang::ValidationError when ambiguous or missing.
std::string select_constraintset(const SpecDocument& doc, std::string_view requested);

}  // namespace adme::lang
