#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "adme/lang/ast.hpp"
#include "adme/model/configuration.hpp"

namespace adme::eval {

class TypeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownInstance : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HostBinding {
    std::string host;
    friend bool operator==(const HostBinding&, const HostBinding&) = default;
};

using Bound = std::variant<HostBinding, model::InstanceId>;

/// Variable assignments in binding order.
using Environment = std::vector<std::pair<std::string, Bound>>;

/// `h=h1, r=Router@h3#0`
std::string to_string(const Environment& env);

struct ConstraintViolation {
    /// 0-based position of the top-level constraint in its constraintset.
    std::size_t constraint = 0;
    /// First falsifying assignment in canonical enumeration order.
    Environment witness;

    friend bool operator==(const ConstraintViolation&, const ConstraintViolation&) = default;
};

struct CheckResult {
    bool satisfied = true;
    std::vector<ConstraintViolation> violations;
};

/// Evaluates every top-level constraint of `cs` against `config`.
///
/// Host binders range over config.hosts; type binders over the instances of
/// that type in canonical order. `p.a connectsto q.b` holds when some channel
/// joins a slot of p's port a and a slot of q's port b, in either direction.
/// `reachable` follows channel direction and is reflexive. `card(T x
/// connectedto y)` counts distinct neighbour instances, not channels.
CheckResult check(const model::Configuration& config, const lang::ConstraintSet& cs,
                  const lang::SpecDocument& doc);

/// Directed path of zero or more channels from `from` to `to`.
bool reachable(const model::Configuration& config, const model::InstanceId& from,
               const model::InstanceId& to);

/// Instances sharing at least one channel with `x` in either direction.
std::set<model::InstanceId> connected_instances(const model::Configuration& config,
                                                const model::InstanceId& x);

}  // namespace adme::eval
