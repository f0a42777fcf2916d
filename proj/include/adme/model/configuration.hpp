#pragma once

// Deployment-domain value types shared by the solver, evaluator, DDD codec,
// fabric and manager.

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adme/lang/ast.hpp"

namespace adme::model {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Identity of a component instance, rendered as `Type@host#ordinal`.
struct InstanceId {
    std::string type;
    std::string host;
    unsigned ordinal = 0;

    std::string str() const;
    /// Throws FormatError.
    static InstanceId parse(std::string_view text);

    friend bool operator==(const InstanceId&, const InstanceId&) = default;
    friend auto operator<=>(const InstanceId&, const InstanceId&) = default;
};

/// A channel endpoint, rendered as `InstanceId:port` or `InstanceId:port[index]`.
/// The index is present iff the port is variadic.
struct PortSlot {
    InstanceId instance;
    std::string port;
    std::optional<unsigned> index;

    std::string str() const;
    static PortSlot parse(std::string_view text);

    friend bool operator==(const PortSlot&, const PortSlot&) = default;
    friend auto operator<=>(const PortSlot&, const PortSlot&) = default;
};

/// A uni-directional channel between two port slots of distinct instances.
struct Channel {
    PortSlot src;
    PortSlot dst;

    friend bool operator==(const Channel&, const Channel&) = default;
};

/// Canonical channel order: lexicographic on the rendered (src, dst) strings.
bool channel_less(const Channel& a, const Channel& b);

struct Instance {
    InstanceId id;
    std::string code;

    friend bool operator==(const Instance&, const Instance&) = default;
};

struct Configuration {
    /// Name of the constraintset the configuration was produced for; may be empty.
    std::string constraintset;
    std::vector<lang::HostSpec> hosts;
    std::vector<Instance> instances;
    std::vector<Channel> channels;

    const Instance* find(const InstanceId& id) const;
    bool contains(const InstanceId& id) const { return find(id) != nullptr; }

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Sorts instances by (host position, type name, ordinal) and channels by
/// channel_less. Idempotent.
void canonicalize(Configuration& config);
bool is_canonical(const Configuration& config);

/// A placement fact: `count` instances of `type` on `host`.
struct Binding {
    std::string type;
    std::string host;
    unsigned count = 1;

    /// `Type:host:count`
    std::string str() const;
    static Binding parse(std::string_view text);

    friend bool operator==(const Binding&, const Binding&) = default;
};

/// One Binding per (type, host), ordered like the instances they count.
std::vector<Binding> bindings_of(const Configuration& config);

struct Violation {
    std::string kind;   // e.g. "unknown port", "port slot reused"
    std::string locus;  // the offending instance, slot or channel
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

std::string to_string(const Violation& v);

/// Structural checks that need no resource declarations.
std::vector<Violation> validate(const Configuration& config);

/// Full structural validation against the declared resources.
std::vector<Violation> validate(const Configuration& config, const lang::SpecDocument& doc);

/// A channel between two ports before variadic indices are assigned.
struct PortLink {
    InstanceId src;
    std::string src_port;
    InstanceId dst;
    std::string dst_port;

    friend bool operator==(const PortLink&, const PortLink&) = default;
};

/// Turns port links into canonical channels: per (instance, variadic port)
/// indices run densely from 0 following the peer's (instance order, port
/// name); non-variadic ports carry no index. `config` supplies instance order.
std::vector<Channel> materialize(const std::vector<PortLink>& links, const Configuration& config,
                                 const lang::SpecDocument& doc);

/// The sub-configuration on `hosts` (in that order): instances on other hosts
/// and every channel touching them are dropped.
Configuration restrict_to(const Configuration& config, const std::vector<lang::HostSpec>& hosts);

}  // namespace adme::model
