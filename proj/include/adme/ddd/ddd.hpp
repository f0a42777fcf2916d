#pragma once

// Deployment Description Documents: the XML form of a Configuration, and the
// plan that turns one configuration into another.

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "adme/model/configuration.hpp"

namespace adme::ddd {

/// Malformed XML. `line` is 1-based, 0 when unknown.
class XmlError : public std::runtime_error {
public:
    XmlError(unsigned long line, const std::string& message);
    unsigned long line() const { return line_; }

private:
    unsigned long line_;
};

/// Well-formed XML that is not a deployment document.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A deployment document describing a structurally invalid configuration.
class ValidationError : public std::runtime_error {
public:
    ValidationError(const std::vector<model::Violation>& violations);
    const std::vector<model::Violation>& violations() const { return violations_; }

private:
    std::vector<model::Violation> violations_;
};

std::string to_xml(const model::Configuration& config);
model::Configuration from_xml(std::string_view xml);

struct Unwire {
    model::Channel channel;
    friend bool operator==(const Unwire&, const Unwire&) = default;
};
struct Terminate {
    model::InstanceId instance;
    friend bool operator==(const Terminate&, const Terminate&) = default;
};
/// Puts the bundle `code` on `host`; `instance` is the first instance needing it.
struct Install {
    model::InstanceId instance;
    std::string code;
    std::string host;
    friend bool operator==(const Install&, const Install&) = default;
};
struct Instantiate {
    model::InstanceId instance;
    std::string code;
    friend bool operator==(const Instantiate&, const Instantiate&) = default;
};
struct Wire {
    model::Channel channel;
    friend bool operator==(const Wire&, const Wire&) = default;
};

using Action = std::variant<Unwire, Terminate, Install, Instantiate, Wire>;

/// `unwire <src> <dst>`, `terminate <id>`, `install <id> <host> <code>`,
/// `instantiate <id>`, `wire <src> <dst>`
std::string to_string(const Action& action);

struct EnactmentPlan {
    std::vector<Action> actions;
    bool empty() const { return actions.empty(); }
    friend bool operator==(const EnactmentPlan&, const EnactmentPlan&) = default;
};

/// Phases Unwire, Terminate, Install, Instantiate, Wire, each in canonical
/// order. Instances are matched by (type, host, ordinal); channels by their
/// exact slots.
EnactmentPlan diff(const model::Configuration& old_config, const model::Configuration& new_config);

}  // namespace adme::ddd
