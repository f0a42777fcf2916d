#pragma once

// The monitoring manager: holds the goal (resources + constraintset), keeps
// the fabric in a configuration that meets it, and answers the five request
// methods.

#include <atomic>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "adme/ddd/ddd.hpp"
#include "adme/fabric/fabric.hpp"
#include "adme/lang/ast.hpp"
#include "adme/model/configuration.hpp"
#include "adme/solver/solver.hpp"

namespace adme::madme {

class ManagerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class UnknownHost : public ManagerError {
public:
    using ManagerError::ManagerError;
};
class DuplicateHost : public ManagerError {
public:
    using ManagerError::ManagerError;
};
class MalformedPayload : public ManagerError {
public:
    using ManagerError::ManagerError;
};

struct ProcessFailure {
    model::InstanceId instance;
    std::string host;
    friend bool operator==(const ProcessFailure&, const ProcessFailure&) = default;
};
struct HostFailure {
    std::string host;
    friend bool operator==(const HostFailure&, const HostFailure&) = default;
};
using Failure = std::variant<ProcessFailure, HostFailure>;

/// One failure per AmpReport, then one per suspected host that no AmpReport
/// in the window covers. Other events are ignored; an empty result means
/// there is nothing to do.
std::vector<Failure> classify_failure(const std::vector<fabric::FabricEvent>& events);

/// Throws UnknownHost / DuplicateHost.
lang::SpecDocument evolve_resources(lang::SpecDocument doc, const std::set<std::string>& remove,
                                    const std::vector<lang::HostSpec>& add);

struct RestartInPlace {
    model::InstanceId instance;
    ddd::EnactmentPlan plan;
};
struct Resolve {
    std::vector<model::Binding> removed_pins;
    model::Configuration new_config;
    ddd::EnactmentPlan plan;
};
struct ConstraintError {
    std::string detail;
};
struct NoOp {};
using Decision = std::variant<RestartInPlace, Resolve, ConstraintError, NoOp>;

/// `restart-in-place Router@h3#0`, `resolve removed=Client:h1:1`, ...
std::string describe(const Decision& decision);

struct ManagerState {
    lang::SpecDocument doc;
    std::string cs_name;
    model::Configuration deployed;
    std::vector<std::pair<fabric::Tick, std::string>> history;

    friend bool operator==(const ManagerState&, const ManagerState&) = default;
};

struct Response {
    bool ok = true;
    std::string body;
};

class Manager {
public:
    /// `base` supplies the solver bounds; its pins are ignored.
    Manager(lang::SpecDocument doc, std::string cs_name, fabric::Fabric fabric, solver::SolveOptions base = {});

    const ManagerState& state() const { return state_; }
    const fabric::Fabric& fabric() const { return fabric_; }
    fabric::Fabric& fabric() { return fabric_; }
    /// True after a ConstraintError until a later resolve succeeds.
    bool degraded() const { return degraded_; }

    /// Solves from scratch (or enacts `initial` when given) and deploys.
    /// Throws solver::NoSolution or the fabric's errors.
    void deploy(const std::optional<model::Configuration>& initial = std::nullopt);

    Decision autonomic_step(const Failure& failure);

    /// Reacts to everything the fabric delivered in one step.
    std::vector<Decision> react(const std::vector<fabric::FabricEvent>& events);

    /// Steps the fabric until its queue is empty.
    void run();

    /// Not degraded, deployed satisfies the constraintset and the fabric runs
    /// exactly what was deployed.
    bool goal_met() const;

    Response handle_request(const std::string& method, const std::string& body);
    /// Request payload: method on line 1, body after it.
    Response handle_payload(const std::string& payload);

private:
    ManagerState state_;
    fabric::Fabric fabric_;
    solver::SolveOptions base_;
    bool degraded_ = false;

    Decision record(Decision d);
    Decision resolve(const std::set<std::string>& dead);
    Decision resolve_on(lang::SpecDocument doc, const std::string& cs_name);
    Decision restart(const ProcessFailure& failure);
    Decision revise(const fabric::Revise& r);
    void enact(const model::Configuration& target);
    Response satisfy(const std::string& body) const;
    Response enact_request(const std::string& body);
};

// ---- framing and transport

/// 4-byte big-endian length, then the payload.
std::string encode_frame(const std::string& payload);
/// Pops one complete frame off the front of `buffer`, if there is one.
std::optional<std::string> decode_frame(std::string& buffer);

std::string encode_response(const Response& r);
Response decode_response(const std::string& payload);

/// Serves requests one at a time on `endpoint`: a TCP port when it is all
/// digits, otherwise a unix socket path. Returns once `stop` is set.
void serve(Manager& manager, const std::string& endpoint, const std::atomic<bool>& stop);

/// Sends one request and waits for the response.
Response request(const std::string& endpoint, const std::string& method, const std::string& body);

}  // namespace adme::madme
