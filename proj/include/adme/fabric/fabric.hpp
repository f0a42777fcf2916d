#pragma once

// Virtual-time simulation of the hosts a deployment runs on: per-instance
// machines, one monitor (AMP) per host, injected failures and the reports
// the manager gets to see.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "adme/ddd/ddd.hpp"
#include "adme/lang/ast.hpp"
#include "adme/model/configuration.hpp"

namespace adme::fabric {

using Tick = std::uint64_t;

class FabricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class DuplicateHost : public FabricError {
public:
    using FabricError::FabricError;
};
/// An action targeted a host that is down or unknown.
class HostDown : public FabricError {
public:
    explicit HostDown(std::string host) : FabricError("host " + host + " is down"), host_(std::move(host)) {}
    const std::string& host() const { return host_; }

private:
    std::string host_;
};
class UnknownInstance : public FabricError {
public:
    using FabricError::FabricError;
};
class UnknownChannel : public FabricError {
public:
    using FabricError::FabricError;
};
class PastEvent : public FabricError {
public:
    using FabricError::FabricError;
};
class ScenarioError : public FabricError {
public:
    ScenarioError(int line, const std::string& message)
        : FabricError("scenario line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct MachineState {
    model::InstanceId instance;
    std::string code;
    bool alive = true;
    std::vector<model::Channel> channels;  // canonical order
};

struct HostState {
    lang::HostSpec spec;
    bool alive = true;
    bool amp_alive = true;
    std::map<model::InstanceId, MachineState> machines;
    std::vector<std::string> installed;  // sorted
};

struct CrashProcess {
    model::InstanceId instance;
};
struct CrashHost {
    std::string host;
};
struct AddHost {
    lang::HostSpec host;
};
struct Heartbeat {
    std::string from;
};
struct AmpReport {
    std::string host;
    model::InstanceId instance;
};
struct HostFailureSuspected {
    std::string host;
};
struct Revise {
    std::string constraints_path;
    std::string resources_path;
};

struct FabricEvent {
    Tick at = 0;
    std::variant<CrashProcess, CrashHost, AddHost, Heartbeat, AmpReport, HostFailureSuspected, Revise> body;
};

/// `<kind> <args>` without the tick, e.g. `amp-report h3 Router@h3#0`.
std::string describe(const FabricEvent& event);

struct Effect {
    Tick tick = 0;
    ddd::Action action;
};

class Fabric {
public:
    static constexpr Tick kDefaultHeartbeatTimeout = 3;

    /// Throws DuplicateHost.
    static Fabric boot(const std::vector<lang::HostSpec>& hosts, std::uint64_t seed,
                       Tick heartbeat_timeout = kDefaultHeartbeatTimeout);

    Tick clock() const { return clock_; }
    std::uint64_t seed() const { return seed_; }
    Tick heartbeat_timeout() const { return timeout_; }

    /// Hosts in the order they joined.
    const std::vector<HostState>& hosts() const { return hosts_; }
    const HostState* host(const std::string& name) const;
    /// Live channels, canonical order.
    const std::vector<model::Channel>& channels() const { return channels_; }

    /// What is actually running: alive hosts, alive machines, live channels.
    model::Configuration observed() const;

    /// Applies every action or none. Throws HostDown, UnknownInstance,
    /// UnknownChannel or FabricError, leaving the fabric untouched.
    std::vector<Effect> apply_plan(const ddd::EnactmentPlan& plan);

    /// Brings a new (or previously dead) host up with a fresh AMP.
    void add_host(const lang::HostSpec& spec);

    /// Throws PastEvent when event.at < clock().
    void inject(FabricEvent event);

    /// Processes every event of the next pending tick and returns what the
    /// manager gets to observe. No-op returning {} when nothing is queued.
    std::vector<FabricEvent> step();

    std::optional<Tick> next_tick() const;
    bool idle() const { return queue_.empty(); }

    /// Appends `<clock> <text>` to the trace.
    void log(const std::string& text);
    const std::vector<std::string>& trace() const { return trace_; }
    std::string trace_text() const;

private:
    Tick clock_ = 0;
    std::uint64_t seed_ = 0;
    Tick timeout_ = kDefaultHeartbeatTimeout;
    std::uint64_t sequence_ = 0;
    std::vector<HostState> hosts_;
    std::vector<model::Channel> channels_;
    std::multimap<std::pair<Tick, std::uint64_t>, FabricEvent> queue_;
    std::vector<std::string> trace_;

    HostState* find_host(const std::string& name);
    void apply(const ddd::Action& action);
    void drop_channels_of(const model::InstanceId& id);
    void enqueue(FabricEvent event);
};

/// Parses scenario text; relative revise paths resolve against `base_dir`.
std::vector<FabricEvent> parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {});

}  // namespace adme::fabric
