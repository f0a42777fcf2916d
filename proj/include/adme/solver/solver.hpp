#pragma once

// Finds configurations that satisfy a constraintset over the declared
// resources.
//
// The bounded space for a (document, constraintset, options) triple is:
//   * placements: per host a count per component type, summing to at most
//     max_instances_per_host, totalling at most max_total_instances, and at
//     least every pinned count;
//   * wirings: any subset of the channel candidates, where the candidates are
//     the instantiations u.a -> v.b (u != v) of every `p.a connectsto q.b` in
//     the constraintset, p and q ranging over instances of their binder
//     types. A chosen subset must respect port capacity (one channel per
//     non-variadic port), port roles (a port is only a source or only a sink
//     on one instance) and channel_budget. Variadic indices are assigned by
//     model::materialize.
// solve() searches that space with pruning; enumerate_all() walks all of it.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adme/lang/ast.hpp"
#include "adme/model/configuration.hpp"

namespace adme::solver {

class SolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class UnknownConstraintSet : public SolveError {
public:
    using SolveError::SolveError;
};
class BoundsError : public SolveError {
public:
    using SolveError::SolveError;
};
class SpaceTooLarge : public SolveError {
public:
    using SolveError::SolveError;
};
/// No configuration satisfies the constraints, even with every pin dropped.
class NoSolution : public SolveError {
public:
    using SolveError::SolveError;
};

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

struct SolveOptions {
    unsigned max_instances_per_host = 1;
    /// Defaults to hosts * max_instances_per_host.
    std::optional<unsigned> max_total_instances;
    /// Stop after this many solutions; kUnlimited explores the whole space.
    std::size_t solution_limit = 1;
    /// Hard lower bounds on placement counts.
    std::vector<model::Binding> pins;
    /// Defaults to (number of placed instances)^2.
    std::optional<std::size_t> channel_budget;
    /// Search nodes before giving up with exhausted = false.
    std::optional<std::uint64_t> node_budget;
    /// Channels tried first during wiring (surviving structure on a re-solve).
    std::vector<model::Channel> preferred_channels;
};

struct SolveStats {
    std::uint64_t nodes = 0;
    double millis = 0.0;
};

struct SolveOutcome {
    std::vector<model::Configuration> solutions;
    /// True iff the bounded space was fully explored.
    bool exhausted = false;
    SolveStats stats;
};

SolveOutcome solve(const lang::SpecDocument& doc, const std::string& cs_name, const SolveOptions& opts);

struct Relaxation {
    model::Configuration config;
    std::vector<model::Binding> removed;
};

/// Keeps as many pins as possible: tries removing k = 0, 1, ... pins, and for
/// each k the removal sets in lexicographic order over the canonically sorted
/// pins. `opts.pins` is ignored in favour of `pins`. Throws NoSolution.
Relaxation resolve_with_relaxation(const lang::SpecDocument& doc, const std::string& cs_name,
                                   const std::vector<model::Binding>& pins, const SolveOptions& opts);

/// Exhaustive generate-and-test over the bounded space using eval::check.
/// Refuses (SpaceTooLarge) when hosts * types > 12 or any admissible
/// placement has more than 24 channel candidates.
SolveOutcome enumerate_all(const lang::SpecDocument& doc, const std::string& cs_name,
                           const SolveOptions& opts);

/// Canonical pin order: host declaration order, then type name.
std::vector<model::Binding> sort_pins(const lang::SpecDocument& doc, std::vector<model::Binding> pins);

}  // namespace adme::solver
