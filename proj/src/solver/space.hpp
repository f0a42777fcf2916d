#pragma once

// Pieces of the bounded search space used by solve() and relaxation.
// enumerate_all() deliberately does not use these.

#include <string>
#include <vector>

#include "adme/solver/solver.hpp"

namespace adme::solver {

struct Bounds {
    unsigned per_host = 1;
    unsigned max_total = 1;
    /// [host][type in declaration order] -> pinned minimum
    std::vector<std::vector<unsigned>> floor;
    std::vector<bool> pinned_host;
};

/// Throws BoundsError on zero bounds or pins naming undeclared hosts/types.
Bounds check_bounds(const lang::SpecDocument& doc, const SolveOptions& opts);

/// Per host, the admissible count vectors in value order.
std::vector<std::vector<std::vector<unsigned>>> placement_options(const lang::SpecDocument& doc,
                                                                  const Bounds& bounds);

/// A `p.a connectsto q.b` with the binder types of p and q resolved.
struct Atom {
    std::string src_type, src_port, dst_type, dst_port;
    friend bool operator==(const Atom&, const Atom&) = default;
};

std::vector<Atom> connects_atoms(const lang::ConstraintSet& cs);

/// Deduplicated, ordered by rendered (src, dst).
std::vector<model::PortLink> channel_candidates(const std::vector<Atom>& atoms,
                                                const std::vector<model::InstanceId>& instances);

}  // namespace adme::solver
