#include "space.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace adme::solver {

Bounds check_bounds(const lang::SpecDocument& doc, const SolveOptions& opts) {
    if (opts.max_instances_per_host == 0) throw BoundsError("max_instances_per_host must be at least 1");
    if (opts.solution_limit == 0) throw BoundsError("solution_limit must be at least 1");
    if (opts.max_total_instances && *opts.max_total_instances == 0)
        throw BoundsError("max_total_instances must be at least 1");
    Bounds b;
    b.per_host = opts.max_instances_per_host;
    b.max_total = opts.max_total_instances
                      ? *opts.max_total_instances
                      : static_cast<unsigned>(doc.hosts.size()) * opts.max_instances_per_host;
    b.floor.assign(doc.hosts.size(), std::vector<unsigned>(doc.components.size(), 0));
    b.pinned_host.assign(doc.hosts.size(), false);
    for (const auto& pin : opts.pins) {
        auto h = doc.host_index(pin.host);
        if (!h) throw BoundsError("pin " + pin.str() + " names an undeclared host");
        auto t = doc.component_index(pin.type);
        if (!t) throw BoundsError("pin " + pin.str() + " names an undeclared component type");
        b.floor[*h][*t] = std::max(b.floor[*h][*t], pin.count);
        b.pinned_host[*h] = true;
    }
    return b;
}

namespace {

void count_vectors(const std::vector<unsigned>& floor, unsigned room, std::size_t t, std::vector<unsigned>& cur,
                   std::vector<std::vector<unsigned>>& out) {
    if (t == floor.size()) {
        out.push_back(cur);
        return;
    }
    for (unsigned c = floor[t]; c <= room; ++c) {
        cur[t] = c;
        count_vectors(floor, room - c, t + 1, cur, out);
    }
    cur[t] = 0;
}

}  // namespace

std::vector<std::vector<std::vector<unsigned>>> placement_options(const lang::SpecDocument& doc,
                                                                  const Bounds& bounds) {
    std::vector<std::vector<std::vector<unsigned>>> out(doc.hosts.size());
    for (std::size_t h = 0; h < doc.hosts.size(); ++h) {
        const auto& floor = bounds.floor[h];
        unsigned base = 0;
        for (unsigned c : floor) base += c;
        if (base > bounds.per_host) continue;  // unsatisfiable pins: no option
        std::vector<std::vector<unsigned>> all;
        std::vector<unsigned> cur(floor.size(), 0);
        // vectors with c_t >= floor_t and sum <= per_host
        std::vector<unsigned> shifted(floor.size(), 0);
        count_vectors(shifted, bounds.per_host - base, 0, cur, all);
        for (auto& v : all) {
            for (std::size_t t = 0; t < v.size(); ++t) v[t] += floor[t];
        }
        std::sort(all.begin(), all.end(), std::greater<>());
        if (bounds.pinned_host[h]) {
            auto it = std::find(all.begin(), all.end(), floor);
            std::rotate(all.begin(), it, it + 1);
        }
        out[h] = std::move(all);
    }
    return out;
}

namespace {

void collect(const lang::ConstraintExpr& e, std::vector<std::pair<std::string, std::string>>& scope,
             std::vector<Atom>& out) {
    auto type_of = [&](const std::string& var) {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
            if (it->first == var) return it->second;
        }
        throw SolveError("unbound variable " + var);
    };
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, lang::Quantified>) {
                for (const auto& b : n.binders) scope.emplace_back(b.var, b.sort);
                collect(*n.body, scope, out);
                scope.resize(scope.size() - n.binders.size());
            } else if constexpr (std::is_same_v<N, lang::Or> || std::is_same_v<N, lang::And>) {
                for (const auto& t : n.terms) collect(t, scope, out);
            } else if constexpr (std::is_same_v<N, lang::ConnectsTo>) {
                Atom a{type_of(n.src.var), n.src.port, type_of(n.dst.var), n.dst.port};
                if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
            }
        },
        e.node);
}

}  // namespace

std::vector<Atom> connects_atoms(const lang::ConstraintSet& cs) {
    std::vector<Atom> out;
    std::vector<std::pair<std::string, std::string>> scope;
    for (const auto& c : cs.constraints) collect(c, scope, out);
    return out;
}

std::vector<model::PortLink> channel_candidates(const std::vector<Atom>& atoms,
                                                const std::vector<model::InstanceId>& instances) {
    std::map<std::pair<std::string, std::string>, model::PortLink> by_text;
    for (const auto& a : atoms) {
        for (const auto& u : instances) {
            if (u.type != a.src_type) continue;
            for (const auto& v : instances) {
                if (v.type != a.dst_type || u == v) continue;
                model::PortLink link{u, a.src_port, v, a.dst_port};
                by_text.emplace(std::pair{u.str() + ":" + a.src_port, v.str() + ":" + a.dst_port}, link);
            }
        }
    }
    std::vector<model::PortLink> out;
    for (auto& [key, link] : by_text) out.push_back(std::move(link));
    return out;
}

}  // namespace adme::solver
