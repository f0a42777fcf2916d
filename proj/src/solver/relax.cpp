#include <algorithm>

#include "adme/solver/solver.hpp"

namespace adme::solver {

std::vector<model::Binding> sort_pins(const lang::SpecDocument& doc, std::vector<model::Binding> pins) {
    auto key = [&](const model::Binding& b) {
        auto h = doc.host_index(b.host);
        return std::tuple{h ? *h : doc.hosts.size(), b.host, b.type, b.count};
    };
    std::stable_sort(pins.begin(), pins.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    return pins;
}

namespace {

// Calls f(mask) for every k-subset of n in lexicographic order of the
// ascending index lists; stops when f returns true.
template <typename F>
bool subsets(std::size_t n, std::size_t k, std::size_t from, std::vector<std::size_t>& cur, F&& f) {
    if (cur.size() == k) return f(cur);
    for (std::size_t i = from; i + (k - cur.size()) <= n; ++i) {
        cur.push_back(i);
        if (subsets(n, k, i + 1, cur, f)) return true;
        cur.pop_back();
    }
    return false;
}

}  // namespace

Relaxation resolve_with_relaxation(const lang::SpecDocument& doc, const std::string& cs_name,
                                   const std::vector<model::Binding>& pins, const SolveOptions& opts) {
    std::vector<model::Binding> sorted = sort_pins(doc, pins);
    SolveOptions local = opts;
    local.solution_limit = 1;
    std::optional<Relaxation> found;
    for (std::size_t k = 0; k <= sorted.size() && !found; ++k) {
        std::vector<std::size_t> cur;
        subsets(sorted.size(), k, 0, cur, [&](const std::vector<std::size_t>& removed) {
            local.pins.clear();
            std::vector<model::Binding> dropped;
            for (std::size_t i = 0; i < sorted.size(); ++i) {
                if (std::find(removed.begin(), removed.end(), i) != removed.end()) dropped.push_back(sorted[i]);
                else local.pins.push_back(sorted[i]);
            }
            SolveOutcome out = solve(doc, cs_name, local);
            if (out.solutions.empty()) return false;
            found = Relaxation{std::move(out.solutions.front()), std::move(dropped)};
            return true;
        });
    }
    if (!found) throw NoSolution("no configuration satisfies constraintset '" + cs_name + "'");
    return std::move(*found);
}

}  // namespace adme::solver
