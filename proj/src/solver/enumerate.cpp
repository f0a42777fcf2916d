// Brute-force reference enumeration. Shares no search code with solve():
// placements, candidates and wirings are generated here from scratch and
// every leaf is judged by eval::check.

#include <chrono>
#include <map>
#include <set>
#include <tuple>

#include "adme/eval/check.hpp"
#include "adme/solver/solver.hpp"

namespace adme::solver {

namespace {

using model::InstanceId;
using Link = std::tuple<std::string, std::string, std::string, std::string>;  // types and ports

void atoms(const lang::ConstraintExpr& e, std::map<std::string, std::string> scope, std::set<Link>& out) {
    if (auto* q = std::get_if<lang::Quantified>(&e.node)) {
        for (const auto& b : q->binders) scope[b.var] = b.sort;
        atoms(*q->body, scope, out);
    } else if (auto* o = std::get_if<lang::Or>(&e.node)) {
        for (const auto& t : o->terms) atoms(t, scope, out);
    } else if (auto* a = std::get_if<lang::And>(&e.node)) {
        for (const auto& t : a->terms) atoms(t, scope, out);
    } else if (auto* c = std::get_if<lang::ConnectsTo>(&e.node)) {
        out.insert({scope.at(c->src.var), c->src.port, scope.at(c->dst.var), c->dst.port});
    }
}

std::vector<model::PortLink> candidates(const std::set<Link>& shapes, const std::vector<InstanceId>& ids) {
    std::vector<model::PortLink> out;
    for (const auto& [st, sp, dt, dp] : shapes) {
        for (const auto& u : ids) {
            for (const auto& v : ids) {
                if (u.type == st && v.type == dt && u != v) out.push_back({u, sp, v, dp});
            }
        }
    }
    return out;
}

class Walker {
public:
    Walker(const lang::SpecDocument& doc, const std::string& name, const lang::ConstraintSet& cs,
           const SolveOptions& opts, std::size_t budget, SolveOutcome& out)
        : doc_(doc), name_(name), cs_(cs), opts_(opts), budget_(budget), out_(out) {}

    bool run(const std::vector<InstanceId>& ids, const std::vector<model::PortLink>& cands) {
        ids_ = &ids;
        cands_ = &cands;
        chosen_.clear();
        uses_.clear();
        return walk(0);
    }

private:
    const lang::SpecDocument& doc_;
    const std::string& name_;
    const lang::ConstraintSet& cs_;
    const SolveOptions& opts_;
    std::size_t budget_;
    SolveOutcome& out_;
    const std::vector<InstanceId>* ids_ = nullptr;
    const std::vector<model::PortLink>* cands_ = nullptr;
    std::vector<model::PortLink> chosen_;
    // (instance, port) -> (sources, sinks)
    std::map<std::pair<InstanceId, std::string>, std::pair<int, int>> uses_;

    bool variadic(const InstanceId& id, const std::string& port) const {
        const auto* p = doc_.find_component(id.type)->find_port(port);
        return p && p->variadic;
    }

    bool admissible(const model::PortLink& l) {
        if (chosen_.size() >= budget_) return false;
        auto s = uses_[{l.src, l.src_port}];
        auto d = uses_[{l.dst, l.dst_port}];
        if (s.second || d.first) return false;
        if (!variadic(l.src, l.src_port) && s.first) return false;
        if (!variadic(l.dst, l.dst_port) && d.second) return false;
        return true;
    }

    // false = stop everything
    bool walk(std::size_t i) {
        ++out_.stats.nodes;
        if (i == cands_->size()) return leaf();
        if (!walk(i + 1)) return false;
        const auto& l = (*cands_)[i];
        if (!admissible(l)) return true;
        chosen_.push_back(l);
        ++uses_[{l.src, l.src_port}].first;
        ++uses_[{l.dst, l.dst_port}].second;
        bool go = walk(i + 1);
        --uses_[{l.src, l.src_port}].first;
        --uses_[{l.dst, l.dst_port}].second;
        chosen_.pop_back();
        return go;
    }

    bool leaf() {
        model::Configuration config;
        config.constraintset = name_;
        config.hosts = doc_.hosts;
        for (const auto& id : *ids_) config.instances.push_back({id, doc_.find_component(id.type)->code_uri});
        model::canonicalize(config);
        config.channels = model::materialize(chosen_, config, doc_);
        if (!eval::check(config, cs_, doc_).satisfied) return true;
        out_.solutions.push_back(std::move(config));
        return out_.solutions.size() < opts_.solution_limit;
    }
};

}  // namespace

SolveOutcome enumerate_all(const lang::SpecDocument& doc, const std::string& cs_name, const SolveOptions& opts) {
    auto start = std::chrono::steady_clock::now();
    const lang::ConstraintSet* cs = doc.find_constraintset(cs_name);
    if (!cs) throw UnknownConstraintSet("unknown constraintset '" + cs_name + "'");
    if (opts.max_instances_per_host == 0 || opts.solution_limit == 0 ||
        (opts.max_total_instances && *opts.max_total_instances == 0))
        throw BoundsError("bounds must be at least 1");
    for (const auto& pin : opts.pins) {
        if (!doc.find_host(pin.host) || !doc.find_component(pin.type))
            throw BoundsError("pin " + pin.str() + " names an undeclared host or type");
    }
    const std::size_t H = doc.hosts.size(), T = doc.components.size();
    if (H * T > 12) throw SpaceTooLarge("hosts x types exceeds 12");
    const unsigned cap = opts.max_instances_per_host;
    const unsigned total_cap = opts.max_total_instances ? *opts.max_total_instances : unsigned(H) * cap;

    std::set<Link> shapes;
    for (const auto& c : cs->constraints) atoms(c, {}, shapes);

    // odometer over every (host, type) count
    std::vector<std::vector<InstanceId>> placements;
    std::vector<unsigned> counts(H * T, 0);
    while (true) {
        bool ok = true;
        unsigned total = 0;
        for (std::size_t h = 0; h < H && ok; ++h) {
            unsigned on_host = 0;
            for (std::size_t t = 0; t < T; ++t) on_host += counts[h * T + t];
            ok = on_host <= cap;
            total += on_host;
        }
        ok = ok && total <= total_cap;
        for (const auto& pin : opts.pins) {
            if (!ok) break;
            ok = counts[*doc.host_index(pin.host) * T + *doc.component_index(pin.type)] >= pin.count;
        }
        if (ok) {
            std::vector<InstanceId> ids;
            for (std::size_t h = 0; h < H; ++h) {
                for (std::size_t t = 0; t < T; ++t) {
                    for (unsigned k = 0; k < counts[h * T + t]; ++k)
                        ids.push_back({doc.components[t].name, doc.hosts[h].name, k});
                }
            }
            placements.push_back(std::move(ids));
        }
        std::size_t i = 0;
        while (i < counts.size() && counts[i] == cap) counts[i++] = 0;
        if (i == counts.size()) break;
        ++counts[i];
    }

    std::vector<std::vector<model::PortLink>> cands;
    for (const auto& ids : placements) {
        cands.push_back(candidates(shapes, ids));
        if (cands.back().size() > 24)
            throw SpaceTooLarge("a placement has " + std::to_string(cands.back().size()) +
                                " channel candidates (limit 24)");
    }

    SolveOutcome out;
    bool complete = true;
    for (std::size_t p = 0; p < placements.size() && complete; ++p) {
        std::size_t n = placements[p].size();
        Walker w(doc, cs_name, *cs, opts, opts.channel_budget ? *opts.channel_budget : n * n, out);
        complete = w.run(placements[p], cands[p]);
    }
    out.exhausted = complete;
    out.stats.millis =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace adme::solver
