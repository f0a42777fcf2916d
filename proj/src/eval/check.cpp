#include "adme/eval/check.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>

namespace adme::eval {

using model::Configuration;
using model::InstanceId;

std::string to_string(const Environment& env) {
    std::string out;
    for (const auto& [name, value] : env) {
        if (!out.empty()) out += ", ";
        out += name + "=";
        if (auto* h = std::get_if<HostBinding>(&value)) out += h->host;
        else out += std::get<InstanceId>(value).str();
    }
    return out;
}

namespace {

void require(const Configuration& config, const InstanceId& id) {
    if (!config.contains(id)) throw UnknownInstance("unknown instance " + id.str());
}

std::set<InstanceId> successors_closure(const Configuration& config, const InstanceId& from) {
    std::map<InstanceId, std::vector<InstanceId>> succ;
    for (const auto& ch : config.channels) succ[ch.src.instance].push_back(ch.dst.instance);
    std::set<InstanceId> seen{from};
    std::deque<InstanceId> queue{from};
    while (!queue.empty()) {
        InstanceId u = queue.front();
        queue.pop_front();
        for (const auto& v : succ[u]) {
            if (seen.insert(v).second) queue.push_back(v);
        }
    }
    return seen;
}

class Evaluator {
public:
    Evaluator(const Configuration& config) : config_(config) {
        Configuration sorted = config;
        model::canonicalize(sorted);
        for (const auto& inst : sorted.instances) ordered_.push_back(inst.id);
        for (const auto& ch : config.channels) {
            links_.insert({{ch.src.instance, ch.src.port}, {ch.dst.instance, ch.dst.port}});
            neighbours_[ch.src.instance].insert(ch.dst.instance);
            neighbours_[ch.dst.instance].insert(ch.src.instance);
        }
    }

    bool eval(const lang::ConstraintExpr& e, Environment& env) {
        return std::visit([&](const auto& n) { return node(n, env); }, e.node);
    }

    /// Precondition: eval(e, env) is false. Returns the environment at the
    /// first falsifying leaf, descending through forall and and.
    Environment explain(const lang::ConstraintExpr& e, Environment& env) {
        if (auto* q = std::get_if<lang::Quantified>(&e.node); q && q->kind == lang::Quantifier::Forall) {
            std::optional<Environment> found;
            enumerate(q->binders, 0, env, [&](Environment& inner) {
                if (eval(*q->body, inner)) return true;
                found = explain(*q->body, inner);
                return false;
            });
            if (found) return *found;
        }
        if (auto* a = std::get_if<lang::And>(&e.node)) {
            for (const auto& t : a->terms) {
                if (!eval(t, env)) return explain(t, env);
            }
        }
        return env;
    }

private:
    const Configuration& config_;
    std::vector<InstanceId> ordered_;
    using End = std::pair<InstanceId, std::string>;
    std::set<std::pair<End, End>> links_;
    std::map<InstanceId, std::set<InstanceId>> neighbours_;
    std::map<InstanceId, std::set<InstanceId>> closure_;

    const Bound& lookup(const Environment& env, const std::string& var) const {
        for (auto it = env.rbegin(); it != env.rend(); ++it) {
            if (it->first == var) return it->second;
        }
        throw TypeError("unbound variable " + var);
    }
    const InstanceId& instance(const Environment& env, const std::string& var) const {
        const Bound& b = lookup(env, var);
        if (auto* id = std::get_if<InstanceId>(&b)) return *id;
        throw TypeError("variable " + var + " is not bound to an instance");
    }

    // Calls visit(env) for each assignment of binders[i..] in canonical order;
    // stops early when visit returns false. Returns false iff stopped.
    template <typename F>
    bool enumerate(const std::vector<lang::Binder>& binders, std::size_t i, Environment& env, F&& visit) {
        if (i == binders.size()) return visit(env);
        const lang::Binder& b = binders[i];
        auto recurse = [&](Bound value) {
            env.emplace_back(b.var, std::move(value));
            bool go_on = enumerate(binders, i + 1, env, visit);
            env.pop_back();
            return go_on;
        };
        if (b.is_host()) {
            for (const auto& h : config_.hosts) {
                if (!recurse(HostBinding{h.name})) return false;
            }
        } else {
            for (const auto& id : ordered_) {
                if (id.type == b.sort && !recurse(id)) return false;
            }
        }
        return true;
    }

    bool node(const lang::Quantified& q, Environment& env) {
        bool forall = q.kind == lang::Quantifier::Forall;
        bool decided = false;
        enumerate(q.binders, 0, env, [&](Environment& inner) {
            bool v = eval(*q.body, inner);
            if (v != forall) {
                decided = true;
                return false;
            }
            return true;
        });
        return forall ? !decided : decided;
    }
    bool node(const lang::Or& o, Environment& env) {
        return std::any_of(o.terms.begin(), o.terms.end(), [&](const auto& t) { return eval(t, env); });
    }
    bool node(const lang::And& a, Environment& env) {
        return std::all_of(a.terms.begin(), a.terms.end(), [&](const auto& t) { return eval(t, env); });
    }
    bool node(const lang::ConnectsTo& c, Environment& env) {
        End p{instance(env, c.src.var), c.src.port};
        End q{instance(env, c.dst.var), c.dst.port};
        return links_.count({p, q}) || links_.count({q, p});
    }
    bool node(const lang::Reachable& r, Environment& env) {
        const InstanceId& from = instance(env, r.from);
        const InstanceId& to = instance(env, r.to);
        auto it = closure_.find(from);
        if (it == closure_.end()) it = closure_.emplace(from, successors_closure(config_, from)).first;
        return it->second.count(to) > 0;
    }

    using Value = std::variant<std::uint64_t, Bound>;

    Value value(const lang::ValueExpr& v, const Environment& env) const {
        if (auto* lit = std::get_if<lang::IntLiteral>(&v)) return lit->value;
        if (auto* ref = std::get_if<lang::VarRef>(&v)) return lookup(env, ref->name);
        const auto& card = std::get<lang::Card>(v);
        if (auto* s = std::get_if<lang::InstancesOf>(&card.set)) {
            const Bound& h = lookup(env, s->host_var);
            auto* host = std::get_if<HostBinding>(&h);
            if (!host) throw TypeError("variable " + s->host_var + " is not bound to a host");
            return static_cast<std::uint64_t>(std::count_if(ordered_.begin(), ordered_.end(), [&](const auto& id) {
                return id.type == s->type && id.host == host->host;
            }));
        }
        const auto& s = std::get<lang::ConnectedTo>(card.set);
        const InstanceId& peer = instance(env, s.peer_var);
        std::uint64_t n = 0;
        auto it = neighbours_.find(peer);
        if (it != neighbours_.end()) {
            for (const auto& x : it->second) {
                if (x.type == s.type && x != peer) ++n;
            }
        }
        return n;
    }

    bool node(const lang::Compare& c, Environment& env) {
        Value lhs = value(c.lhs, env);
        Value rhs = value(c.rhs, env);
        auto* l = std::get_if<std::uint64_t>(&lhs);
        auto* r = std::get_if<std::uint64_t>(&rhs);
        if (c.op == lang::CompareOp::Eq || c.op == lang::CompareOp::Ne) {
            bool eq = lhs == rhs;
            return c.op == lang::CompareOp::Eq ? eq : !eq;
        }
        if (!l || !r)
            throw TypeError(std::string("ordering comparison '") + lang::to_string(c.op) +
                            "' applied to a non-integer operand");
        switch (c.op) {
            case lang::CompareOp::Le: return *l <= *r;
            case lang::CompareOp::Ge: return *l >= *r;
            case lang::CompareOp::Lt: return *l < *r;
            case lang::CompareOp::Gt: return *l > *r;
            default: return false;
        }
    }
};

}  // namespace

CheckResult check(const Configuration& config, const lang::ConstraintSet& cs, const lang::SpecDocument&) {
    CheckResult result;
    Evaluator ev(config);
    for (std::size_t i = 0; i < cs.constraints.size(); ++i) {
        Environment env;
        if (!ev.eval(cs.constraints[i], env)) {
            result.violations.push_back(ConstraintViolation{i, ev.explain(cs.constraints[i], env)});
        }
    }
    result.satisfied = result.violations.empty();
    return result;
}

bool reachable(const Configuration& config, const InstanceId& from, const InstanceId& to) {
    require(config, from);
    require(config, to);
    return successors_closure(config, from).count(to) > 0;
}

std::set<InstanceId> connected_instances(const Configuration& config, const InstanceId& x) {
    require(config, x);
    std::set<InstanceId> out;
    for (const auto& ch : config.channels) {
        if (ch.src.instance == x) out.insert(ch.dst.instance);
        if (ch.dst.instance == x) out.insert(ch.src.instance);
    }
    out.erase(x);
    return out;
}

}  // namespace adme::eval
