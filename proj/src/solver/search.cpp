#include <algorithm>
#include <array>
#include <chrono>
#include <deque>
#include <map>
#include <set>
#include <tuple>
#include <variant>

#include "adme/solver/solver.hpp"
#include "space.hpp"

namespace adme::solver {

using model::Configuration;
using model::InstanceId;

namespace {

// Kleene logic over partially decided worlds.
enum class Tri : std::uint8_t { F, T, U };

constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();

struct HostRef {
    std::size_t index;
    friend bool operator==(const HostRef&, const HostRef&) = default;
};
using Bound = std::variant<HostRef, InstanceId>;
using Env = std::vector<std::pair<std::string, Bound>>;

struct Val {
    bool is_int = true;
    std::uint64_t lo = 0, hi = 0;
    Bound obj = HostRef{0};
};

enum class Slot : std::uint8_t { Undecided, Present, Absent };

class Search {
public:
    Search(const lang::SpecDocument& doc, const std::string& cs_name, const lang::ConstraintSet& cs,
           const SolveOptions& opts, const Bounds& bounds)
        : doc_(doc), cs_name_(cs_name), cs_(cs), opts_(opts), bounds_(bounds) {
        for (const auto& t : doc.components) types_.push_back(t.name);
        options_ = placement_options(doc, bounds);
        atoms_ = connects_atoms(cs);
    }

    SolveOutcome run() {
        auto start = std::chrono::steady_clock::now();
        place(0);
        SolveOutcome out;
        out.solutions = std::move(solutions_);
        out.exhausted = !stopped_;
        out.stats.nodes = nodes_;
        out.stats.millis =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return out;
    }

private:
    const lang::SpecDocument& doc_;
    const std::string& cs_name_;
    const lang::ConstraintSet& cs_;
    const SolveOptions& opts_;
    const Bounds& bounds_;
    std::vector<std::string> types_;
    std::vector<std::vector<std::vector<unsigned>>> options_;
    std::vector<Atom> atoms_;

    // placement
    std::vector<const std::vector<unsigned>*> chosen_;
    unsigned total_ = 0;
    std::vector<InstanceId> instances_;

    // wiring
    bool wiring_ = false;
    std::vector<model::PortLink> cands_;
    std::vector<Slot> state_;
    std::vector<std::size_t> order_;
    std::vector<bool> preferred_;
    std::map<std::tuple<InstanceId, std::string, InstanceId, std::string>, std::size_t> cand_index_;
    std::map<InstanceId, std::vector<std::size_t>> touching_;
    struct EndState {
        bool variadic = false;
        unsigned present = 0;
        int role = 0;  // 0 none, 1 source, 2 sink
    };
    std::map<std::pair<InstanceId, std::string>, EndState> ends_;
    std::size_t present_ = 0;
    std::size_t budget_ = 0;
    std::map<InstanceId, std::pair<std::set<InstanceId>, std::set<InstanceId>>> closures_;

    std::vector<Configuration> solutions_;
    std::uint64_t nodes_ = 0;
    bool stopped_ = false;

    bool complete() const { return chosen_.size() == doc_.hosts.size(); }

    bool tick() {
        ++nodes_;
        if (opts_.node_budget && nodes_ > *opts_.node_budget) stopped_ = true;
        return !stopped_;
    }

    // ---- placement phase

    void place(std::size_t h) {
        if (stopped_ || !tick()) return;
        if (evaluate() == Tri::F) return;
        if (h == doc_.hosts.size()) {
            wire_placement();
            return;
        }
        for (const auto& option : options_[h]) {
            unsigned n = 0;
            for (unsigned c : option) n += c;
            if (total_ + n > bounds_.max_total) continue;
            chosen_.push_back(&option);
            total_ += n;
            std::size_t mark = instances_.size();
            append_instances(h, option);
            place(h + 1);
            instances_.resize(mark);
            total_ -= n;
            chosen_.pop_back();
            if (stopped_) return;
        }
    }

    void append_instances(std::size_t h, const std::vector<unsigned>& counts) {
        // canonical: type name order within a host
        std::vector<std::size_t> idx(types_.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return types_[a] < types_[b]; });
        for (auto t : idx) {
            for (unsigned k = 0; k < counts[t]; ++k) instances_.push_back({types_[t], doc_.hosts[h].name, k});
        }
    }

    // ---- wiring phase

    void wire_placement() {
        cands_ = channel_candidates(atoms_, instances_);
        state_.assign(cands_.size(), Slot::Undecided);
        cand_index_.clear();
        touching_.clear();
        ends_.clear();
        closures_.clear();
        present_ = 0;
        budget_ = opts_.channel_budget ? *opts_.channel_budget : instances_.size() * instances_.size();
        preferred_.assign(cands_.size(), false);
        for (std::size_t i = 0; i < cands_.size(); ++i) {
            const auto& c = cands_[i];
            cand_index_[{c.src, c.src_port, c.dst, c.dst_port}] = i;
            touching_[c.src].push_back(i);
            touching_[c.dst].push_back(i);
            for (const auto& [id, port] : {std::pair{c.src, c.src_port}, std::pair{c.dst, c.dst_port}}) {
                auto& e = ends_[{id, port}];
                const auto* p = doc_.find_component(id.type)->find_port(port);
                e.variadic = p && p->variadic;
            }
        }
        order_.clear();
        for (const auto& ch : opts_.preferred_channels) {
            auto it = cand_index_.find({ch.src.instance, ch.src.port, ch.dst.instance, ch.dst.port});
            if (it != cand_index_.end() && !preferred_[it->second]) {
                preferred_[it->second] = true;
                order_.push_back(it->second);
            }
        }
        for (std::size_t i = 0; i < cands_.size(); ++i) {
            if (!preferred_[i]) order_.push_back(i);
        }
        wiring_ = true;
        wire(0);
        wiring_ = false;
    }

    bool can_add(std::size_t i) const {
        if (present_ >= budget_) return false;
        const auto& c = cands_[i];
        const auto& s = ends_.at({c.src, c.src_port});
        const auto& d = ends_.at({c.dst, c.dst_port});
        if (!s.variadic && s.present > 0) return false;
        if (!d.variadic && d.present > 0) return false;
        if (s.role == 2 || d.role == 1) return false;
        return true;
    }

    void set_present(std::size_t i, bool on) {
        const auto& c = cands_[i];
        auto& s = ends_.at({c.src, c.src_port});
        auto& d = ends_.at({c.dst, c.dst_port});
        if (on) {
            state_[i] = Slot::Present;
            ++present_;
            ++s.present;
            ++d.present;
            s.role = 1;
            d.role = 2;
        } else {
            state_[i] = Slot::Undecided;
            --present_;
            if (--s.present == 0) s.role = 0;
            if (--d.present == 0) d.role = 0;
        }
    }

    void wire(std::size_t depth) {
        if (stopped_ || !tick()) return;
        closures_.clear();
        Tri t = evaluate();
        if (t == Tri::F) return;
        if (depth == order_.size()) {
            if (t == Tri::T) record();
            return;
        }
        std::size_t i = order_[depth];
        for (Slot v : preferred_[i] ? std::array{Slot::Present, Slot::Absent}
                                    : std::array{Slot::Absent, Slot::Present}) {
            if (v == Slot::Present) {
                if (!can_add(i)) continue;
                set_present(i, true);
                wire(depth + 1);
                set_present(i, false);
            } else {
                state_[i] = Slot::Absent;
                wire(depth + 1);
                state_[i] = Slot::Undecided;
            }
            if (stopped_) return;
        }
    }

    void record() {
        Configuration config;
        config.constraintset = cs_name_;
        config.hosts = doc_.hosts;
        for (const auto& id : instances_)
            config.instances.push_back({id, doc_.find_component(id.type)->code_uri});
        std::vector<model::PortLink> links;
        for (std::size_t i = 0; i < cands_.size(); ++i) {
            if (state_[i] == Slot::Present) links.push_back(cands_[i]);
        }
        model::canonicalize(config);
        config.channels = model::materialize(links, config, doc_);
        solutions_.push_back(std::move(config));
        if (solutions_.size() >= opts_.solution_limit) stopped_ = true;
    }

    // ---- three-valued evaluation

    Tri evaluate() {
        Tri all = Tri::T;
        for (const auto& c : cs_.constraints) {
            Env env;
            Tri t = eval(c, env);
            if (t == Tri::F) return Tri::F;
            if (t == Tri::U) all = Tri::U;
        }
        return all;
    }

    Tri eval(const lang::ConstraintExpr& e, Env& env) {
        return std::visit([&](const auto& n) { return node(n, env); }, e.node);
    }

    const Bound& lookup(const Env& env, const std::string& var) const {
        for (auto it = env.rbegin(); it != env.rend(); ++it) {
            if (it->first == var) return it->second;
        }
        throw SolveError("unbound variable " + var);
    }
    const InstanceId& inst(const Env& env, const std::string& var) const {
        return std::get<InstanceId>(lookup(env, var));
    }

    Tri quantify(const lang::Quantified& q, std::size_t i, Env& env) {
        bool forall = q.kind == lang::Quantifier::Forall;
        if (i == q.binders.size()) return eval(*q.body, env);
        const auto& b = q.binders[i];
        Tri result = forall ? Tri::T : Tri::F;
        auto visit = [&](Bound v) {
            env.emplace_back(b.var, std::move(v));
            Tri r = quantify(q, i + 1, env);
            env.pop_back();
            if (r == Tri::U) result = Tri::U;
            return r == (forall ? Tri::F : Tri::T);
        };
        if (b.is_host()) {
            for (std::size_t h = 0; h < doc_.hosts.size(); ++h) {
                if (visit(HostRef{h})) return forall ? Tri::F : Tri::T;
            }
        } else {
            for (const auto& id : instances_) {
                if (id.type == b.sort && visit(id)) return forall ? Tri::F : Tri::T;
            }
            if (!complete()) result = Tri::U;
        }
        return result;
    }

    Tri node(const lang::Quantified& q, Env& env) { return quantify(q, 0, env); }

    Tri node(const lang::Or& o, Env& env) {
        Tri r = Tri::F;
        for (const auto& t : o.terms) {
            Tri v = eval(t, env);
            if (v == Tri::T) return Tri::T;
            if (v == Tri::U) r = Tri::U;
        }
        return r;
    }
    Tri node(const lang::And& a, Env& env) {
        Tri r = Tri::T;
        for (const auto& t : a.terms) {
            Tri v = eval(t, env);
            if (v == Tri::F) return Tri::F;
            if (v == Tri::U) r = Tri::U;
        }
        return r;
    }

    Tri slot_state(const InstanceId& u, const std::string& a, const InstanceId& v, const std::string& b) const {
        auto it = cand_index_.find({u, a, v, b});
        if (it == cand_index_.end()) return Tri::F;
        switch (state_[it->second]) {
            case Slot::Present: return Tri::T;
            case Slot::Absent: return Tri::F;
            default: return Tri::U;
        }
    }

    Tri node(const lang::ConnectsTo& c, Env& env) {
        const InstanceId& u = inst(env, c.src.var);
        const InstanceId& v = inst(env, c.dst.var);
        if (u == v) return Tri::F;
        if (!wiring_) return Tri::U;
        Tri x = slot_state(u, c.src.port, v, c.dst.port);
        Tri y = slot_state(v, c.dst.port, u, c.src.port);
        if (x == Tri::T || y == Tri::T) return Tri::T;
        if (x == Tri::F && y == Tri::F) return Tri::F;
        return Tri::U;
    }

    // (surely reachable, possibly reachable) from `from`
    const std::pair<std::set<InstanceId>, std::set<InstanceId>>& closure(const InstanceId& from) {
        auto it = closures_.find(from);
        if (it != closures_.end()) return it->second;
        auto walk = [&](bool include_undecided) {
            std::set<InstanceId> seen{from};
            std::deque<InstanceId> queue{from};
            while (!queue.empty()) {
                InstanceId u = queue.front();
                queue.pop_front();
                auto t = touching_.find(u);
                if (t == touching_.end()) continue;
                for (std::size_t i : t->second) {
                    if (cands_[i].src != u) continue;
                    if (state_[i] == Slot::Absent) continue;
                    if (state_[i] == Slot::Undecided && !include_undecided) continue;
                    if (seen.insert(cands_[i].dst).second) queue.push_back(cands_[i].dst);
                }
            }
            return seen;
        };
        return closures_.emplace(from, std::pair{walk(false), walk(true)}).first->second;
    }

    Tri node(const lang::Reachable& r, Env& env) {
        const InstanceId& a = inst(env, r.from);
        const InstanceId& b = inst(env, r.to);
        if (a == b) return Tri::T;
        if (!wiring_) return Tri::U;
        const auto& [sure, maybe] = closure(a);
        if (sure.count(b)) return Tri::T;
        if (!maybe.count(b)) return Tri::F;
        return Tri::U;
    }

    Val value(const lang::ValueExpr& v, const Env& env) {
        Val out;
        if (auto* lit = std::get_if<lang::IntLiteral>(&v)) {
            out.lo = out.hi = lit->value;
            return out;
        }
        if (auto* ref = std::get_if<lang::VarRef>(&v)) {
            out.is_int = false;
            out.obj = lookup(env, ref->name);
            return out;
        }
        const auto& card = std::get<lang::Card>(v);
        if (auto* s = std::get_if<lang::InstancesOf>(&card.set)) {
            std::size_t h = std::get<HostRef>(lookup(env, s->host_var)).index;
            if (h < chosen_.size()) {
                auto t = std::find(types_.begin(), types_.end(), s->type);
                out.lo = out.hi = t == types_.end() ? 0 : (*chosen_[h])[t - types_.begin()];
            } else {
                out.lo = 0;
                out.hi = std::min<std::uint64_t>(bounds_.per_host, bounds_.max_total - total_);
            }
            return out;
        }
        const auto& s = std::get<lang::ConnectedTo>(card.set);
        const InstanceId& peer = inst(env, s.peer_var);
        if (!wiring_) {
            out.lo = 0;
            if (!complete()) {
                out.hi = kInf;
            } else {
                out.hi = std::count_if(instances_.begin(), instances_.end(),
                                       [&](const auto& id) { return id.type == s.type && id != peer; });
            }
            return out;
        }
        std::set<InstanceId> sure, maybe;
        auto t = touching_.find(peer);
        if (t != touching_.end()) {
            for (std::size_t i : t->second) {
                if (state_[i] == Slot::Absent) continue;
                const InstanceId& other = cands_[i].src == peer ? cands_[i].dst : cands_[i].src;
                if (other.type != s.type) continue;
                (state_[i] == Slot::Present ? sure : maybe).insert(other);
            }
        }
        for (const auto& x : sure) maybe.erase(x);
        out.lo = sure.size();
        out.hi = sure.size() + maybe.size();
        return out;
    }

    Tri node(const lang::Compare& c, Env& env) {
        Val l = value(c.lhs, env);
        Val r = value(c.rhs, env);
        using Op = lang::CompareOp;
        if (!l.is_int || !r.is_int) {
            bool eq = !l.is_int && !r.is_int && l.obj == r.obj;
            if (c.op == Op::Eq) return eq ? Tri::T : Tri::F;
            if (c.op == Op::Ne) return eq ? Tri::F : Tri::T;
            throw SolveError("ordering comparison on a non-integer operand");
        }
        auto le = [](const Val& a, const Val& b) {  // a <= b
            if (a.hi <= b.lo) return Tri::T;
            if (a.lo > b.hi) return Tri::F;
            return Tri::U;
        };
        auto lt = [](const Val& a, const Val& b) {  // a < b
            if (a.hi < b.lo) return Tri::T;
            if (a.lo >= b.hi) return Tri::F;
            return Tri::U;
        };
        auto negate = [](Tri t) { return t == Tri::U ? t : (t == Tri::T ? Tri::F : Tri::T); };
        Tri eq;
        if (l.lo == l.hi && r.lo == r.hi && l.lo == r.lo) eq = Tri::T;
        else if (l.hi < r.lo || r.hi < l.lo) eq = Tri::F;
        else eq = Tri::U;
        switch (c.op) {
            case Op::Eq: return eq;
            case Op::Ne: return negate(eq);
            case Op::Le: return le(l, r);
            case Op::Lt: return lt(l, r);
            case Op::Ge: return le(r, l);
            case Op::Gt: return lt(r, l);
        }
        return Tri::U;
    }
};

}  // namespace

SolveOutcome solve(const lang::SpecDocument& doc, const std::string& cs_name, const SolveOptions& opts) {
    const lang::ConstraintSet* cs = doc.find_constraintset(cs_name);
    if (!cs) throw UnknownConstraintSet("unknown constraintset '" + cs_name + "'");
    Bounds bounds = check_bounds(doc, opts);
    Search search(doc, cs_name, *cs, opts, bounds);
    return search.run();
}

}  // namespace adme::solver
