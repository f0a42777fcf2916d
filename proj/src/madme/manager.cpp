#include <algorithm>
#include <fstream>
#include <sstream>

#include "adme/eval/check.hpp"
#include "adme/lang/lang.hpp"
#include "adme/madme/madme.hpp"

namespace adme::madme {

using model::Configuration;

std::vector<Failure> classify_failure(const std::vector<fabric::FabricEvent>& events) {
    std::vector<Failure> out;
    std::set<std::string> reported;
    for (const auto& e : events) {
        if (auto* r = std::get_if<fabric::AmpReport>(&e.body)) {
            out.push_back(ProcessFailure{r->instance, r->host});
            reported.insert(r->host);
        }
    }
    for (const auto& e : events) {
        if (auto* s = std::get_if<fabric::HostFailureSuspected>(&e.body)) {
            if (!reported.contains(s->host)) out.push_back(HostFailure{s->host});
        }
    }
    return out;
}

lang::SpecDocument evolve_resources(lang::SpecDocument doc, const std::set<std::string>& remove,
                                    const std::vector<lang::HostSpec>& add) {
    for (const auto& name : remove) {
        if (!doc.find_host(name)) throw UnknownHost("no host named " + name);
    }
    std::erase_if(doc.hosts, [&](const lang::HostSpec& h) { return remove.contains(h.name); });
    for (const auto& h : add) {
        if (doc.find_host(h.name)) throw DuplicateHost("host " + h.name + " is already declared");
        doc.hosts.push_back(h);
    }
    return doc;
}

std::string describe(const Decision& decision) {
    return std::visit(
        [](const auto& d) -> std::string {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, RestartInPlace>) return "restart-in-place " + d.instance.str();
            if constexpr (std::is_same_v<D, Resolve>) {
                std::string out = "resolve removed=";
                for (std::size_t i = 0; i < d.removed_pins.size(); ++i)
                    out += (i ? "," : "") + d.removed_pins[i].str();
                return out;
            }
            if constexpr (std::is_same_v<D, ConstraintError>) return "constraint-error " + d.detail;
            if constexpr (std::is_same_v<D, NoOp>) return "noop";
        },
        decision);
}

Manager::Manager(lang::SpecDocument doc, std::string cs_name, fabric::Fabric fabric, solver::SolveOptions base)
    : state_{std::move(doc), std::move(cs_name), {}, {}}, fabric_(std::move(fabric)), base_(std::move(base)) {
    base_.pins.clear();
    base_.preferred_channels.clear();
    base_.solution_limit = 1;
    if (!state_.doc.find_constraintset(state_.cs_name))
        throw solver::UnknownConstraintSet("unknown constraintset '" + state_.cs_name + "'");
}

Decision Manager::record(Decision d) {
    std::string text = describe(d);
    state_.history.emplace_back(fabric_.clock(), text);
    fabric_.log("decision " + text);
    if (std::holds_alternative<ConstraintError>(d)) degraded_ = true;
    return d;
}

void Manager::enact(const Configuration& target) {
    fabric_.apply_plan(ddd::diff(fabric_.observed(), target));
    state_.deployed = target;
}

void Manager::deploy(const std::optional<Configuration>& initial) {
    Configuration target;
    if (initial) {
        target = *initial;
        if (auto v = model::validate(target, state_.doc); !v.empty()) throw ddd::ValidationError(v);
    } else {
        auto outcome = solver::solve(state_.doc, state_.cs_name, base_);
        if (outcome.solutions.empty()) throw solver::NoSolution("no configuration satisfies " + state_.cs_name);
        target = outcome.solutions.front();
    }
    target.constraintset = state_.cs_name;
    fabric_.log("deploy instances=" + std::to_string(target.instances.size()) +
                " channels=" + std::to_string(target.channels.size()));
    enact(target);
}

namespace {

bool host_alive(const fabric::Fabric& f, const std::string& name) {
    const auto* h = f.host(name);
    return h && h->alive;
}

bool machine_alive(const fabric::Fabric& f, const model::InstanceId& id) {
    const auto* h = f.host(id.host);
    if (!h || !h->alive) return false;
    auto it = h->machines.find(id);
    return it != h->machines.end() && it->second.alive;
}

}  // namespace

Decision Manager::restart(const ProcessFailure& failure) {
    const auto& deployed = state_.deployed;
    auto inst = std::find_if(deployed.instances.begin(), deployed.instances.end(),
                             [&](const model::Instance& i) { return i.id == failure.instance; });
    if (inst == deployed.instances.end()) return record(NoOp{});

    ddd::EnactmentPlan plan;
    const auto* host = fabric_.host(failure.host);
    if (host && !std::binary_search(host->installed.begin(), host->installed.end(), inst->code))
        plan.actions.push_back(ddd::Install{inst->id, inst->code, failure.host});
    plan.actions.push_back(ddd::Instantiate{inst->id, inst->code});
    for (const auto& ch : deployed.channels) {
        bool src = ch.src.instance == inst->id, dst = ch.dst.instance == inst->id;
        if (!src && !dst) continue;
        // a peer that died too is brought back (and rewired) by its own report
        const auto& peer = src ? ch.dst.instance : ch.src.instance;
        if (peer != inst->id && !machine_alive(fabric_, peer)) continue;
        plan.actions.push_back(ddd::Wire{ch});
    }

    fabric::Fabric trial = fabric_;
    try {
        trial.apply_plan(plan);
    } catch (const fabric::FabricError& e) {
        return record(ConstraintError{std::string("restart failed: ") + e.what()});
    }
    Decision d = record(RestartInPlace{inst->id, plan});
    fabric_.apply_plan(plan);
    return d;
}

Decision Manager::resolve_on(lang::SpecDocument doc, const std::string& cs_name) {
    std::vector<model::Binding> pins;
    for (const auto& b : model::bindings_of(state_.deployed)) {
        if (doc.find_host(b.host) && host_alive(fabric_, b.host)) pins.push_back(b);
    }
    solver::SolveOptions opts = base_;
    for (const auto& ch : state_.deployed.channels) {
        if (machine_alive(fabric_, ch.src.instance) && machine_alive(fabric_, ch.dst.instance))
            opts.preferred_channels.push_back(ch);
    }

    solver::Relaxation relaxed;
    try {
        relaxed = solver::resolve_with_relaxation(doc, cs_name, pins, opts);
    } catch (const solver::NoSolution&) {
        state_.doc = std::move(doc);
        state_.cs_name = cs_name;
        return record(ConstraintError{"no configuration satisfies " + cs_name + " on the remaining hosts"});
    } catch (const solver::SolveError& e) {
        state_.doc = std::move(doc);
        state_.cs_name = cs_name;
        return record(ConstraintError{e.what()});
    }
    relaxed.config.constraintset = cs_name;
    auto plan = ddd::diff(fabric_.observed(), relaxed.config);

    fabric::Fabric trial = fabric_;
    try {
        trial.apply_plan(plan);
    } catch (const fabric::FabricError& e) {
        state_.doc = std::move(doc);
        state_.cs_name = cs_name;
        return record(ConstraintError{std::string("enactment failed: ") + e.what()});
    }
    Decision d = record(Resolve{relaxed.removed, relaxed.config, plan});
    fabric_.apply_plan(plan);
    state_.doc = std::move(doc);
    state_.cs_name = cs_name;
    state_.deployed = relaxed.config;
    degraded_ = false;
    return d;
}

Decision Manager::resolve(const std::set<std::string>& dead) {
    std::set<std::string> known;
    for (const auto& h : dead) {
        if (state_.doc.find_host(h)) known.insert(h);
    }
    return resolve_on(evolve_resources(state_.doc, known, {}), state_.cs_name);
}

Decision Manager::autonomic_step(const Failure& failure) {
    if (auto* p = std::get_if<ProcessFailure>(&failure)) return restart(*p);
    return resolve({std::get<HostFailure>(failure).host});
}

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Decision Manager::revise(const fabric::Revise& r) {
    lang::SpecDocument doc;
    std::string cs;
    try {
        doc = lang::merge(lang::parse(slurp(r.resources_path)), lang::parse(slurp(r.constraints_path)));
        lang::validate(doc);
        cs = lang::select_constraintset(doc, doc.find_constraintset(state_.cs_name) ? state_.cs_name : "");
    } catch (const std::exception& e) {
        return record(ConstraintError{std::string("revise rejected: ") + e.what()});
    }
    return resolve_on(std::move(doc), cs);
}

std::vector<Decision> Manager::react(const std::vector<fabric::FabricEvent>& events) {
    std::vector<Decision> out;
    for (const auto& e : events) {
        if (auto* r = std::get_if<fabric::Revise>(&e.body)) {
            out.push_back(revise(*r));
        } else if (auto* a = std::get_if<fabric::AddHost>(&e.body)) {
            if (state_.doc.find_host(a->host.name)) continue;
            state_.doc = evolve_resources(state_.doc, {}, {a->host});
            if (degraded_) out.push_back(resolve({}));
        }
    }
    std::set<std::string> dead;
    for (const auto& f : classify_failure(events)) {
        if (auto* h = std::get_if<HostFailure>(&f)) dead.insert(h->host);
    }
    for (const auto& f : classify_failure(events)) {
        // a process on a host that went down in the same window is handled by the re-solve
        if (auto* p = std::get_if<ProcessFailure>(&f); p && !dead.contains(p->host)) out.push_back(restart(*p));
    }
    if (!dead.empty()) out.push_back(resolve(dead));
    return out;
}

void Manager::run() {
    while (!fabric_.idle()) react(fabric_.step());
}

bool Manager::goal_met() const {
    if (degraded_) return false;
    const auto* cs = state_.doc.find_constraintset(state_.cs_name);
    if (!cs || !eval::check(state_.deployed, *cs, state_.doc).satisfied) return false;
    auto live = fabric_.observed();
    return live.instances == state_.deployed.instances && live.channels == state_.deployed.channels;
}

}  // namespace adme::madme
