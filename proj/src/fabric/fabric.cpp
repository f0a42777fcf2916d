#include "adme/fabric/fabric.hpp"

#include <algorithm>
#include <set>

namespace adme::fabric {

using model::Channel;
using model::InstanceId;

std::string describe(const FabricEvent& event) {
    return std::visit(
        [](const auto& e) -> std::string {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, CrashProcess>) return "crash-process " + e.instance.str();
            if constexpr (std::is_same_v<E, CrashHost>) return "crash-host " + e.host;
            if constexpr (std::is_same_v<E, AddHost>) {
                std::string out = "add-host " + e.host.name;
                for (const auto& [k, v] : e.host.attributes) out += " " + k + "=" + v;
                return out;
            }
            if constexpr (std::is_same_v<E, Heartbeat>) return "heartbeat " + e.from;
            if constexpr (std::is_same_v<E, AmpReport>) return "amp-report " + e.host + " " + e.instance.str();
            if constexpr (std::is_same_v<E, HostFailureSuspected>) return "host-failure-suspected " + e.host;
            if constexpr (std::is_same_v<E, Revise>)
                return "revise constraints=" + e.constraints_path + " resources=" + e.resources_path;
        },
        event.body);
}

Fabric Fabric::boot(const std::vector<lang::HostSpec>& hosts, std::uint64_t seed, Tick heartbeat_timeout) {
    Fabric f;
    f.seed_ = seed;
    f.timeout_ = heartbeat_timeout;
    std::set<std::string> names;
    std::string list;
    for (const auto& h : hosts) {
        if (!names.insert(h.name).second) throw DuplicateHost("host " + h.name + " listed twice");
        f.hosts_.push_back(HostState{h, true, true, {}, {}});
        list += (list.empty() ? "" : ",") + h.name;
    }
    f.log("boot seed=" + std::to_string(seed) + " hosts=" + list);
    return f;
}

const HostState* Fabric::host(const std::string& name) const {
    for (const auto& h : hosts_) {
        if (h.spec.name == name) return &h;
    }
    return nullptr;
}

HostState* Fabric::find_host(const std::string& name) {
    return const_cast<HostState*>(static_cast<const Fabric*>(this)->host(name));
}

model::Configuration Fabric::observed() const {
    model::Configuration c;
    for (const auto& h : hosts_) {
        if (!h.alive) continue;
        c.hosts.push_back(h.spec);
        for (const auto& [id, m] : h.machines) {
            if (m.alive) c.instances.push_back({id, m.code});
        }
    }
    c.channels = channels_;
    model::canonicalize(c);
    return c;
}

void Fabric::drop_channels_of(const InstanceId& id) {
    std::vector<Channel> dropped;
    std::erase_if(channels_, [&](const Channel& ch) {
        bool touch = ch.src.instance == id || ch.dst.instance == id;
        if (touch) dropped.push_back(ch);
        return touch;
    });
    for (const auto& ch : dropped) {
        for (const auto* end : {&ch.src.instance, &ch.dst.instance}) {
            HostState* h = find_host(end->host);
            if (!h) continue;
            auto m = h->machines.find(*end);
            if (m != h->machines.end()) std::erase(m->second.channels, ch);
        }
    }
}

namespace {

void insert_sorted(std::vector<Channel>& v, const Channel& ch) {
    v.insert(std::upper_bound(v.begin(), v.end(), ch, model::channel_less), ch);
}

}  // namespace

void Fabric::apply(const ddd::Action& action) {
    auto live_host = [&](const std::string& name) -> HostState& {
        HostState* h = find_host(name);
        if (!h || !h->alive) throw HostDown(name);
        return *h;
    };
    auto live_machine = [&](const InstanceId& id) -> MachineState& {
        HostState& h = live_host(id.host);
        auto it = h.machines.find(id);
        if (it == h.machines.end() || !it->second.alive) throw UnknownInstance("no running machine for " + id.str());
        return it->second;
    };

    if (auto* a = std::get_if<ddd::Unwire>(&action)) {
        auto it = std::find(channels_.begin(), channels_.end(), a->channel);
        if (it == channels_.end()) {
            for (const auto* end : {&a->channel.src.instance, &a->channel.dst.instance}) live_host(end->host);
            throw UnknownChannel("no channel " + a->channel.src.str() + " -> " + a->channel.dst.str());
        }
        for (const auto* end : {&a->channel.src.instance, &a->channel.dst.instance}) {
            live_host(end->host);
            std::erase(live_machine(*end).channels, a->channel);
        }
        channels_.erase(it);
    } else if (auto* a = std::get_if<ddd::Terminate>(&action)) {
        HostState& h = live_host(a->instance.host);
        auto it = h.machines.find(a->instance);
        if (it == h.machines.end()) throw UnknownInstance("no machine for " + a->instance.str());
        drop_channels_of(a->instance);
        h.machines.erase(it);
    } else if (auto* a = std::get_if<ddd::Install>(&action)) {
        HostState& h = live_host(a->host);
        auto pos = std::lower_bound(h.installed.begin(), h.installed.end(), a->code);
        if (pos == h.installed.end() || *pos != a->code) h.installed.insert(pos, a->code);
    } else if (auto* a = std::get_if<ddd::Instantiate>(&action)) {
        HostState& h = live_host(a->instance.host);
        if (!std::binary_search(h.installed.begin(), h.installed.end(), a->code))
            throw FabricError("bundle " + a->code + " is not installed on " + h.spec.name);
        auto it = h.machines.find(a->instance);
        if (it != h.machines.end() && it->second.alive) throw FabricError(a->instance.str() + " is already running");
        h.machines[a->instance] = MachineState{a->instance, a->code, true, {}};
    } else if (auto* a = std::get_if<ddd::Wire>(&action)) {
        const Channel& ch = a->channel;
        MachineState& src = live_machine(ch.src.instance);
        MachineState& dst = live_machine(ch.dst.instance);
        if (std::find(channels_.begin(), channels_.end(), ch) != channels_.end())
            throw FabricError("channel " + ch.src.str() + " -> " + ch.dst.str() + " already wired");
        insert_sorted(src.channels, ch);
        insert_sorted(dst.channels, ch);
        insert_sorted(channels_, ch);
    }
}

std::vector<Effect> Fabric::apply_plan(const ddd::EnactmentPlan& plan) {
    Fabric scratch = *this;
    std::vector<Effect> effects;
    for (const auto& action : plan.actions) {
        scratch.apply(action);
        scratch.log(ddd::to_string(action));
        effects.push_back({clock_, action});
    }
    *this = std::move(scratch);
    return effects;
}

void Fabric::add_host(const lang::HostSpec& spec) {
    HostState* h = find_host(spec.name);
    if (h && h->alive) throw DuplicateHost("host " + spec.name + " is already up");
    if (h) {
        *h = HostState{spec, true, true, {}, {}};
    } else {
        hosts_.push_back(HostState{spec, true, true, {}, {}});
    }
}

void Fabric::enqueue(FabricEvent event) {
    Tick at = event.at;
    queue_.emplace(std::pair{at, sequence_++}, std::move(event));
}

void Fabric::inject(FabricEvent event) {
    if (event.at < clock_)
        throw PastEvent("event at tick " + std::to_string(event.at) + " is before the clock (" +
                        std::to_string(clock_) + ")");
    enqueue(std::move(event));
}

std::optional<Tick> Fabric::next_tick() const {
    if (queue_.empty()) return std::nullopt;
    return queue_.begin()->first.first;
}

std::vector<FabricEvent> Fabric::step() {
    std::vector<FabricEvent> delivered;
    if (queue_.empty()) return delivered;
    clock_ = queue_.begin()->first.first;
    // Events raised while processing this tick at this tick join the batch.
    while (!queue_.empty() && queue_.begin()->first.first == clock_) {
        FabricEvent ev = std::move(queue_.begin()->second);
        queue_.erase(queue_.begin());
        std::string text = describe(ev);

        if (auto* e = std::get_if<CrashProcess>(&ev.body)) {
            HostState* h = find_host(e->instance.host);
            auto m = h ? h->machines.find(e->instance) : decltype(h->machines.end()){};
            if (!h || !h->alive || m == h->machines.end() || !m->second.alive) {
                log(text + " ignored");
                continue;
            }
            log(text);
            m->second.alive = false;
            drop_channels_of(e->instance);
            m->second.channels.clear();
            if (h->amp_alive) enqueue(FabricEvent{clock_, AmpReport{h->spec.name, e->instance}});
        } else if (auto* e = std::get_if<CrashHost>(&ev.body)) {
            HostState* h = find_host(e->host);
            if (!h || !h->alive) {
                log(text + " ignored");
                continue;
            }
            log(text);
            for (auto& [id, m] : h->machines) {
                if (m.alive) drop_channels_of(id);
                m.alive = false;
                m.channels.clear();
            }
            h->alive = false;
            h->amp_alive = false;
            enqueue(FabricEvent{clock_ + timeout_, HostFailureSuspected{e->host}});
        } else if (auto* e = std::get_if<AddHost>(&ev.body)) {
            HostState* h = find_host(e->host.name);
            if (h && h->alive) {
                log(text + " ignored");
                continue;
            }
            add_host(e->host);
            log(text);
            delivered.push_back(std::move(ev));
        } else {
            log(text);
            delivered.push_back(std::move(ev));
        }
    }
    return delivered;
}

void Fabric::log(const std::string& text) { trace_.push_back(std::to_string(clock_) + " " + text); }

std::string Fabric::trace_text() const {
    std::string out;
    for (const auto& line : trace_) out += line + "\n";
    return out;
}

}  // namespace adme::fabric
