#include <map>
#include <set>

#include "adme/ddd/ddd.hpp"

namespace adme::ddd {

std::string to_string(const Action& action) {
    return std::visit(
        [](const auto& a) -> std::string {
            using A = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<A, Unwire>) return "unwire " + a.channel.src.str() + " " + a.channel.dst.str();
            if constexpr (std::is_same_v<A, Terminate>) return "terminate " + a.instance.str();
            if constexpr (std::is_same_v<A, Install>) return "install " + a.instance.str() + " " + a.host + " " + a.code;
            if constexpr (std::is_same_v<A, Instantiate>) return "instantiate " + a.instance.str();
            if constexpr (std::is_same_v<A, Wire>) return "wire " + a.channel.src.str() + " " + a.channel.dst.str();
        },
        action);
}

EnactmentPlan diff(const model::Configuration& old_in, const model::Configuration& new_in) {
    model::Configuration before = old_in, after = new_in;
    model::canonicalize(before);
    model::canonicalize(after);

    auto channel_key = [](const model::Channel& c) { return std::pair{c.src, c.dst}; };
    std::set<std::pair<model::PortSlot, model::PortSlot>> old_channels, new_channels;
    for (const auto& c : before.channels) old_channels.insert(channel_key(c));
    for (const auto& c : after.channels) new_channels.insert(channel_key(c));
    std::map<model::InstanceId, std::string> old_instances, new_instances;
    for (const auto& i : before.instances) old_instances[i.id] = i.code;
    for (const auto& i : after.instances) new_instances[i.id] = i.code;

    // An instance whose code changed is replaced.
    auto kept = [&](const model::InstanceId& id) {
        auto o = old_instances.find(id);
        auto n = new_instances.find(id);
        return o != old_instances.end() && n != new_instances.end() && o->second == n->second;
    };

    EnactmentPlan plan;
    for (const auto& c : before.channels) {
        if (!new_channels.count(channel_key(c)) || !kept(c.src.instance) || !kept(c.dst.instance))
            plan.actions.push_back(Unwire{c});
    }
    for (const auto& i : before.instances) {
        if (!kept(i.id)) plan.actions.push_back(Terminate{i.id});
    }
    std::set<std::pair<std::string, std::string>> installed;
    for (const auto& i : before.instances) installed.insert({i.id.host, i.code});
    for (const auto& i : after.instances) {
        if (!kept(i.id) && installed.insert({i.id.host, i.code}).second)
            plan.actions.push_back(Install{i.id, i.code, i.id.host});
    }
    for (const auto& i : after.instances) {
        if (!kept(i.id)) plan.actions.push_back(Instantiate{i.id, i.code});
    }
    for (const auto& c : after.channels) {
        if (!old_channels.count(channel_key(c)) || !kept(c.src.instance) || !kept(c.dst.instance))
            plan.actions.push_back(Wire{c});
    }
    return plan;
}

}  // namespace adme::ddd
