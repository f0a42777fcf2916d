#include <map>
#include <set>

#include "adme/model/configuration.hpp"

namespace adme::model {

std::string to_string(const Violation& v) { return v.kind + " at " + v.locus + ": " + v.message; }

std::vector<Violation> validate(const Configuration& config) {
    std::vector<Violation> out;
    auto report = [&](std::string kind, std::string locus, std::string message) {
        out.push_back(Violation{std::move(kind), std::move(locus), std::move(message)});
    };

    std::set<std::string> host_names;
    for (const auto& h : config.hosts) {
        if (!host_names.insert(h.name).second) report("duplicate host", h.name, "host listed twice");
    }

    std::set<InstanceId> ids;
    std::map<std::pair<std::string, std::string>, std::set<unsigned>> ordinals;
    for (const auto& inst : config.instances) {
        if (!ids.insert(inst.id).second) {
            report("duplicate instance", inst.id.str(), "instance listed twice");
            continue;
        }
        if (!host_names.count(inst.id.host))
            report("unknown host", inst.id.str(), "host " + inst.id.host + " is not in the configuration");
        ordinals[{inst.id.type, inst.id.host}].insert(inst.id.ordinal);
    }
    for (const auto& [key, ords] : ordinals) {
        if (*ords.rbegin() + 1 != ords.size())
            report("ordinal gap", key.first + "@" + key.second,
                   "ordinals are not dense from 0");
    }

    using End = std::pair<InstanceId, std::string>;
    std::set<PortSlot> used;
    std::map<End, std::set<bool>> roles;  // true = source
    std::map<End, std::pair<std::set<unsigned>, unsigned>> indices;  // distinct indices, unindexed uses
    std::map<End, unsigned> uses;
    for (const auto& ch : config.channels) {
        std::string locus = ch.src.str() + "->" + ch.dst.str();
        bool endpoints_ok = true;
        for (const PortSlot* s : {&ch.src, &ch.dst}) {
            if (!ids.count(s->instance)) {
                report("unknown instance", locus, "endpoint " + s->instance.str() + " does not exist");
                endpoints_ok = false;
            }
        }
        if (ch.src.instance == ch.dst.instance) {
            report("self channel", locus, "both endpoints belong to one instance");
            continue;
        }
        if (!endpoints_ok) continue;
        bool reused = used.count(ch.src) || used.count(ch.dst);
        used.insert(ch.src);
        used.insert(ch.dst);
        if (reused) report("port slot reused", locus, "a slot of this channel is already wired");
        roles[{ch.src.instance, ch.src.port}].insert(true);
        roles[{ch.dst.instance, ch.dst.port}].insert(false);
        for (const PortSlot* s : {&ch.src, &ch.dst}) {
            auto& [idx, bare] = indices[{s->instance, s->port}];
            if (s->index) idx.insert(*s->index); else ++bare;
        }
    }
    for (const auto& [end, r] : roles) {
        if (r.size() > 1)
            report("port role conflict", end.first.str() + ":" + end.second,
                   "port is used both as a channel source and as a sink");
    }
    for (const auto& [end, p] : indices) {
        const auto& [idx, bare] = p;
        std::string locus = end.first.str() + ":" + end.second;
        if (!idx.empty() && bare)
            report("index mismatch", locus, "port mixes indexed and unindexed slots");
        if (!idx.empty() && *idx.rbegin() + 1 != idx.size())
            report("index gap", locus, "variadic indices are not dense from 0");
    }
    return out;
}

std::vector<Violation> validate(const Configuration& config, const lang::SpecDocument& doc) {
    std::vector<Violation> out = validate(config);
    auto report = [&](std::string kind, std::string locus, std::string message) {
        out.push_back(Violation{std::move(kind), std::move(locus), std::move(message)});
    };
    for (const auto& h : config.hosts) {
        if (!doc.find_host(h.name)) report("unknown host", h.name, "host is not declared");
    }
    for (const auto& inst : config.instances) {
        const auto* type = doc.find_component(inst.id.type);
        if (!type) {
            report("unknown type", inst.id.str(), "component type " + inst.id.type + " is not declared");
        } else if (type->code_uri != inst.code) {
            report("code mismatch", inst.id.str(), "code differs from the declared " + type->code_uri);
        }
    }
    std::set<std::pair<InstanceId, std::string>> seen;
    for (const auto& ch : config.channels) {
        for (const PortSlot* s : {&ch.src, &ch.dst}) {
            const auto* type = doc.find_component(s->instance.type);
            if (!type) continue;
            const auto* port = type->find_port(s->port);
            if (!port) {
                report("unknown port", s->str(), "type " + type->name + " has no port " + s->port);
                continue;
            }
            if (port->variadic != s->index.has_value() && seen.insert({s->instance, s->port}).second)
                report("index mismatch", s->str(),
                       port->variadic ? "variadic port slot needs an index"
                                      : "non-variadic port slot cannot carry an index");
        }
    }
    return out;
}

}  // namespace adme::model
