#pragma once

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "adme/ddd/ddd.hpp"
#include "adme/lang/lang.hpp"
#include "adme/model/configuration.hpp"

namespace fixtures {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string data(const std::string& name) { return read_file(std::string(ADME_DATA_DIR) + "/" + name); }

inline std::string sample_text() { return data("resources.deladas") + "\n" + data("randc.deladas"); }

/// Client/Router resources on h1..h6 with the randc constraintset.
inline adme::lang::SpecDocument sample_doc() { return adme::lang::parse(sample_text()); }

inline adme::model::InstanceId id(const std::string& text) { return adme::model::InstanceId::parse(text); }

/// Clients on h1, h2, h5, h6; routers on h3 (serving h1, h5) and h4 (serving
/// h2, h6); each client has out->cin and in->cout to its router; the routers
/// are joined by rout->rin both ways. 10 channels.
inline adme::model::Configuration baseline(const adme::lang::SpecDocument& doc) {
    using namespace adme::model;
    Configuration c;
    c.constraintset = "randc";
    c.hosts = doc.hosts;
    for (const char* h : {"h1", "h2", "h5", "h6"})
        c.instances.push_back({{"Client", h, 0}, doc.find_component("Client")->code_uri});
    for (const char* h : {"h3", "h4"})
        c.instances.push_back({{"Router", h, 0}, doc.find_component("Router")->code_uri});
    canonicalize(c);
    std::vector<PortLink> links;
    auto serve = [&](const char* client, const char* router) {
        links.push_back({{"Client", client, 0}, "out", {"Router", router, 0}, "cin"});
        links.push_back({{"Client", client, 0}, "in", {"Router", router, 0}, "cout"});
    };
    serve("h1", "h3");
    serve("h5", "h3");
    serve("h2", "h4");
    serve("h6", "h4");
    links.push_back({{"Router", "h3", 0}, "rout", {"Router", "h4", 0}, "rin"});
    links.push_back({{"Router", "h4", 0}, "rout", {"Router", "h3", 0}, "rin"});
    c.channels = materialize(links, c, doc);
    return c;
}

/// Drops `host` from the declared resources.
inline adme::lang::SpecDocument without_host(adme::lang::SpecDocument doc, const std::string& host) {
    std::erase_if(doc.hosts, [&](const auto& h) { return h.name == host; });
    return doc;
}

}  // namespace fixtures

namespace fixtures {

/// A random structurally valid configuration over `doc` (up to two instances
/// per host, channels added greedily while they keep it valid).
inline adme::model::Configuration random_valid_config(std::mt19937& rng, const adme::lang::SpecDocument& doc,
                                                      std::size_t max_links = 10) {
    using namespace adme::model;
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    Configuration c;
    c.constraintset = pick(0, 3) ? "randc" : "";
    for (const auto& h : doc.hosts) {
        if (!pick(0, 4)) continue;
        auto spec = h;
        if (!pick(0, 3)) spec.attributes.emplace_back("owner", pick(0, 1) ? "ops & <dev>" : "\"q\"'s");
        c.hosts.push_back(spec);
        for (const auto& t : doc.components) {
            int n = pick(0, 2) == 0 ? pick(1, 2) : 0;
            for (int k = 0; k < n; ++k) c.instances.push_back({{t.name, h.name, unsigned(k)}, t.code_uri});
        }
    }
    canonicalize(c);
    std::vector<PortLink> links;
    if (c.instances.size() >= 2) {
        std::size_t want = pick(0, int(max_links));
        for (std::size_t tries = 0; tries < 40 && links.size() < want; ++tries) {
            const auto& u = c.instances[pick(0, int(c.instances.size()) - 1)].id;
            const auto& v = c.instances[pick(0, int(c.instances.size()) - 1)].id;
            if (u == v) continue;
            const auto& pu = doc.find_component(u.type)->ports;
            const auto& pv = doc.find_component(v.type)->ports;
            PortLink l{u, pu[pick(0, int(pu.size()) - 1)].name, v, pv[pick(0, int(pv.size()) - 1)].name};
            links.push_back(l);
            auto trial = c;
            trial.channels = materialize(links, c, doc);
            if (!validate(trial, doc).empty()) links.pop_back();
        }
    }
    c.channels = materialize(links, c, doc);
    return c;
}

/// `b` moved onto `a`'s hosts and constraintset, so diff(a, result) is a
/// plan the fabric could run. Variadic indices are re-packed.
inline adme::model::Configuration rehome(const adme::model::Configuration& b, const adme::model::Configuration& a,
                                         const adme::lang::SpecDocument& doc) {
    using namespace adme::model;
    Configuration target = restrict_to(b, a.hosts);
    std::vector<PortLink> links;
    for (const auto& ch : target.channels) links.push_back({ch.src.instance, ch.src.port, ch.dst.instance, ch.dst.port});
    target.channels = materialize(links, target, doc);
    target.constraintset = a.constraintset;
    return target;
}

/// Reference interpreter for plans.
inline adme::model::Configuration replay(adme::model::Configuration c, const adme::ddd::EnactmentPlan& plan) {
    for (const auto& a : plan.actions) {
        if (auto* u = std::get_if<adme::ddd::Unwire>(&a)) {
            auto it = std::find(c.channels.begin(), c.channels.end(), u->channel);
            if (it == c.channels.end()) throw std::logic_error("unwire of absent channel: " + adme::ddd::to_string(a));
            c.channels.erase(it);
        } else if (auto* t = std::get_if<adme::ddd::Terminate>(&a)) {
            std::erase_if(c.instances, [&](const auto& i) { return i.id == t->instance; });
        } else if (auto* i = std::get_if<adme::ddd::Instantiate>(&a)) {
            c.instances.push_back({i->instance, i->code});
        } else if (auto* w = std::get_if<adme::ddd::Wire>(&a)) {
            c.channels.push_back(w->channel);
        }
    }
    adme::model::canonicalize(c);
    return c;
}

}  // namespace fixtures
