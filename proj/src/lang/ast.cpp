#include "adme/lang/ast.hpp"

#include "adme/lang/lang.hpp"

namespace adme::lang {

const Port* ComponentType::find_port(std::string_view port) const {
    for (const auto& p : ports) {
        if (p.name == port) return &p;
    }
    return nullptr;
}

const std::string* HostSpec::attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
        if (k == key) return &v;
    }
    return nullptr;
}

std::string HostSpec::ipaddress() const {
    const std::string* ip = attribute("ipaddress");
    return ip ? *ip : std::string{};
}

const char* to_string(CompareOp op) {
    switch (op) {
        case CompareOp::Eq: return "=";
        case CompareOp::Ne: return "!=";
        case CompareOp::Le: return "<=";
        case CompareOp::Ge: return ">=";
        case CompareOp::Lt: return "<";
        case CompareOp::Gt: return ">";
    }
    return "?";
}

const ComponentType* SpecDocument::find_component(std::string_view name) const {
    for (const auto& c : components) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

const HostSpec* SpecDocument::find_host(std::string_view name) const {
    for (const auto& h : hosts) {
        if (h.name == name) return &h;
    }
    return nullptr;
}

const ConstraintSet* SpecDocument::find_constraintset(std::string_view name) const {
    for (const auto& cs : constraintsets) {
        if (cs.name == name) return &cs.set;
    }
    return nullptr;
}

std::optional<std::size_t> SpecDocument::host_index(std::string_view name) const {
    for (std::size_t i = 0; i < hosts.size(); ++i) {
        if (hosts[i].name == name) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> SpecDocument::component_index(std::string_view name) const {
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (components[i].name == name) return i;
    }
    return std::nullopt;
}

SpecDocument merge(SpecDocument resources, const SpecDocument& constraints) {
    for (const auto& c : constraints.components) resources.components.push_back(c);
    for (const auto& h : constraints.hosts) resources.hosts.push_back(h);
    for (const auto& cs : constraints.constraintsets) resources.constraintsets.push_back(cs);
    return resources;
}

std::string select_constraintset(const SpecDocument& doc, std::string_view requested) {
    if (!requested.empty()) {
        if (!doc.find_constraintset(requested))
            throw ValidationError("unknown constraintset '" + std::string(requested) + "'");
        return std::string(requested);
    }
    if (doc.constraintsets.empty()) throw ValidationError("no constraintset declared");
    if (doc.constraintsets.size() > 1)
        throw ValidationError("several constraintsets declared; select one by name");
    return doc.constraintsets.front().name;
}

SpecDocument resources_of(const SpecDocument& doc) {
    SpecDocument out;
    out.components = doc.components;
    out.hosts = doc.hosts;
    return out;
}

SpecDocument constraints_of(const SpecDocument& doc) {
    SpecDocument out;
    out.constraintsets = doc.constraintsets;
    return out;
}

}  // namespace adme::lang
