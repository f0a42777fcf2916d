#include "adme/model/configuration.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <tuple>

namespace adme::model {

namespace {

bool identifier(std::string_view s) {
    if (s.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    if (!alpha(s.front())) return false;
    return std::all_of(s.begin(), s.end(), [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}

unsigned parse_nat(std::string_view s, std::string_view context) {
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw FormatError("malformed number in '" + std::string(context) + "'");
    return v;
}

}  // namespace

std::string InstanceId::str() const { return type + "@" + host + "#" + std::to_string(ordinal); }

InstanceId InstanceId::parse(std::string_view text) {
    auto at = text.find('@');
    auto hash = text.find('#');
    if (at == std::string_view::npos || hash == std::string_view::npos || hash < at)
        throw FormatError("malformed instance id '" + std::string(text) + "'");
    InstanceId id;
    id.type = std::string(text.substr(0, at));
    id.host = std::string(text.substr(at + 1, hash - at - 1));
    if (!identifier(id.type) || !identifier(id.host))
        throw FormatError("malformed instance id '" + std::string(text) + "'");
    id.ordinal = parse_nat(text.substr(hash + 1), text);
    return id;
}

std::string PortSlot::str() const {
    std::string s = instance.str() + ":" + port;
    if (index) s += "[" + std::to_string(*index) + "]";
    return s;
}

PortSlot PortSlot::parse(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw FormatError("malformed port slot '" + std::string(text) + "'");
    PortSlot slot;
    slot.instance = InstanceId::parse(text.substr(0, colon));
    std::string_view rest = text.substr(colon + 1);
    auto bracket = rest.find('[');
    if (bracket != std::string_view::npos) {
        if (rest.back() != ']') throw FormatError("malformed port slot '" + std::string(text) + "'");
        slot.index = parse_nat(rest.substr(bracket + 1, rest.size() - bracket - 2), text);
        rest = rest.substr(0, bracket);
    }
    if (!identifier(rest)) throw FormatError("malformed port slot '" + std::string(text) + "'");
    slot.port = std::string(rest);
    return slot;
}

bool channel_less(const Channel& a, const Channel& b) {
    auto as = a.src.str(), bs = b.src.str();
    if (as != bs) return as < bs;
    return a.dst.str() < b.dst.str();
}

const Instance* Configuration::find(const InstanceId& id) const {
    for (const auto& i : instances) {
        if (i.id == id) return &i;
    }
    return nullptr;
}

namespace {

auto instance_key(const Configuration& config) {
    std::map<std::string, std::size_t> host_pos;
    for (std::size_t i = 0; i < config.hosts.size(); ++i) host_pos.emplace(config.hosts[i].name, i);
    return [host_pos = std::move(host_pos)](const InstanceId& id) {
        auto it = host_pos.find(id.host);
        std::size_t pos = it == host_pos.end() ? host_pos.size() : it->second;
        return std::make_tuple(pos, id.host, id.type, id.ordinal);
    };
}

}  // namespace

void canonicalize(Configuration& config) {
    auto key = instance_key(config);
    std::stable_sort(config.instances.begin(), config.instances.end(),
                     [&](const Instance& a, const Instance& b) { return key(a.id) < key(b.id); });
    std::stable_sort(config.channels.begin(), config.channels.end(), channel_less);
}

bool is_canonical(const Configuration& config) {
    Configuration copy = config;
    canonicalize(copy);
    return copy == config;
}

std::string Binding::str() const { return type + ":" + host + ":" + std::to_string(count); }

Binding Binding::parse(std::string_view text) {
    auto a = text.find(':');
    auto b = text.rfind(':');
    if (a == std::string_view::npos || a == b)
        throw FormatError("malformed binding '" + std::string(text) + "'");
    Binding out;
    out.type = std::string(text.substr(0, a));
    out.host = std::string(text.substr(a + 1, b - a - 1));
    out.count = parse_nat(text.substr(b + 1), text);
    if (!identifier(out.type) || !identifier(out.host) || out.count == 0)
        throw FormatError("malformed binding '" + std::string(text) + "'");
    return out;
}

std::vector<Binding> bindings_of(const Configuration& config) {
    Configuration sorted = config;
    canonicalize(sorted);
    std::vector<Binding> out;
    for (const auto& inst : sorted.instances) {
        if (!out.empty() && out.back().type == inst.id.type && out.back().host == inst.id.host) {
            ++out.back().count;
        } else {
            out.push_back(Binding{inst.id.type, inst.id.host, 1});
        }
    }
    return out;
}

std::vector<Channel> materialize(const std::vector<PortLink>& links, const Configuration& config,
                                 const lang::SpecDocument& doc) {
    auto key = instance_key(config);
    auto variadic = [&](const InstanceId& id, const std::string& port) {
        const auto* type = doc.find_component(id.type);
        const auto* p = type ? type->find_port(port) : nullptr;
        return p && p->variadic;
    };

    using End = std::pair<InstanceId, std::string>;
    // For every endpoint, the links touching it with the peer endpoint.
    std::map<End, std::vector<std::pair<End, std::size_t>>> touching;
    for (std::size_t i = 0; i < links.size(); ++i) {
        const auto& l = links[i];
        touching[{l.src, l.src_port}].push_back({{l.dst, l.dst_port}, i});
        touching[{l.dst, l.dst_port}].push_back({{l.src, l.src_port}, i});
    }

    std::vector<Channel> out(links.size());
    for (std::size_t i = 0; i < links.size(); ++i) {
        out[i].src = PortSlot{links[i].src, links[i].src_port, std::nullopt};
        out[i].dst = PortSlot{links[i].dst, links[i].dst_port, std::nullopt};
    }
    for (auto& [end, peers] : touching) {
        if (!variadic(end.first, end.second)) continue;
        std::stable_sort(peers.begin(), peers.end(), [&](const auto& a, const auto& b) {
            return std::make_tuple(key(a.first.first), a.first.second) <
                   std::make_tuple(key(b.first.first), b.first.second);
        });
        for (unsigned idx = 0; idx < peers.size(); ++idx) {
            const auto& l = links[peers[idx].second];
            Channel& ch = out[peers[idx].second];
            if (l.src == end.first && l.src_port == end.second) ch.src.index = idx;
            if (l.dst == end.first && l.dst_port == end.second) ch.dst.index = idx;
        }
    }
    std::sort(out.begin(), out.end(), channel_less);
    return out;
}

Configuration restrict_to(const Configuration& config, const std::vector<lang::HostSpec>& hosts) {
    Configuration out;
    out.constraintset = config.constraintset;
    out.hosts = hosts;
    auto keep = [&](const InstanceId& id) {
        return std::any_of(hosts.begin(), hosts.end(), [&](const auto& h) { return h.name == id.host; });
    };
    for (const auto& inst : config.instances) {
        if (keep(inst.id)) out.instances.push_back(inst);
    }
    for (const auto& ch : config.channels) {
        if (keep(ch.src.instance) && keep(ch.dst.instance)) out.channels.push_back(ch);
    }
    canonicalize(out);
    return out;
}

}  // namespace adme::model
