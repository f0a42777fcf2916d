#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <set>
#include <sstream>

#include "adme/ddd/ddd.hpp"

namespace adme::ddd {

namespace pt = boost::property_tree;

XmlError::XmlError(unsigned long line, const std::string& message)
    : std::runtime_error("malformed XML at line " + std::to_string(line) + ": " + message), line_(line) {}

ValidationError::ValidationError(const std::vector<model::Violation>& violations)
    : std::runtime_error("invalid deployment: " + (violations.empty() ? std::string("?") : model::to_string(violations[0]))),
      violations_(violations) {}

namespace {

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

void attr(std::string& out, std::string_view name, std::string_view value) {
    out += ' ';
    out += name;
    out += "=\"";
    out += escape(value);
    out += '"';
}

}  // namespace

std::string to_xml(const model::Configuration& input) {
    model::Configuration config = input;
    model::canonicalize(config);
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<deployment";
    if (!config.constraintset.empty()) attr(out, "constraintset", config.constraintset);
    out += ">\n";

    auto section = [&](const char* name, bool empty, auto&& body) {
        if (empty) {
            out += std::string("  <") + name + "/>\n";
            return;
        }
        out += std::string("  <") + name + ">\n";
        body();
        out += std::string("  </") + name + ">\n";
    };
    section("hosts", config.hosts.empty(), [&] {
        for (const auto& h : config.hosts) {
            out += "    <host";
            attr(out, "id", h.name);
            attr(out, "ipaddress", h.ipaddress());
            for (const auto& [k, v] : h.attributes) {
                if (k != "ipaddress") attr(out, k, v);
            }
            out += "/>\n";
        }
    });
    section("instances", config.instances.empty(), [&] {
        for (const auto& i : config.instances) {
            out += "    <instance";
            attr(out, "id", i.id.str());
            attr(out, "type", i.id.type);
            attr(out, "host", i.id.host);
            attr(out, "code", i.code);
            out += "/>\n";
        }
    });
    section("channels", config.channels.empty(), [&] {
        for (const auto& c : config.channels) {
            out += "    <channel";
            attr(out, "from", c.src.str());
            attr(out, "to", c.dst.str());
            out += "/>\n";
        }
    });
    out += "</deployment>\n";
    return out;
}

namespace {

using Attrs = std::vector<std::pair<std::string, std::string>>;

// Attributes of `node` in document order; rejects child elements and text.
Attrs attributes_of(const pt::ptree& node, const std::string& where) {
    Attrs out;
    for (const auto& [key, child] : node) {
        if (key == "<xmlattr>") {
            for (const auto& [k, v] : child) out.emplace_back(k, v.data());
        } else if (key != "<xmlcomment>") {
            throw SchemaError("unexpected element <" + key + "> inside " + where);
        }
    }
    std::string text = node.data();
    if (text.find_first_not_of(" \t\r\n") != std::string::npos)
        throw SchemaError("unexpected text inside " + where);
    return out;
}

std::string take(Attrs& attrs, const std::string& name, const std::string& where) {
    for (auto it = attrs.begin(); it != attrs.end(); ++it) {
        if (it->first == name) {
            std::string v = it->second;
            attrs.erase(it);
            return v;
        }
    }
    throw SchemaError(where + " lacks attribute '" + name + "'");
}

void no_more(const Attrs& attrs, const std::string& where) {
    if (!attrs.empty()) throw SchemaError("unknown attribute '" + attrs.front().first + "' on " + where);
}

template <typename F>
void each_child(const pt::ptree& section, const std::string& section_name, const std::string& element, F&& f) {
    for (const auto& [key, child] : section) {
        if (key == "<xmlattr>") throw SchemaError("<" + section_name + "> takes no attributes");
        if (key == "<xmlcomment>") continue;
        if (key != element) throw SchemaError("unexpected element <" + key + "> inside <" + section_name + ">");
        f(child);
    }
}

}  // namespace

model::Configuration from_xml(std::string_view xml) {
    pt::ptree tree;
    std::istringstream in{std::string(xml)};
    try {
        pt::read_xml(in, tree);
    } catch (const pt::xml_parser_error& e) {
        throw XmlError(e.line(), e.message());
    }

    const pt::ptree* root = nullptr;
    for (const auto& [key, child] : tree) {
        if (key == "<xmlcomment>") continue;
        if (key != "deployment" || root) throw SchemaError("document element must be a single <deployment>");
        root = &child;
    }
    if (!root) throw XmlError(1, "no document element");

    model::Configuration config;
    std::set<std::string> seen;
    for (const auto& [key, child] : *root) {
        if (key == "<xmlcomment>") continue;
        if (key == "<xmlattr>") {
            for (const auto& [k, v] : child) {
                if (k != "constraintset") throw SchemaError("unknown attribute '" + k + "' on <deployment>");
                config.constraintset = v.data();
            }
            continue;
        }
        if (!seen.insert(key).second) throw SchemaError("<" + key + "> appears twice");
        if (key == "hosts") {
            each_child(child, key, "host", [&](const pt::ptree& node) {
                Attrs a = attributes_of(node, "<host>");
                lang::HostSpec h;
                h.name = take(a, "id", "<host>");
                h.attributes.emplace_back("ipaddress", take(a, "ipaddress", "<host>"));
                for (auto& kv : a) h.attributes.push_back(kv);
                config.hosts.push_back(std::move(h));
            });
        } else if (key == "instances") {
            each_child(child, key, "instance", [&](const pt::ptree& node) {
                Attrs a = attributes_of(node, "<instance>");
                std::string id = take(a, "id", "<instance>");
                std::string type = take(a, "type", "<instance>");
                std::string host = take(a, "host", "<instance>");
                std::string code = take(a, "code", "<instance>");
                no_more(a, "<instance>");
                model::InstanceId parsed;
                try {
                    parsed = model::InstanceId::parse(id);
                } catch (const model::FormatError& e) {
                    throw SchemaError(e.what());
                }
                if (parsed.type != type || parsed.host != host)
                    throw SchemaError("instance " + id + " disagrees with its type/host attributes");
                config.instances.push_back({parsed, code});
            });
        } else if (key == "channels") {
            each_child(child, key, "channel", [&](const pt::ptree& node) {
                Attrs a = attributes_of(node, "<channel>");
                std::string from = take(a, "from", "<channel>");
                std::string to = take(a, "to", "<channel>");
                no_more(a, "<channel>");
                try {
                    config.channels.push_back({model::PortSlot::parse(from), model::PortSlot::parse(to)});
                } catch (const model::FormatError& e) {
                    throw SchemaError(e.what());
                }
            });
        } else {
            throw SchemaError("unexpected element <" + key + "> inside <deployment>");
        }
    }
    if (root->data().find_first_not_of(" \t\r\n") != std::string::npos)
        throw SchemaError("unexpected text inside <deployment>");

    auto violations = model::validate(config);
    if (!violations.empty()) throw ValidationError(violations);
    model::canonicalize(config);
    return config;
}

}  // namespace adme::ddd
