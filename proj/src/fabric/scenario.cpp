#include <sstream>

#include "adme/fabric/fabric.hpp"

namespace adme::fabric {

namespace {

std::pair<std::string, std::string> key_value(const std::string& word, int line) {
    auto eq = word.find('=');
    if (eq == std::string::npos || eq == 0) throw ScenarioError(line, "expected key=value, found '" + word + "'");
    return {word.substr(0, eq), word.substr(eq + 1)};
}

}  // namespace

std::vector<FabricEvent> parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
    std::vector<FabricEvent> out;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        // '#' also appears inside instance ids, so only a word starting with it opens a comment
        std::istringstream words(raw);
        std::vector<std::string> w;
        for (std::string s; words >> s && s[0] != '#';) w.push_back(s);
        if (w.empty()) continue;
        if (w[0] != "at" || w.size() < 3) throw ScenarioError(line, "expected 'at <tick> <event> ...'");
        FabricEvent ev;
        try {
            std::size_t used = 0;
            ev.at = std::stoull(w[1], &used);
            if (used != w[1].size() || w[1][0] == '-') throw std::invalid_argument("tick");
        } catch (const std::exception&) {
            throw ScenarioError(line, "bad tick '" + w[1] + "'");
        }
        const std::string& kind = w[2];
        if (kind == "crash-process") {
            if (w.size() != 4) throw ScenarioError(line, "crash-process takes one instance id");
            try {
                ev.body = CrashProcess{model::InstanceId::parse(w[3])};
            } catch (const model::FormatError& e) {
                throw ScenarioError(line, e.what());
            }
        } else if (kind == "crash-host") {
            if (w.size() != 4) throw ScenarioError(line, "crash-host takes one host name");
            ev.body = CrashHost{w[3]};
        } else if (kind == "add-host") {
            if (w.size() < 5) throw ScenarioError(line, "add-host needs a name and ipaddress=<value>");
            lang::HostSpec spec;
            spec.name = w[3];
            for (std::size_t i = 4; i < w.size(); ++i) spec.attributes.push_back(key_value(w[i], line));
            if (spec.attributes.front().first != "ipaddress" || spec.attributes.front().second.empty())
                throw ScenarioError(line, "add-host needs ipaddress=<value> first");
            ev.body = AddHost{spec};
        } else if (kind == "revise") {
            Revise r;
            for (std::size_t i = 3; i < w.size(); ++i) {
                auto [k, v] = key_value(w[i], line);
                std::filesystem::path p = v;
                if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
                if (k == "constraints") r.constraints_path = p.string();
                else if (k == "resources") r.resources_path = p.string();
                else throw ScenarioError(line, "unknown revise key '" + k + "'");
            }
            if (r.constraints_path.empty() || r.resources_path.empty())
                throw ScenarioError(line, "revise needs constraints=<path> and resources=<path>");
            ev.body = r;
        } else {
            throw ScenarioError(line, "unknown event '" + kind + "'");
        }
        out.push_back(std::move(ev));
    }
    return out;
}

}  // namespace adme::fabric
