#include <boost/asio.hpp>
#include <charconv>
#include <functional>
#include <unistd.h>
#include <sstream>

#include "adme/eval/check.hpp"
#include "adme/lang/lang.hpp"
#include "adme/madme/madme.hpp"

namespace adme::madme {

namespace asio = boost::asio;

namespace {

// Splits on lines holding only "%%".
std::vector<std::string> split_parts(const std::string& body) {
    std::vector<std::string> parts(1);
    std::istringstream in(body);
    for (std::string line; std::getline(in, line);) {
        if (line == "%%") {
            parts.emplace_back();
        } else {
            parts.back() += line + "\n";
        }
    }
    return parts;
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; }

unsigned parse_count(const std::string& key, const std::string& value) {
    unsigned n = 0;
    auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
    if (ec != std::errc{} || end != value.data() + value.size())
        throw MalformedPayload("bad " + key + " '" + value + "'");
    return n;
}

}  // namespace

Response Manager::satisfy(const std::string& body) const {
    auto parts = split_parts(body);
    if (parts.size() < 2 || parts.size() > 4)
        throw MalformedPayload("satisfy takes constraints %% resources [%% ddd [%% options]]");
    auto doc = lang::merge(lang::parse(parts[1]), lang::parse(parts[0]));
    lang::validate(doc);

    solver::SolveOptions opts = base_;
    std::string set;
    if (parts.size() == 4) {
        std::istringstream words(parts[3]);
        for (std::string w; words >> w;) {
            auto eq = w.find('=');
            if (eq == std::string::npos) throw MalformedPayload("bad option '" + w + "'");
            std::string key = w.substr(0, eq), value = w.substr(eq + 1);
            if (key == "limit") opts.solution_limit = parse_count(key, value);
            else if (key == "max-per-host") opts.max_instances_per_host = parse_count(key, value);
            else if (key == "set") set = value;
            else throw MalformedPayload("unknown option '" + key + "'");
        }
    }
    if (parts.size() >= 3 && !blank(parts[2]) && parts[2] != "null\n") {
        for (const auto& b : model::bindings_of(ddd::from_xml(parts[2]))) {
            // bindings on hosts the resources no longer declare cannot be kept
            if (doc.find_host(b.host)) opts.pins.push_back(b);
        }
    }
    auto outcome = solver::solve(doc, lang::select_constraintset(doc, set), opts);
    Response r;
    for (std::size_t i = 0; i < outcome.solutions.size(); ++i) {
        if (i) r.body += "%%\n";
        r.body += ddd::to_xml(outcome.solutions[i]);
    }
    return r;
}

Response Manager::enact_request(const std::string& body) {
    auto config = ddd::from_xml(body);
    if (auto v = model::validate(config, state_.doc); !v.empty()) throw ddd::ValidationError(v);
    auto result = eval::check(config, *state_.doc.find_constraintset(state_.cs_name), state_.doc);
    if (!result.satisfied) {
        const auto& v = result.violations.front();
        return {false, "ConstraintError: constraint " + std::to_string(v.constraint) + " violated (" +
                           eval::to_string(v.witness) + ")\n"};
    }
    try {
        fabric_.apply_plan(ddd::diff(fabric_.observed(), config));
    } catch (const fabric::FabricError& e) {
        return {false, std::string("EnactFailed: ") + e.what() + "\n"};
    }
    state_.deployed = config;
    degraded_ = false;
    return {true, ""};
}

Response Manager::handle_request(const std::string& method, const std::string& body) {
    try {
        if (method == "get-resources") return {true, lang::pretty_print(lang::resources_of(state_.doc))};
        if (method == "get-constraints") return {true, lang::pretty_print(lang::constraints_of(state_.doc))};
        if (method == "get-deployment") return {true, ddd::to_xml(state_.deployed)};
        if (method == "satisfy") return satisfy(body);
        if (method == "enact") return enact_request(body);
        return {false, "MalformedPayload: unknown method '" + method + "'\n"};
    } catch (const std::exception& e) {
        return {false, std::string("MalformedPayload: ") + e.what() + "\n"};
    }
}

Response Manager::handle_payload(const std::string& payload) {
    auto nl = payload.find('\n');
    std::string method = payload.substr(0, nl);
    return handle_request(method, nl == std::string::npos ? "" : payload.substr(nl + 1));
}

std::string encode_frame(const std::string& payload) {
    std::uint32_t n = payload.size();
    std::string out{char(n >> 24), char(n >> 16), char(n >> 8), char(n)};
    return out + payload;
}

std::optional<std::string> decode_frame(std::string& buffer) {
    if (buffer.size() < 4) return std::nullopt;
    std::uint32_t n = 0;
    for (int i = 0; i < 4; ++i) n = (n << 8) | static_cast<unsigned char>(buffer[i]);
    if (buffer.size() < 4 + std::size_t(n)) return std::nullopt;
    std::string payload = buffer.substr(4, n);
    buffer.erase(0, 4 + std::size_t(n));
    return payload;
}

std::string encode_response(const Response& r) { return (r.ok ? "ok\n" : "error\n") + r.body; }

Response decode_response(const std::string& payload) {
    auto nl = payload.find('\n');
    std::string status = payload.substr(0, nl);
    if (status != "ok" && status != "error") throw MalformedPayload("bad response status '" + status + "'");
    return {status == "ok", nl == std::string::npos ? "" : payload.substr(nl + 1)};
}

namespace {

bool is_port(const std::string& endpoint) {
    return !endpoint.empty() && endpoint.find_first_not_of("0123456789") == std::string::npos;
}

template <class Socket>
std::optional<std::string> read_frame(Socket& socket) {
    unsigned char header[4];
    boost::system::error_code ec;
    asio::read(socket, asio::buffer(header), ec);
    if (ec) return std::nullopt;
    std::uint32_t n = (std::uint32_t(header[0]) << 24) | (header[1] << 16) | (header[2] << 8) | header[3];
    std::string payload(n, '\0');
    asio::read(socket, asio::buffer(payload), ec);
    if (ec) return std::nullopt;
    return payload;
}

template <class Acceptor>
void accept_loop(asio::io_context& io, Acceptor& acceptor, Manager& manager, const std::atomic<bool>& stop) {
    using Socket = typename Acceptor::protocol_type::socket;
    std::function<void()> arm = [&] {
        acceptor.async_accept([&](boost::system::error_code ec, Socket socket) {
            if (!ec) {
                while (auto payload = read_frame(socket)) {
                    auto reply = encode_frame(encode_response(manager.handle_payload(*payload)));
                    asio::write(socket, asio::buffer(reply), ec);
                    if (ec) break;
                }
            }
            if (!stop) arm();
        });
    };
    arm();
    while (!stop) io.run_for(std::chrono::milliseconds(50));
}

template <class Socket>
Response exchange(Socket& socket, const std::string& method, const std::string& body) {
    asio::write(socket, asio::buffer(encode_frame(method + "\n" + body)));
    auto payload = read_frame(socket);
    if (!payload) throw MalformedPayload("connection closed before a response arrived");
    return decode_response(*payload);
}

}  // namespace

void serve(Manager& manager, const std::string& endpoint, const std::atomic<bool>& stop) {
    asio::io_context io;
    if (is_port(endpoint)) {
        asio::ip::tcp::acceptor acceptor(
            io, asio::ip::tcp::endpoint(asio::ip::address_v4::loopback(), std::stoi(endpoint)));
        accept_loop(io, acceptor, manager, stop);
    } else {
        ::unlink(endpoint.c_str());
        asio::local::stream_protocol::acceptor acceptor(io, asio::local::stream_protocol::endpoint(endpoint));
        accept_loop(io, acceptor, manager, stop);
        ::unlink(endpoint.c_str());
    }
}

Response request(const std::string& endpoint, const std::string& method, const std::string& body) {
    asio::io_context io;
    if (is_port(endpoint)) {
        asio::ip::tcp::socket socket(io);
        socket.connect(asio::ip::tcp::endpoint(asio::ip::address_v4::loopback(), std::stoi(endpoint)));
        return exchange(socket, method, body);
    }
    asio::local::stream_protocol::socket socket(io);
    socket.connect(asio::local::stream_protocol::endpoint(endpoint));
    return exchange(socket, method, body);
}

}  // namespace adme::madme
