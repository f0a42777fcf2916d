// One line per acceptance criterion: PASS/FAIL, id, wall time against its budget.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "adme/cli/cli.hpp"
#include "adme/ddd/ddd.hpp"
#include "adme/eval/check.hpp"
#include "adme/fabric/fabric.hpp"
#include "adme/lang/lang.hpp"
#include "adme/madme/madme.hpp"
#include "adme/solver/solver.hpp"
#include "fixtures.hpp"
#include "random_docs.hpp"

using namespace adme;
namespace fs = std::filesystem;

namespace {

struct Failed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
    if (!cond) throw Failed(what);
}

std::string data(const std::string& name) { return std::string(ADME_DATA_DIR) + "/" + name; }

bool satisfied(const model::Configuration& c, const lang::SpecDocument& doc, const std::string& cs) {
    return model::validate(c, doc).empty() && eval::check(c, *doc.find_constraintset(cs), doc).satisfied;
}

std::string fingerprint(const model::Configuration& c) {
    std::string out;
    for (const auto& i : c.instances) out += i.id.str() + ";";
    out += "|";
    for (const auto& ch : c.channels) out += ch.src.str() + ">" + ch.dst.str() + ";";
    return out;
}

int cli_run(std::vector<std::string> args) {
    std::ostringstream out, err;
    return cli::main(args, out, err);
}

fs::path scratch() {
    static fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("adme_acceptance_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

// run --initial baseline.xml on a stock scenario; returns (exit code, trace).
std::pair<int, std::string> run_scenario(const std::string& scenario, const std::string& trace_name,
                                         bool from_baseline = true) {
    auto trace = (scratch() / trace_name).string();
    std::vector<std::string> args = {"run", "-r", data("resources.deladas"), "-c", data("randc.deladas"),
                                     "--scenario", data("scenarios/" + scenario), "--trace", trace};
    if (from_baseline) {
        args.push_back("--initial");
        args.push_back(data("baseline.xml"));
    }
    int code = cli_run(args);
    return {code, fs::exists(trace) ? fixtures::read_file(trace) : ""};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

// ---- criteria

void sample_fidelity() {
    auto resources = lang::parse(fixtures::data("resources.deladas"));
    auto constraints = lang::parse(fixtures::data("randc.deladas"));
    require(constraints.constraintsets.size() == 1 && constraints.constraintsets[0].name == "randc",
            "one constraintset named randc");
    const auto& cs = constraints.constraintsets[0].set.constraints;
    require(cs.size() == 5, "5 constraints, got " + std::to_string(cs.size()));
    require(resources.components.size() == 2, "2 component types");
    const auto* client = resources.find_component("Client");
    const auto* router = resources.find_component("Router");
    require(client && client->ports.size() == 2, "Client has 2 ports");
    for (const auto& p : client->ports) require(!p.variadic, "Client ports are not variadic");
    require(router && router->ports.size() == 4, "Router has 4 ports");
    for (const auto& p : router->ports) require(p.variadic, "Router ports are variadic");
    require(resources.hosts.size() == 6, "6 hosts");
    for (std::size_t i = 0; i < 6; ++i) {
        const auto& h = resources.hosts[i];
        require(h.name == "h" + std::to_string(i + 1), "host order");
        require(h.attributes.front() == std::pair<std::string, std::string>{"ipaddress", "192.168.0." + std::to_string(i + 1)},
                "address of " + h.name);
    }
}

void baseline_reproduction() {
    auto doc = fixtures::sample_doc();
    require(satisfied(fixtures::baseline(doc), doc, "randc"), "baseline passes check");
    solver::SolveOptions opts;
    opts.pins = {{"Router", "h3", 1}, {"Router", "h4", 1}};
    auto out = solver::solve(doc, "randc", opts);
    require(out.solutions.size() == 1, "solve returns a solution");
    const auto& s = out.solutions[0];
    require(satisfied(s, doc, "randc"), "solution passes check");
    std::vector<model::Binding> routers;
    for (const auto& b : model::bindings_of(s)) {
        if (b.type == "Router") routers.push_back(b);
    }
    require(routers == opts.pins, "routers exactly on h3 and h4");
}

void solver_soundness_completeness() {
    auto doc = fixtures::sample_doc();
    doc.hosts.resize(3);
    solver::SolveOptions all;
    all.solution_limit = solver::kUnlimited;
    auto oracle = solver::enumerate_all(doc, "randc", all);
    auto fast = solver::solve(doc, "randc", all);
    std::set<std::string> a, b;
    for (const auto& c : oracle.solutions) a.insert(fingerprint(c));
    for (const auto& c : fast.solutions) b.insert(fingerprint(c));
    require(fast.exhausted && a == b && fast.solutions.size() == oracle.solutions.size(),
            "3-host solution sets differ");
    require(!a.empty(), "3-host instance has solutions");

    std::mt19937 rng(7);
    for (int i = 0; i < 1000; ++i) {
        auto spec = fixtures::random_spec(rng);
        auto d = lang::parse(spec.text);
        solver::SolveOptions opts;
        opts.max_instances_per_host = fixtures::pick(rng, 1, 2);
        opts.solution_limit = 4;
        opts.node_budget = 200000;
        for (const auto& c : solver::solve(d, "s", opts).solutions)
            require(satisfied(c, d, "s"), "unsound solution on sample " + std::to_string(i));
    }
}

void host_failure_scenario() {
    auto doc = fixtures::sample_doc();
    auto baseline = fixtures::baseline(doc);
    auto [code, trace] = run_scenario("host-crash.scn", "host.trace");
    require(code == 0, "run exits 0, got " + std::to_string(code));
    require(trace.find("\n23 host-failure-suspected h3\n") != std::string::npos, "suspicion at tick 23");

    madme::Manager m(doc, "randc", fabric::Fabric::boot(doc.hosts, 0));
    m.deploy(baseline);
    m.fabric().inject({20, fabric::CrashHost{"h3"}});
    m.run();
    require(m.goal_met(), "final state constraint-valid");
    require(m.state().history.size() == 1, "one decision");

    // surviving bindings that the evolved deployment no longer has
    auto now = model::bindings_of(m.state().deployed);
    std::vector<model::Binding> changed;
    std::vector<model::Binding> surviving;
    for (const auto& b : model::bindings_of(baseline)) {
        if (b.host == "h3") continue;
        surviving.push_back(b);
        if (std::find(now.begin(), now.end(), b) == now.end()) changed.push_back(b);
    }
    require(changed.size() == 1, "exactly one surviving binding changed");

    // oracle: no solution keeps all, and the first single removal in canonical order works
    auto small = fixtures::without_host(doc, "h3");
    solver::SolveOptions probe;
    probe.pins = surviving;
    require(solver::enumerate_all(small, "randc", probe).solutions.empty(), "oracle: k=0 infeasible");
    auto sorted = solver::sort_pins(small, surviving);
    std::optional<model::Binding> first;
    for (std::size_t i = 0; i < sorted.size() && !first; ++i) {
        probe.pins = sorted;
        probe.pins.erase(probe.pins.begin() + i);
        if (!solver::enumerate_all(small, "randc", probe).solutions.empty()) first = sorted[i];
    }
    require(first && *first == changed[0], "oracle picks the same pin");
    require(trace.find("23 decision resolve removed=" + first->str() + "\n") != std::string::npos,
            "trace records the resolve");
}

void process_failure_scenario() {
    auto doc = fixtures::sample_doc();
    auto [code, trace] = run_scenario("process-crash.scn", "process.trace");
    require(code == 0, "run exits 0");
    require(trace.find("\n10 decision restart-in-place Router@h3#0\n") != std::string::npos, "restart in trace");

    madme::Manager m(doc, "randc", fabric::Fabric::boot(doc.hosts, 0));
    m.deploy(fixtures::baseline(doc));
    m.fabric().inject({10, fabric::CrashProcess{fixtures::id("Router@h3#0")}});
    auto decisions = m.react(m.fabric().step());
    require(decisions.size() == 1 && std::holds_alternative<madme::RestartInPlace>(decisions[0]),
            "RestartInPlace decision");
    const auto& plan = std::get<madme::RestartInPlace>(decisions[0]).plan;
    for (const auto& a : plan.actions) {
        if (auto* w = std::get_if<ddd::Wire>(&a)) {
            require(w->channel.src.instance.host == "h3" || w->channel.dst.instance.host == "h3",
                    "wire off h3: " + ddd::to_string(a));
        } else if (auto* i = std::get_if<ddd::Instantiate>(&a)) {
            require(i->instance.host == "h3", "instantiate off h3");
        } else if (auto* in = std::get_if<ddd::Install>(&a)) {
            require(in->host == "h3", "install off h3");
        } else {
            require(false, "unexpected action " + ddd::to_string(a));
        }
    }
    const auto& machine = m.fabric().host("h3")->machines.at(fixtures::id("Router@h3#0"));
    require(machine.alive && machine.channels.size() == 6, "6 channel endpoints restored");
    auto live = m.fabric().observed();
    live.hosts = doc.hosts;
    require(m.goal_met() && satisfied(live, doc, "randc"), "final state passes check");
}

void constraint_error_path() {
    auto [code, trace] = run_scenario("too-few-hosts.scn", "error.trace");
    require(code == 3, "exit code 3, got " + std::to_string(code));
    auto ls = lines(trace);
    auto at = std::find_if(ls.begin(), ls.end(), [](const std::string& l) {
        return l.find(" decision constraint-error ") != std::string::npos;
    });
    require(at != ls.end(), "constraint-error trace line");
    static const std::set<std::string> actions = {"unwire", "terminate", "install", "instantiate", "wire"};
    for (auto it = at + 1; it != ls.end(); ++it) {
        std::istringstream words(*it);
        std::string tick, kind;
        words >> tick >> kind;
        require(!actions.contains(kind), "fabric action after the failed resolve: " + *it);
    }
}

void round_trips() {
    std::mt19937 rng(2024);
    for (int i = 0; i < 500; ++i) {
        auto doc = lang::parse(fixtures::random_document(rng));
        require(lang::parse(lang::pretty_print(doc)) == doc, "Deladas round trip " + std::to_string(i));
    }
    auto doc = fixtures::sample_doc();
    std::mt19937 rc(17);
    for (int i = 0; i < 500; ++i) {
        auto c = fixtures::random_valid_config(rc, doc);
        require(ddd::from_xml(ddd::to_xml(c)) == c, "DDD round trip " + std::to_string(i));
    }
    std::mt19937 rp(19);
    for (int i = 0; i < 500; ++i) {
        auto a = fixtures::random_valid_config(rp, doc);
        auto target = fixtures::rehome(fixtures::random_valid_config(rp, doc), a, doc);
        require(fixtures::replay(a, ddd::diff(a, target)) == target, "plan replay " + std::to_string(i));
    }
}

void determinism() {
    for (const auto* s : {"process-crash.scn", "host-crash.scn", "too-few-hosts.scn"}) {
        auto first = run_scenario(s, "a.trace");
        auto second = run_scenario(s, "b.trace");
        require(!first.second.empty() && first == second, std::string("trace differs for ") + s);
        auto fresh1 = run_scenario(s, "c.trace", false);
        auto fresh2 = run_scenario(s, "d.trace", false);
        require(!fresh1.second.empty() && fresh1 == fresh2, std::string("solved-start trace differs for ") + s);
    }
    std::vector<std::string> outputs;
    for (const char* dir : {"sol-a", "sol-b"}) {
        auto out = (scratch() / dir).string();
        require(cli_run({"satisfy", "-r", data("resources.deladas"), "-c", data("randc.deladas"), "--limit", "3",
                         "-o", out}) == 0,
                "satisfy succeeds");
        std::string all;
        for (int i = 0; i < 3; ++i) all += fixtures::read_file(out + "/solution-" + std::to_string(i) + ".xml");
        outputs.push_back(all);
    }
    require(outputs[0] == outputs[1], "solution files differ");
}

void reachability_oracle() {
    auto doc = fixtures::sample_doc();
    std::mt19937 rng(5);
    for (int g = 0; g < 250; ++g) {
        int n = std::uniform_int_distribution<int>(1, 8)(rng);
        std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
        model::Configuration c;
        c.hosts = {doc.hosts[0]};
        for (int i = 0; i < n; ++i) c.instances.push_back({{"Router", "h1", unsigned(i)}, "r"});
        std::vector<model::PortLink> links;
        for (int u = 0; u < n; ++u) {
            m[u][u] = true;
            for (int v = 0; v < n; ++v) {
                if (u != v && std::bernoulli_distribution(0.2)(rng)) {
                    m[u][v] = true;
                    links.push_back({{"Router", "h1", unsigned(u)}, "rout", {"Router", "h1", unsigned(v)}, "rin"});
                }
            }
        }
        c.channels = model::materialize(links, c, doc);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (m[i][k] && m[k][j]) m[i][j] = true;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                require(eval::reachable(c, {"Router", "h1", unsigned(i)}, {"Router", "h1", unsigned(j)}) == m[i][j],
                        "reachable disagrees on graph " + std::to_string(g));
    }
}

void five_method_protocol() {
    auto doc = fixtures::sample_doc();
    madme::Manager m(doc, "randc", fabric::Fabric::boot(doc.hosts, 0));
    auto path = (scratch() / "madme.sock").string();
    std::atomic<bool> stop = false;
    std::thread server([&] { madme::serve(m, path, stop); });
    struct Join {
        std::atomic<bool>& stop;
        std::thread& t;
        ~Join() {
            stop = true;
            t.join();
        }
    } join{stop, server};
    for (int i = 0; i < 300 && !fs::exists(path); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));

    auto sat = madme::request(path, "satisfy",
                              fixtures::data("randc.deladas") + "%%\n" + fixtures::data("resources.deladas") + "%%\nnull\n");
    require(sat.ok && !sat.body.empty(), "satisfy returns at least one DDD");
    std::string first = sat.body.substr(0, sat.body.find("%%\n"));
    require(satisfied(ddd::from_xml(first), doc, "randc"), "returned DDD passes check");

    auto before = m.state();
    for (const auto* method : {"get-resources", "get-constraints", "get-deployment"})
        require(madme::request(path, method, "").ok, std::string(method) + " answers");
    require(madme::request(path, "enact", first).ok, "enact accepted");
    auto state = m.state();
    auto got = madme::request(path, "get-deployment", "");
    require(got.ok && got.body == first, "get-deployment returns the enacted DDD byte for byte");
    auto res = madme::request(path, "get-resources", "");
    auto con = madme::request(path, "get-constraints", "");
    require(lang::parse(res.body) == lang::resources_of(doc) && lang::parse(con.body) == lang::constraints_of(doc),
            "selectors return the goal");
    require(m.state() == state && !(before == state), "selectors keep state, enact changes it");
}

struct Criterion {
    int id;
    const char* name;
    double budget_ms;
    std::function<void()> body;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "sample document fidelity", 1000, sample_fidelity},
        {2, "baseline deployment", 5000, baseline_reproduction},
        {3, "solver soundness and bounded completeness", 60000, solver_soundness_completeness},
        {4, "host-failure scenario", 10000, host_failure_scenario},
        {5, "process-failure scenario", 5000, process_failure_scenario},
        {6, "constraint-error path", 10000, constraint_error_path},
        {7, "round trips", 60000, round_trips},
        {8, "determinism", 60000, determinism},
        {9, "reachability oracle", 5000, reachability_oracle},
        {10, "five-method protocol", 5000, five_method_protocol},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string why;
        try {
            c.body();
        } catch (const std::exception& e) {
            why = e.what();
        }
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        if (why.empty() && ms > c.budget_ms) why = "over budget";
        std::cout << (why.empty() ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " (" << long(ms) << " ms / "
                  << long(c.budget_ms) << " ms)";
        if (!why.empty()) std::cout << ": " << why;
        std::cout << "\n";
        failed += !why.empty();
    }
    fs::remove_all(scratch());
    return failed ? 1 : 0;
}
