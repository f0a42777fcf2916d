#include "adme/cli/cli.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "adme/ddd/ddd.hpp"
#include "adme/eval/check.hpp"
#include "adme/fabric/fabric.hpp"
#include "adme/lang/lang.hpp"
#include "adme/madme/madme.hpp"
#include "adme/solver/solver.hpp"

namespace adme::cli {

namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

struct Goal {
    lang::SpecDocument doc;
    std::string cs;
};

// Resources and constraints may share one file.
Goal load_goal(const std::string& resources, const std::string& constraints, const std::string& set) {
    lang::SpecDocument doc = lang::parse(slurp(resources));
    if (fs::weakly_canonical(resources) != fs::weakly_canonical(constraints))
        doc = lang::merge(std::move(doc), lang::parse(slurp(constraints)));
    lang::validate(doc);
    std::string cs = lang::select_constraintset(doc, set);
    return {std::move(doc), std::move(cs)};
}

std::atomic<bool> g_stop = false;

extern "C" void on_signal(int) { g_stop = true; }

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"constraint-based deployment and autonomic management"};
    app.require_subcommand(1);

    std::string path, resources, constraints, set, pins_path, dir, ddd_path, old_path, new_path;
    std::string scenario_path, trace_path, initial_path, socket;
    std::size_t limit = 1;
    unsigned per_host = 1;
    std::uint64_t seed = 0;

    auto* parse = app.add_subcommand("parse", "parse a Deladas document and summarize it");
    parse->add_option("file", path)->required();

    auto goal_flags = [&](CLI::App* sub) {
        sub->add_option("-r,--resources", resources, "resources document")->required();
        sub->add_option("-c,--constraints", constraints, "constraints document")->required();
        sub->add_option("--set", set, "constraintset name");
    };

    auto* satisfy = app.add_subcommand("satisfy", "solve for configurations and write them as DDDs");
    goal_flags(satisfy);
    satisfy->add_option("--limit", limit)->check(CLI::PositiveNumber);
    satisfy->add_option("--max-per-host", per_host)->check(CLI::PositiveNumber);
    satisfy->add_option("--pins", pins_path, "DDD whose bindings must be kept");
    satisfy->add_option("-o,--out", dir)->required();

    auto* check = app.add_subcommand("check", "evaluate a DDD against the constraints");
    check->add_option("-d,--ddd", ddd_path)->required();
    goal_flags(check);

    auto* diff = app.add_subcommand("diff", "print the enactment plan between two DDDs");
    diff->add_option("old", old_path)->required();
    diff->add_option("new", new_path)->required();

    auto* run = app.add_subcommand("run", "deploy, then drive a failure scenario through the manager");
    goal_flags(run);
    run->add_option("--scenario", scenario_path)->required();
    run->add_option("--trace", trace_path)->required();
    run->add_option("--seed", seed);
    run->add_option("--initial", initial_path, "DDD to deploy instead of the first solution");
    run->add_option("--max-per-host", per_host)->check(CLI::PositiveNumber);

    auto* serve = app.add_subcommand("serve", "answer framed requests on a socket");
    goal_flags(serve);
    serve->add_option("--socket", socket, "unix socket path or TCP port")->required();
    serve->add_option("--max-per-host", per_host)->check(CLI::PositiveNumber);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*parse) {
            auto doc = lang::parse(slurp(path));
            lang::validate(doc);
            out << "components " << doc.components.size() << ", hosts " << doc.hosts.size()
                << ", constraintsets " << doc.constraintsets.size() << "\n";
            for (const auto& c : doc.components) out << "component " << c.name << " ports " << c.ports.size() << "\n";
            for (const auto& cs : doc.constraintsets)
                out << "constraintset " << cs.name << " constraints " << cs.set.constraints.size() << "\n";
            return 0;
        }

        if (*satisfy) {
            auto goal = load_goal(resources, constraints, set);
            solver::SolveOptions opts;
            opts.solution_limit = limit;
            opts.max_instances_per_host = per_host;
            if (!pins_path.empty()) opts.pins = model::bindings_of(ddd::from_xml(slurp(pins_path)));
            auto outcome = solver::solve(goal.doc, goal.cs, opts);
            fs::create_directories(dir);
            for (std::size_t i = 0; i < outcome.solutions.size(); ++i)
                spit(fs::path(dir) / ("solution-" + std::to_string(i) + ".xml"), ddd::to_xml(outcome.solutions[i]));
            out << outcome.solutions.size() << " solution(s)\n";
            return outcome.solutions.empty() ? 2 : 0;
        }

        if (*check) {
            auto goal = load_goal(resources, constraints, set);
            auto config = ddd::from_xml(slurp(ddd_path));
            if (auto v = model::validate(config, goal.doc); !v.empty()) {
                for (const auto& x : v) err << "invalid: " << model::to_string(x) << "\n";
                return 1;
            }
            auto result = eval::check(config, *goal.doc.find_constraintset(goal.cs), goal.doc);
            for (const auto& v : result.violations)
                out << "constraint " << v.constraint << " violated: " << eval::to_string(v.witness) << "\n";
            if (result.satisfied) out << "satisfied\n";
            return result.satisfied ? 0 : 2;
        }

        if (*diff) {
            auto plan = ddd::diff(ddd::from_xml(slurp(old_path)), ddd::from_xml(slurp(new_path)));
            for (const auto& a : plan.actions) out << ddd::to_string(a) << "\n";
            return 0;
        }

        if (*run) {
            auto goal = load_goal(resources, constraints, set);
            auto events = fabric::parse_scenario(slurp(scenario_path), fs::path(scenario_path).parent_path());
            solver::SolveOptions opts;
            opts.max_instances_per_host = per_host;
            madme::Manager manager(goal.doc, goal.cs, fabric::Fabric::boot(goal.doc.hosts, seed), opts);
            if (initial_path.empty()) manager.deploy();
            else manager.deploy(ddd::from_xml(slurp(initial_path)));
            for (auto& e : events) manager.fabric().inject(std::move(e));
            manager.run();
            bool ok = manager.goal_met();
            manager.fabric().log(ok ? "final goal-met" : "final constraint-error");
            spit(trace_path, manager.fabric().trace_text());
            out << (ok ? "goal met" : "constraint error") << " after tick " << manager.fabric().clock() << "\n";
            return ok ? 0 : 3;
        }

        if (*serve) {
            auto goal = load_goal(resources, constraints, set);
            solver::SolveOptions opts;
            opts.max_instances_per_host = per_host;
            madme::Manager manager(goal.doc, goal.cs, fabric::Fabric::boot(goal.doc.hosts, seed), opts);
            g_stop = false;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            out << "serving on " << socket << std::endl;
            madme::serve(manager, socket, g_stop);
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace adme::cli
