#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mesh/scenario.hpp"
#include "mesh/simnet.hpp"
#include "mesh/telemetry.hpp"

namespace {

constexpr const char* kVersion = "meshsim 1.0.0";
constexpr int kExitScenarioError = 2;

int load(const std::string& path, mesh::Scenario& out) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open scenario file: " << path << "\n";
        return kExitScenarioError;
    }
    std::ostringstream text;
    text << in.rdbuf();
    auto scenario = mesh::parse_scenario(text.str());
    if (!scenario) {
        std::cerr << path << ": " << scenario.error() << "\n";
        return kExitScenarioError;
    }
    out = std::move(*scenario);
    return 0;
}

int cmd_run(const std::string& path, std::optional<uint64_t> seed,
            std::optional<int64_t> duration, std::string log_path,
            std::string metrics_path) {
    mesh::Scenario scenario;
    if (int rc = load(path, scenario)) return rc;
    if (seed) scenario.seed = *seed;
    if (duration) scenario.duration_ms = *duration;

    const std::string stem = std::filesystem::path(path).stem().string();
    if (log_path.empty()) log_path = stem + ".log";
    if (metrics_path.empty()) metrics_path = stem + ".metrics";

    auto world = mesh::build_world(scenario);
    mesh::Metrics metrics = world->run(scenario.duration_ms);

    std::ofstream log_out(log_path);
    mesh::write_log(world->log(), log_out);
    std::ofstream metrics_out(metrics_path);
    metrics_out << mesh::format_metrics(metrics);

    std::cout << mesh::format_metrics(metrics);
    return 0;
}

void print_step(const mesh::World& world, std::size_t from_record) {
    const auto& records = world.log().records();
    for (std::size_t i = from_record; i < records.size(); ++i) {
        if (records[i].kind == mesh::EventKind::Console)
            std::cout << "node " << records[i].node.raw << "| "
                      << records[i].detail << "\n";
    }
}

int cmd_repl(const std::string& path) {
    mesh::Scenario scenario;
    if (int rc = load(path, scenario)) return rc;
    auto world = mesh::build_world(scenario);

    std::cout << "loaded " << path << " (" << scenario.nodes.size()
              << " nodes, seed " << scenario.seed
              << "); commands: step [n], send <id> <line>, "
                 "show <id> send|sended|led, metrics, quit\n";

    std::string line;
    while (std::cout << "> " << std::flush, std::getline(std::cin, line)) {
        std::istringstream in(line);
        std::string cmd;
        in >> cmd;
        if (cmd.empty()) continue;
        if (cmd == "quit" || cmd == "exit") break;

        if (cmd == "step") {
            int n = 1;
            in >> n;
            if (n < 1) n = 1;
            for (int i = 0; i < n; ++i) {
                std::size_t mark = world->log().size();
                world->step();
                print_step(*world, mark);
            }
            std::cout << "t=" << world->clock_ms() << " ms\n";
        } else if (cmd == "send") {
            std::string id;
            in >> id;
            std::string serial;
            std::getline(in, serial);
            if (!serial.empty() && serial.front() == ' ') serial.erase(0, 1);
            auto name =
                mesh::NodeName::parse(std::string(mesh::kNodePrefix) + id);
            mesh::SimNode* sim = name ? world->find(*name) : nullptr;
            if (!sim) {
                std::cout << "unknown node: " << id << "\n";
                continue;
            }
            sim->pending_serial.push_back(serial);
        } else if (cmd == "show") {
            std::string id, what;
            in >> id >> what;
            auto name =
                mesh::NodeName::parse(std::string(mesh::kNodePrefix) + id);
            mesh::SimNode* sim = name ? world->find(*name) : nullptr;
            if (!sim) {
                std::cout << "unknown node: " << id << "\n";
                continue;
            }
            if (what == "send" || what == "sended") {
                const mesh::MessageQueue& q = what == "send"
                                                  ? sim->node->to_send()
                                                  : sim->node->sended();
                for (const std::string& l : q.show_all()) std::cout << l << "\n";
                std::cout << "Total: " << q.size() << "\n";
            } else if (what == "led") {
                const mesh::LedState& led = sim->node->led();
                std::cout << "red=" << (led.red ? "on" : "off")
                          << " yellow=" << (led.yellow ? "on" : "off")
                          << " green=" << (led.green ? "on" : "off") << "\n";
            } else {
                std::cout << "usage: show <id> send|sended|led\n";
            }
        } else if (cmd == "metrics") {
            std::cout << mesh::format_metrics(world->metrics());
        } else {
            std::cout << "unknown command: " << cmd << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flood-mesh protocol simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(0, 1);

    std::string run_path, log_path, metrics_path, repl_path;
    std::optional<uint64_t> seed;
    std::optional<int64_t> duration;

    CLI::App* run = app.add_subcommand("run", "run a scenario to completion");
    run->add_option("scenario", run_path, "scenario file")->required();
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--duration", duration, "override the duration (ms)");
    run->add_option("--log", log_path, "event log output path");
    run->add_option("--metrics", metrics_path, "metrics output path");

    CLI::App* repl =
        app.add_subcommand("repl", "interactive session on a scenario");
    repl->add_option("scenario", repl_path, "scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(run_path, seed, duration, log_path, metrics_path);
        if (repl->parsed()) return cmd_repl(repl_path);
        std::cout << app.help();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
