// SPDX-License-Identifier: Apache-2.0
#include "intentops/cli/cli.hpp"

#include "intentops/fleet/cmapss.hpp"
#include "intentops/maintenance/maintenance_tools.hpp"
#include "intentops/service/http_server.hpp"
#include "intentops/service/orchestrator.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <set>
#include <thread>

#include <pthread.h>
#include <unistd.h>

namespace intentops::cli {

namespace {

struct GlobalOptions
{
    std::string config;
    std::string data;
    std::string fixture;
    std::string backend;
    bool auto_confirm = false;
};

service::ServiceConfig resolve_config(const GlobalOptions& options)
{
    service::ServiceConfig config;
    if (!options.config.empty())
        config = service::load_config(options.config);
    if (!options.data.empty())
        config.data_path = options.data;
    if (!options.fixture.empty())
        config.fixture_path = options.fixture;
    if (!options.backend.empty())
        config.backend = *service::parse_backend(options.backend);
    if (options.auto_confirm)
        config.auto_confirm_critical = true;
    config.validate();
    return config;
}

int plan_command(const service::ServiceConfig& config, const std::string& format, std::ostream& out,
                 std::ostream& err)
{
    const auto store = service::load_configured_fleet(config);
    const auto selection = maintenance::select_plannable(*store, {});
    if (!selection.stopped.empty()) {
        err << "excluded (stopped):";
        for (const auto id : selection.stopped)
            err << ' ' << to_int(id);
        err << '\n';
    }
    if (selection.snapshots.empty()) {
        err << "no running engines to plan\n";
        return kFailure;
    }
    try {
        const auto plan = maintenance::consolidate_plan(selection.snapshots, config.planner);
        out << (format == "csv" ? maintenance::render_csv(plan) : maintenance::render_table(plan));
        return kOk;
    } catch (const maintenance::WindowUnschedulable& error) {
        err << "unschedulable: " << error.what() << '\n';
        return kUnschedulable;
    }
}

int validate_command(const std::string& path, std::ostream& out, std::ostream& err)
{
    std::ifstream in(path);
    if (!in) {
        err << path << ": cannot open\n";
        return kUsage;
    }
    const auto report = fleet::parse_cmapss_report(in);
    for (const auto& error : report.errors)
        err << path << ':' << error.line_number << ": " << error.detail << '\n';
    std::set<EngineId> engines;
    for (const auto& record : report.records)
        engines.insert(record.engine_id);
    out << path << ": " << report.data_lines << " lines, " << report.records.size() << " records, "
        << engines.size() << " engines, " << report.errors.size() << " errors\n";
    return report.errors.empty() ? kOk : kInvalidData;
}

void print_turn(const nlohmann::json& result, std::ostream& out)
{
    out << result.value("response", "") << '\n';
    if (const auto it = result.find("pending_calls"); it != result.end()) {
        out << "Pending critical action(s):";
        for (const auto& call : *it)
            out << ' ' << call.at("tool").get<std::string>() << call.at("arguments").dump();
        out << "\nType /confirm to approve.\n";
    }
}

int chat_command(const service::ServiceConfig& config, std::istream& in, std::ostream& out, std::ostream& err)
{
    auto app = service::Orchestrator::from_config(config);
    const auto session = app->create_session();
    const bool interactive = &in == &std::cin && ::isatty(STDIN_FILENO);
    std::string pending;
    std::string line;
    for (;;) {
        if (interactive)
            out << "> " << std::flush;
        if (!std::getline(in, line))
            break;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        if (line == "/quit" || line == "/exit")
            break;
        try {
            if (line.rfind("/confirm", 0) == 0) {
                auto token = line.size() > 9 ? line.substr(9) : pending;
                print_turn(app->confirm(session, token), out);
                pending.clear();
                continue;
            }
            const auto result = app->post_message(session, line);
            pending = result.value("pending_confirmation", "");
            print_turn(result, out);
        } catch (const service::ServiceError& error) {
            err << "error " << error.status() << ": " << error.what() << '\n';
            if (const auto body = error.body(); body.contains("detail"))
                err << body.at("detail").dump() << '\n';
        }
    }
    return kOk;
}

int serve_command(const service::ServiceConfig& config, const std::string& host, int port,
                  const std::string& console, std::ostream& out)
{
    // Signals are taken by a dedicated thread so shutdown happens outside a
    // signal handler.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    auto app = service::Orchestrator::from_config(config);
    service::HttpServer server(*app, console.empty() ? config.console_dir : std::filesystem::path(console));
    const int bound = server.bind(host.empty() ? config.listen_host : host, port >= 0 ? port : config.listen_port);
    out << "listening on http://" << (host.empty() ? config.listen_host : host) << ':' << bound << std::endl;

    std::thread waiter([&] {
        int received = 0;
        sigwait(&signals, &received);
        server.stop();
    });
    server.serve();
    // serve() may also return on a bind or socket failure; wake the waiter.
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    return kOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Intent-driven fleet maintenance service", "intentops"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions options;
    app.add_option("--config", options.config, "Service configuration file (JSON)")->check(CLI::ExistingFile);
    app.add_option("--data", options.data, "CMAPSS training file");
    app.add_option("--fixture", options.fixture, "Observation fixture (JSON)");
    app.add_option("--backend", options.backend, "Decomposer and planner backend")
        ->check(CLI::IsMember({"rule", "llm"}));
    app.add_flag("--auto-confirm", options.auto_confirm, "Run critical actions without confirmation");

    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    std::string host;
    int port = -1;
    std::string console;
    serve->add_option("--host", host, "Listen address");
    serve->add_option("--port", port, "Listen port (0 picks a free one)")->check(CLI::Range(0, 65535));
    serve->add_option("--console", console, "Static console assets")->check(CLI::ExistingDirectory);

    auto* chat = app.add_subcommand("chat", "Converse with the root agent in the terminal");

    auto* plan = app.add_subcommand("plan", "Print the consolidated maintenance plan");
    std::string format = "table";
    plan->add_option("--format", format, "table or csv")->check(CLI::IsMember({"table", "csv"}));

    auto* validate = app.add_subcommand("validate-data", "Check a CMAPSS file line by line");
    std::string path;
    validate->add_option("path", path, "File to check")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& error) {
        const int code = app.exit(error, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*validate)
            return validate_command(path, out, err);
        const auto config = resolve_config(options);
        if (*plan)
            return plan_command(config, format, out, err);
        if (*chat)
            return chat_command(config, in, out, err);
        return serve_command(config, host, port, console, out);
    } catch (const service::ConfigError& error) {
        err << "config: " << error.what() << '\n';
        return kUsage;
    } catch (const fleet::MalformedLine& error) {
        err << "data: " << error.what() << '\n';
        return kInvalidData;
    } catch (const std::exception& error) {
        err << "error: " << error.what() << '\n';
        return kFailure;
    }
}

} // namespace intentops::cli
