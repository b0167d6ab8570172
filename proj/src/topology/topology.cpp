// SPDX-License-Identifier: Apache-2.0
#include "intentops/topology/topology.hpp"

#include "intentops/fleet/data_tools.hpp"
#include "intentops/intent/compliance.hpp"
#include "intentops/intent/intent_json.hpp"
#include "intentops/maintenance/planner.hpp"

#include <algorithm>

namespace intentops::topology {

using nlohmann::json;
using runtime::CallTool;
using runtime::Delegate;
using runtime::Observation;
using runtime::PlannerContext;
using runtime::PlannerStep;
using runtime::Respond;

namespace {

// Longer fleets are summarized instead of listed engine by engine.
constexpr std::size_t kListedEngines = 25;

PlannerStep respond(std::string thought, std::string text, json payload)
{
    return {std::move(thought), Respond{std::move(text), std::move(payload)}};
}

PlannerStep call(std::string thought, std::string tool, json arguments)
{
    return {std::move(thought), CallTool{{std::move(tool), std::move(arguments)}}};
}

PlannerStep delegate(std::string thought, std::string_view agent, std::string task, json input)
{
    return {std::move(thought), Delegate{std::string(agent), std::move(task), std::move(input)}};
}

std::vector<fleet::EngineSnapshot> snapshots_of(const json& payload)
{
    std::vector<fleet::EngineSnapshot> out;
    if (payload.is_object() && payload.contains("snapshots"))
        for (const auto& document : payload.at("snapshots"))
            out.push_back(fleet::decode_snapshot(document));
    return out;
}

std::vector<EngineId> running_ids(const std::vector<fleet::EngineSnapshot>& snapshots)
{
    std::vector<EngineId> ids;
    for (const auto& snapshot : snapshots)
        if (snapshot.status == fleet::EngineStatus::Running)
            ids.push_back(snapshot.engine_id);
    return ids;
}

json id_list(const std::vector<EngineId>& ids)
{
    auto out = json::array();
    for (const auto id : ids)
        out.push_back(to_int(id));
    return out;
}

std::string join_ids(const std::vector<EngineId>& ids)
{
    std::string out;
    for (const auto id : ids)
        out += (out.empty() ? "" : ", ") + to_string(id);
    return out;
}

json data_input(const intent::Intent& intent)
{
    return {{"targets", intent::encode(intent.targets)}};
}

std::string failure_detail(const Observation& observation)
{
    if (!observation.text.empty())
        return observation.text;
    if (!observation.error.empty())
        return observation.error;
    return observation.payload.dump();
}

// Outcome of the stop_engine calls that follow `first` in the observations.
struct StopReport
{
    json entries = json::array();
    std::string notes;
};

StopReport stop_report(std::span<const Observation> observations, std::size_t first,
                       const std::vector<EngineId>& ids)
{
    StopReport report;
    for (std::size_t k = 0; k < ids.size() && first + k < observations.size(); ++k) {
        const auto& o = observations[first + k];
        const auto id = to_string(ids[k]);
        std::string status;
        if (o.ok) {
            status = "stopped";
            report.notes += "Engine " + id + " stopped.\n";
        } else if (o.error == "confirmation_required") {
            status = "pending_confirmation";
            report.notes += "Stopping engine " + id + " is waiting for operator confirmation.\n";
        } else {
            status = "failed";
            report.notes += "Stopping engine " + id + " failed (" + o.payload.dump() + ").\n";
        }
        report.entries.push_back({{"engine_id", to_int(ids[k])}, {"status", status}});
    }
    return report;
}

std::string describe_snapshots(const std::vector<fleet::EngineSnapshot>& snapshots)
{
    if (snapshots.empty())
        return "No engines matched the targets.";
    std::string out;
    for (std::size_t i = 0; i < snapshots.size() && i < kListedEngines; ++i) {
        const auto& s = snapshots[i];
        out += "Engine " + to_string(s.engine_id) + ": RUL " + std::to_string(s.rul) + " cycles at cycle " +
               std::to_string(s.observed_cycle) + " (" + std::string(fleet::to_string(s.status)) + ")\n";
    }
    if (snapshots.size() > kListedEngines)
        out += "... and " + std::to_string(snapshots.size() - kListedEngines) + " more engines\n";
    const auto worst = std::min_element(snapshots.begin(), snapshots.end(),
                                        [](const auto& a, const auto& b) { return a.rul < b.rul; });
    out += "Lowest RUL: engine " + to_string(worst->engine_id) + " with " + std::to_string(worst->rul) + " cycles.";
    return out;
}

json compliance_of(const intent::Intent& intent, const std::vector<fleet::EngineSnapshot>& snapshots)
{
    intent::Measurements measurements;
    for (const auto& s : snapshots)
        measurements[s.engine_id] = s.metrics();
    try {
        return intent::encode(intent::evaluate_compliance(intent, measurements));
    } catch (const std::exception&) {
        return json::array();
    }
}

PlannerStep root_plan(const PlannerContext& ctx)
{
    const auto obs = ctx.observations;
    if (obs.empty())
        return delegate("Gather current snapshots and RUL for the targeted engines", kDataAgent,
                        "Collect snapshots and RUL for the targets", data_input(ctx.intent));

    const auto& data = obs[0];
    if (!data.ok || !data.payload.contains("snapshots"))
        return respond("", "Fleet data is unavailable: " + failure_detail(data), {{"error", data.payload}});
    const auto snapshots = snapshots_of(data.payload);
    const auto running = running_ids(snapshots);
    if (running.empty())
        return respond("", "No running engines among the targets; nothing to plan.", data.payload);

    if (obs.size() == 1)
        return delegate("Hand the running engines to maintenance planning", kMaintenanceAgent,
                        "Consolidate a maintenance plan for these engines", {{"engine_ids", id_list(running)}});

    const auto& planned = obs[1];
    if (!planned.payload.is_object() || !planned.payload.contains("plan"))
        return respond("", "Maintenance planning failed: " + failure_detail(planned), {{"error", planned.payload}});
    const auto plan = maintenance::decode_plan(planned.payload.at("plan"));

    std::vector<EngineId> stops;
    for (const auto& task : plan.tasks)
        if (task.recommendation.action == maintenance::Action::Stop)
            stops.push_back(task.engine_id);

    const std::size_t done = obs.size() - 2;
    if (done < stops.size())
        return call("Engine " + to_string(stops[done]) + " is below the stop threshold; stop it now", "stop_engine",
                    {{"engine_id", to_int(stops[done])}});

    const auto report = stop_report(obs, 2, stops);
    const bool csv = ctx.intent.info("output_format") == "csv";
    std::string text = "Consolidated maintenance plan for " + std::to_string(plan.tasks.size()) + " engines in " +
                       std::to_string(plan.groups.size()) + " groups.\n\n" +
                       (csv ? maintenance::render_csv(plan) : maintenance::render_table(plan));
    // Stopped targets never reach the maintenance agent; report them here.
    std::vector<EngineId> stopped;
    for (const auto& snapshot : snapshots)
        if (snapshot.status == fleet::EngineStatus::Stopped)
            stopped.push_back(snapshot.engine_id);
    auto excluded = planned.payload.value("excluded", json::object());
    excluded["stopped"] = id_list(stopped);
    if (!stopped.empty())
        text += "Already stopped and left out of the plan: engine(s) " + join_ids(stopped) + ".\n";
    text += report.notes;
    return respond("", std::move(text),
                   {{"plan", planned.payload.at("plan")},
                    {"excluded", excluded},
                    {"stops", report.entries},
                    {"warnings", data.payload.value("warnings", json::array())}});
}

PlannerStep root_stop(const PlannerContext& ctx)
{
    const auto obs = ctx.observations;
    std::vector<EngineId> ids;
    std::size_t first = 0;
    if (const auto* fixed = std::get_if<intent::StaticTargets>(&ctx.intent.targets)) {
        ids = fixed->engine_ids;
    } else {
        if (obs.empty())
            return delegate("Find the running engines the stop applies to", kDataAgent,
                            "Collect snapshots for the targets", data_input(ctx.intent));
        if (!obs[0].ok)
            return respond("", "Fleet data is unavailable: " + failure_detail(obs[0]), {{"error", obs[0].payload}});
        ids = running_ids(snapshots_of(obs[0].payload));
        first = 1;
        if (ids.empty())
            return respond("", "No running engines match the targets; nothing to stop.", obs[0].payload);
    }

    const std::size_t done = obs.size() - first;
    if (done < ids.size())
        return call("Stop engine " + to_string(ids[done]) + " as requested", "stop_engine",
                    {{"engine_id", to_int(ids[done])}});

    const auto report = stop_report(obs, first, ids);
    return respond("", "Stop request for engine(s) " + join_ids(ids) + ".\n" + report.notes,
                   {{"stops", report.entries}});
}

PlannerStep root_query(const PlannerContext& ctx)
{
    const auto obs = ctx.observations;
    if (obs.empty())
        return delegate("Look up the engines the operator asked about", kDataAgent,
                        "Report the current state of the targets", data_input(ctx.intent));
    const auto& data = obs[0];
    if (!data.ok || !data.payload.contains("snapshots"))
        return respond("", "Fleet data is unavailable: " + failure_detail(data), {{"error", data.payload}});
    const auto snapshots = snapshots_of(data.payload);
    std::string text = describe_snapshots(snapshots);
    for (const auto& warning : data.payload.value("warnings", json::array()))
        text += "\nNote: " + warning.get<std::string>();
    return respond("", std::move(text),
                   {{"snapshots", data.payload.at("snapshots")},
                    {"warnings", data.payload.value("warnings", json::array())},
                    {"compliance", compliance_of(ctx.intent, snapshots)}});
}

PlannerStep data_agent(const PlannerContext& ctx)
{
    const auto obs = ctx.observations;
    const auto selector = ctx.task_input.is_object() && ctx.task_input.contains("targets")
                              ? intent::decode_target_selector(ctx.task_input.at("targets"))
                              : ctx.intent.targets;
    const auto* fixed = std::get_if<intent::StaticTargets>(&selector);

    // A single engine asked about directly: telemetry, then the RUL estimate.
    if (fixed && fixed->engine_ids.size() == 1 && request_type(ctx.intent) == "query") {
        const auto id = fixed->engine_ids.front();
        if (obs.empty())
            return call("Read the engine's telemetry", "get_engine_data", {{"engine_id", to_int(id)}});
        if (!obs[0].ok)
            return respond("", "Engine " + to_string(id) + " is not in the fleet.",
                           {{"snapshots", json::array()},
                            {"warnings", {"engine " + to_string(id) + " is not in the fleet"}}});
        if (obs.size() == 1)
            return call("Estimate its remaining useful life", "predict_engine_rul", {{"engine_id", to_int(id)}});
        auto snapshot = obs[0].payload;
        if (obs[1].ok)
            snapshot["rul"] = obs[1].payload.at("rul");
        return respond("", "Collected engine " + to_string(id) + ".",
                       {{"snapshots", json::array({snapshot})}, {"warnings", json::array()}});
    }

    if (obs.empty()) {
        json arguments = json::object();
        if (fixed)
            arguments["engine_ids"] = id_list(fixed->engine_ids);
        return call("Fetch snapshots with RUL in one batch", "get_fleet_data", std::move(arguments));
    }
    if (!obs[0].ok)
        return respond("", "Fleet data is unavailable.", {{"error", obs[0].payload}});

    const auto snapshots = snapshots_of(obs[0].payload);
    std::vector<EngineId> ids;
    std::map<EngineId, double> lookup;
    std::string metric;
    if (const auto* dynamic = std::get_if<intent::DynamicTargets>(&selector)) {
        std::visit(
            [&](const auto& filter) {
                if constexpr (requires { filter.metric; })
                    metric = filter.metric;
            },
            dynamic->filter);
    }
    for (const auto& s : snapshots) {
        ids.push_back(s.engine_id);
        if (!metric.empty()) {
            const auto metrics = s.metrics();
            if (const auto it = metrics.find(metric); it != metrics.end())
                lookup[s.engine_id] = it->second;
        }
    }
    const auto resolution = intent::resolve_targets(selector, ids, lookup);

    json selected = json::array();
    for (const auto id : resolution.engine_ids) {
        const auto it = std::find_if(snapshots.begin(), snapshots.end(), [&](const auto& s) { return s.engine_id == id; });
        selected.push_back(fleet::encode(*it));
    }
    return respond("", "Collected " + std::to_string(selected.size()) + " engine snapshots.",
                   {{"snapshots", selected}, {"warnings", resolution.warnings}});
}

PlannerStep maintenance_agent(const PlannerContext& ctx)
{
    const auto obs = ctx.observations;
    if (obs.empty()) {
        json arguments = json::object();
        if (ctx.task_input.is_object() && ctx.task_input.contains("engine_ids"))
            arguments["engine_ids"] = ctx.task_input.at("engine_ids");
        return call("Suggest, cost, staff and schedule every engine, then group the tasks",
                    "consolidate_maintenance_plan", std::move(arguments));
    }
    if (!obs[0].ok)
        return respond("", "Planning failed: " + obs[0].payload.dump(), {{"error", obs[0].payload}});
    const auto& totals = obs[0].payload.at("plan").at("totals");
    return respond("",
                   "Plan ready for " + totals.at("engine_count").dump() + " engines, " + totals.at("cost_usd").dump() +
                       " USD, " + totals.at("labor_hours").dump() + " labor hours.",
                   obs[0].payload);
}

} // namespace

std::string request_type(const intent::Intent& intent)
{
    if (auto value = intent.info("request_type"))
        return *value;
    const bool upkeep = std::any_of(intent.expectations.begin(), intent.expectations.end(), [](const auto& e) {
        return e.objective == intent::Objective::Maintain || e.objective == intent::Objective::Avoid;
    });
    return upkeep ? "maintenance_plan" : "query";
}

runtime::AgentDirectory default_agents()
{
    runtime::AgentDirectory agents;
    agents.add({
        .name = std::string(kRootAgent),
        .role_instructions = "Own the operator's intent. Delegate data gathering to data_agent and planning to "
                             "maintenance_agent, stop engines that cannot safely keep running, and answer with "
                             "a concise summary or table.",
        .tool_names = {"stop_engine"},
        .sub_agent_names = {std::string(kDataAgent), std::string(kMaintenanceAgent)},
        .max_steps = 12,
    });
    agents.add({
        .name = std::string(kDataAgent),
        .role_instructions = "Fetch engine telemetry and RUL for the requested engines. Prefer get_fleet_data "
                             "for more than one engine. Report snapshots, never recommendations.",
        .tool_names = {"get_engine_data", "predict_engine_rul", "get_fleet_data"},
        .sub_agent_names = {},
        .max_steps = 8,
    });
    agents.add({
        .name = std::string(kMaintenanceAgent),
        .role_instructions = "Turn engine RUL into maintenance actions with cost, staff and schedule. Use "
                             "consolidate_maintenance_plan for whole plans.",
        .tool_names = {"suggest_maintenance_action", "estimate_maintenance_cost", "assign_maintenance_staff",
                       "schedule_maintenance_task", "consolidate_maintenance_plan"},
        .sub_agent_names = {},
        .max_steps = 8,
    });
    return agents;
}

void register_default_tools(runtime::ToolRegistry& registry,
                            std::shared_ptr<fleet::FleetStore> store,
                            maintenance::MaintenanceToolkit& toolkit)
{
    fleet::register_data_tools(registry, std::move(store));
    toolkit.register_tools(registry);
}

PlannerStep RulePlanner::next(const PlannerContext& ctx)
{
    if (ctx.agent.name == kDataAgent)
        return data_agent(ctx);
    if (ctx.agent.name == kMaintenanceAgent)
        return maintenance_agent(ctx);
    const auto type = request_type(ctx.intent);
    if (type == "maintenance_plan")
        return root_plan(ctx);
    if (type == "stop")
        return root_stop(ctx);
    return root_query(ctx);
}

std::unique_ptr<runtime::PlannerBackend> rule_planner()
{
    return std::make_unique<RulePlanner>();
}

} // namespace intentops::topology
