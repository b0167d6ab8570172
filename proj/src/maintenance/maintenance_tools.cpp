// SPDX-License-Identifier: Apache-2.0
#include "intentops/maintenance/maintenance_tools.hpp"

namespace intentops::maintenance {

using nlohmann::json;
using runtime::ParamSpec;
using runtime::ToolErrorKind;
using runtime::ToolResult;
using runtime::TypeTag;

namespace {

const std::vector<std::string> kActionNames{"monitor", "repair", "stop"};

json id_list(const std::vector<EngineId>& ids)
{
    auto out = json::array();
    for (const auto id : ids)
        out.push_back(to_int(id));
    return out;
}

ToolResult unknown_engine(EngineId id)
{
    return ToolResult::failure(ToolErrorKind::ExecutionFailed,
                               {{"error", "unknown_engine"}, {"engine_id", to_int(id)}});
}

ToolResult role_unavailable(const RoleUnavailable& error)
{
    return ToolResult::failure(ToolErrorKind::ExecutionFailed,
                               {{"error", "role_unavailable"}, {"role", to_string(error.role())}});
}

ToolResult unschedulable(const WindowUnschedulable& error)
{
    return ToolResult::failure(ToolErrorKind::ExecutionFailed,
                               {{"error", "window_unschedulable"}, {"engine_ids", id_list(error.engine_ids())}});
}

Action action_argument(const json& arguments)
{
    // Schema validation already restricted the value to kActionNames.
    return *parse_action(arguments.at("action").get<std::string>());
}

} // namespace

PlanSelection select_plannable(const fleet::FleetStore& store, std::span<const EngineId> requested)
{
    PlanSelection selection;
    const auto ids = requested.empty() ? std::span<const EngineId>(store.engine_ids()) : requested;
    for (const auto id : ids) {
        if (!store.contains(id)) {
            selection.unknown.push_back(id);
            continue;
        }
        auto snapshot = store.snapshot(id);
        if (snapshot.status == fleet::EngineStatus::Stopped)
            selection.stopped.push_back(id);
        else
            selection.snapshots.push_back(std::move(snapshot));
    }
    return selection;
}

MaintenanceTask stop_engine(fleet::FleetStore& store, EngineId id, const PlannerConfig& config)
{
    const auto snapshot = store.snapshot(id);
    store.set_status(id, fleet::EngineStatus::Stopped);
    return {
        .engine_id = id,
        .rul = snapshot.rul,
        .recommendation = {Action::Stop, TaskPriority::Critical, Window::immediate()},
        .cost = estimate_maintenance_cost(Action::Stop, config.costs),
        .staff = assign_maintenance_staff(Action::Stop, config.roster),
        .scheduled_day = 0,
    };
}

MaintenanceToolkit::MaintenanceToolkit(std::shared_ptr<fleet::FleetStore> store, PlannerConfig config)
    : store_(std::move(store)), config_(std::move(config))
{
    config_.bands.validate();
}

Calendar MaintenanceToolkit::calendar() const
{
    std::lock_guard lock(calendar_mutex_);
    return calendar_;
}

void MaintenanceToolkit::register_tools(runtime::ToolRegistry& registry)
{
    registry.register_tool(
        {
            .name = "suggest_maintenance_action",
            .description = "Maps a remaining useful life in cycles to an action, priority and window.",
            .params = {ParamSpec{"rul", TypeTag::integer(), true, "Remaining useful life in cycles"}},
            .returns_description = "{action, priority, window, scheduled_time}",
        },
        [this](const json& arguments) {
            const int rul = arguments.at("rul").get<int>();
            if (rul < 0)
                return ToolResult::failure(ToolErrorKind::ExecutionFailed, {{"error", "negative_rul"}});
            return ToolResult::success(encode(suggest_maintenance_action(rul, config_.bands)));
        });

    registry.register_tool(
        {
            .name = "estimate_maintenance_cost",
            .description = "Flat cost and labor hours of one action.",
            .params = {ParamSpec{"action", TypeTag::one_of(kActionNames), true, "Maintenance action"}},
            .returns_description = "{action, cost_usd, labor_hours}",
        },
        [this](const json& arguments) {
            const auto action = action_argument(arguments);
            const auto cost = estimate_maintenance_cost(action, config_.costs);
            return ToolResult::success(
                {{"action", to_string(action)}, {"cost_usd", cost.cost_usd}, {"labor_hours", cost.labor_hours}});
        });

    registry.register_tool(
        {
            .name = "assign_maintenance_staff",
            .description = "Staff roles required by one action.",
            .params = {ParamSpec{"action", TypeTag::one_of(kActionNames), true, "Maintenance action"}},
            .returns_description = "{action, staff: [role, ...]}",
        },
        [this](const json& arguments) {
            const auto action = action_argument(arguments);
            try {
                json staff = json::array();
                for (const auto role : assign_maintenance_staff(action, config_.roster))
                    staff.push_back(to_string(role));
                return ToolResult::success({{"action", to_string(action)}, {"staff", staff}});
            } catch (const RoleUnavailable& error) {
                return role_unavailable(error);
            }
        });

    registry.register_tool(
        {
            .name = "schedule_maintenance_task",
            .description = "Books the engine's recommended task on the shop calendar at the earliest day "
                           "with free staff capacity. `action` overrides the recommendation.",
            .params = {ParamSpec{"engine_id", TypeTag::integer(), true, "Engine (unit) number"},
                       ParamSpec{"action", TypeTag::one_of(kActionNames), false, "Action override"}},
            .returns_description = "Scheduled task document",
            .effect = runtime::Effect::Mutating,
        },
        [this](const json& arguments) {
            const auto id = make_engine_id(arguments.at("engine_id").get<std::int32_t>());
            if (!store_->contains(id))
                return unknown_engine(id);
            const auto snapshot = store_->snapshot(id);
            auto recommendation = suggest_maintenance_action(snapshot.rul, config_.bands);
            if (arguments.contains("action")) {
                const auto action = action_argument(arguments);
                if (action != recommendation.action) {
                    // Keep the pairing of action, priority and window intact.
                    const PolicyBands& b = config_.bands;
                    const int anchor = action == Action::Stop     ? 0
                                       : action == Action::Repair ? b.stop_below
                                                                  : b.monitor_soon_below;
                    recommendation = suggest_maintenance_action(anchor, b);
                }
            }
            try {
                const TaskDraft draft{
                    .engine_id = id,
                    .rul = snapshot.rul,
                    .recommendation = recommendation,
                    .cost = estimate_maintenance_cost(recommendation.action, config_.costs),
                    .staff = assign_maintenance_staff(recommendation.action, config_.roster),
                };
                std::lock_guard lock(calendar_mutex_);
                return ToolResult::success(encode(schedule_maintenance_task(draft, calendar_, config_.roster)));
            } catch (const RoleUnavailable& error) {
                return role_unavailable(error);
            } catch (const WindowUnschedulable& error) {
                return unschedulable(error);
            }
        });

    registry.register_tool(
        {
            .name = "consolidate_maintenance_plan",
            .description = "Plans every running engine among engine_ids (the whole fleet when omitted) "
                           "and groups the tasks by action, priority and window.",
            .params = {ParamSpec{"engine_ids", TypeTag::int_list(), false, "Engines to plan"}},
            .returns_description = "{plan, excluded: {stopped, unknown}}",
        },
        [this](const json& arguments) {
            std::vector<EngineId> requested;
            if (const auto ids = arguments.find("engine_ids"); ids != arguments.end() && !ids->is_null())
                for (const auto& value : *ids)
                    requested.push_back(make_engine_id(value.get<std::int32_t>()));
            auto selection = select_plannable(*store_, requested);
            const json excluded{{"stopped", id_list(selection.stopped)}, {"unknown", id_list(selection.unknown)}};
            if (selection.snapshots.empty())
                return ToolResult::failure(ToolErrorKind::ExecutionFailed,
                                           {{"error", "no_plannable_engines"}, {"excluded", excluded}});
            try {
                const auto plan = consolidate_plan(selection.snapshots, config_);
                return ToolResult::success({{"plan", encode(plan)}, {"excluded", excluded}});
            } catch (const RoleUnavailable& error) {
                return role_unavailable(error);
            } catch (const WindowUnschedulable& error) {
                return unschedulable(error);
            }
        });

    registry.register_tool(
        {
            .name = "stop_engine",
            .description = "Takes an engine out of service immediately. Requires operator confirmation.",
            .params = {ParamSpec{"engine_id", TypeTag::integer(), true, "Engine (unit) number"}},
            .returns_description = "{engine_id, status, task}",
            .effect = runtime::Effect::Critical,
        },
        [this](const json& arguments) {
            const auto id = make_engine_id(arguments.at("engine_id").get<std::int32_t>());
            if (!store_->contains(id))
                return unknown_engine(id);
            try {
                const auto task = stop_engine(*store_, id, config_);
                return ToolResult::success({{"engine_id", to_int(id)}, {"status", "stopped"}, {"task", encode(task)}});
            } catch (const RoleUnavailable& error) {
                return role_unavailable(error);
            }
        });
}

} // namespace intentops::maintenance
