// SPDX-License-Identifier: Apache-2.0
#include "intentops/maintenance/planner.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace intentops::maintenance {

namespace {

// Free capacity is compared with a small slack so repeated fractional
// bookings do not lose a slot to rounding.
constexpr double kHoursSlack = 1e-9;

std::string join_ids(const std::vector<EngineId>& ids)
{
    std::string out;
    for (const auto id : ids) {
        if (!out.empty())
            out += ", ";
        out += to_string(id);
    }
    return out;
}

} // namespace

void PolicyBands::validate() const
{
    if (!(0 < stop_below && stop_below < repair_below && repair_below < monitor_soon_below))
        throw std::invalid_argument("bands must satisfy 0 < stop_below < repair_below < monitor_soon_below");
}

ActionRecommendation suggest_maintenance_action(int rul, const PolicyBands& bands)
{
    if (rul < 0)
        throw std::invalid_argument("rul must be non-negative");
    bands.validate();
    if (rul < bands.stop_below)
        return {Action::Stop, TaskPriority::Critical, Window::immediate()};
    if (rul < bands.repair_below)
        return {Action::Repair, TaskPriority::High, Window::within(3)};
    if (rul < bands.monitor_soon_below)
        return {Action::Monitor, TaskPriority::Low, Window::within(3)};
    return {Action::Monitor, TaskPriority::Low, Window::within(7)};
}

int severity(Action action)
{
    switch (action) {
    case Action::Monitor: return 0;
    case Action::Repair: return 1;
    case Action::Stop: return 2;
    }
    return 0;
}

CostEstimate estimate_maintenance_cost(Action action, const CostModel& model)
{
    switch (action) {
    case Action::Monitor: return model.monitor;
    case Action::Repair: return model.repair;
    case Action::Stop: return model.stop;
    }
    return {};
}

StaffRoster StaffRoster::standard()
{
    StaffRoster roster;
    for (const auto role : {Role::JrMechanic, Role::Mechanic, Role::SrMechanic, Role::TechLead})
        roster.roles[role] = RoleCapacity{};
    return roster;
}

bool StaffRoster::has(Role role) const
{
    const auto it = roles.find(role);
    return it != roles.end() && it->second.headcount > 0;
}

double StaffRoster::daily_capacity(Role role) const
{
    const auto it = roles.find(role);
    if (it == roles.end())
        return 0.0;
    return std::max(0, it->second.headcount) * it->second.daily_hours;
}

RoleUnavailable::RoleUnavailable(Role role)
    : std::runtime_error("no staff available for role " + std::string(to_string(role))), role_(role)
{
}

Assignment assign_maintenance_staff(Action action, const StaffRoster& roster)
{
    Assignment staff;
    switch (action) {
    case Action::Monitor: staff = {Role::JrMechanic}; break;
    case Action::Repair: staff = {Role::Mechanic, Role::JrMechanic}; break;
    case Action::Stop: staff = {Role::TechLead, Role::SrMechanic}; break;
    }
    for (const auto role : staff)
        if (!roster.has(role))
            throw RoleUnavailable(role);
    return staff;
}

double Calendar::booked(Role role, int day) const
{
    const auto it = bookings_.find({role, day});
    return it == bookings_.end() ? 0.0 : it->second;
}

void Calendar::book(Role role, int day, double hours)
{
    bookings_[{role, day}] += hours;
}

WindowUnschedulable::WindowUnschedulable(std::vector<EngineId> engine_ids)
    : std::runtime_error("no staff capacity inside the window for engine(s) " + join_ids(engine_ids)),
      engine_ids_(std::move(engine_ids))
{
}

MaintenanceTask schedule_maintenance_task(const TaskDraft& draft, Calendar& calendar, const StaffRoster& roster)
{
    MaintenanceTask task{
        .engine_id = draft.engine_id,
        .rul = draft.rul,
        .recommendation = draft.recommendation,
        .cost = draft.cost,
        .staff = draft.staff,
    };
    const double hours = draft.cost.labor_hours;
    const auto fits = [&](int day) {
        return std::all_of(draft.staff.begin(), draft.staff.end(), [&](Role role) {
            return roster.daily_capacity(role) - calendar.booked(role, day) + kHoursSlack >= hours;
        });
    };

    std::optional<int> day;
    if (draft.recommendation.window.kind == Window::Kind::Immediate) {
        day = 0;
        task.capacity_overrun = !fits(0);
    } else {
        for (int d = 0; d <= draft.recommendation.window.last_day(); ++d) {
            if (fits(d)) {
                day = d;
                break;
            }
        }
    }
    if (!day)
        throw WindowUnschedulable({draft.engine_id});

    task.scheduled_day = *day;
    for (const auto role : draft.staff)
        calendar.book(role, *day, hours);
    return task;
}

MaintenancePlan consolidate_plan(std::span<const fleet::EngineSnapshot> snapshots, const PlannerConfig& config)
{
    if (snapshots.empty())
        throw std::invalid_argument("no engines to plan");
    config.bands.validate();

    std::vector<TaskDraft> drafts;
    drafts.reserve(snapshots.size());
    for (const auto& snapshot : snapshots) {
        const auto recommendation = suggest_maintenance_action(snapshot.rul, config.bands);
        drafts.push_back({
            .engine_id = snapshot.engine_id,
            .rul = snapshot.rul,
            .recommendation = recommendation,
            .cost = estimate_maintenance_cost(recommendation.action, config.costs),
            .staff = assign_maintenance_staff(recommendation.action, config.roster),
        });
    }

    // Most urgent work claims staff hours first.
    std::sort(drafts.begin(), drafts.end(), [](const TaskDraft& a, const TaskDraft& b) {
        return std::tuple(a.rul, to_int(a.engine_id)) < std::tuple(b.rul, to_int(b.engine_id));
    });

    MaintenancePlan plan;
    Calendar calendar;
    std::vector<EngineId> unschedulable;
    for (const auto& draft : drafts) {
        try {
            plan.tasks.push_back(schedule_maintenance_task(draft, calendar, config.roster));
        } catch (const WindowUnschedulable&) {
            unschedulable.push_back(draft.engine_id);
        }
    }
    if (!unschedulable.empty()) {
        std::sort(unschedulable.begin(), unschedulable.end());
        throw WindowUnschedulable(std::move(unschedulable));
    }

    std::sort(plan.tasks.begin(), plan.tasks.end(),
              [](const MaintenanceTask& a, const MaintenanceTask& b) { return a.engine_id < b.engine_id; });

    for (const auto& task : plan.tasks) {
        const auto& rec = task.recommendation;
        auto group = std::find_if(plan.groups.begin(), plan.groups.end(), [&](const PlanGroup& g) {
            return g.action == rec.action && g.priority == rec.priority && g.window == rec.window;
        });
        if (group == plan.groups.end()) {
            plan.groups.push_back({
                .action = rec.action,
                .priority = rec.priority,
                .window = rec.window,
                .engine_ids = {},
                .rul_min = task.rul,
                .rul_max = task.rul,
                .unit_cost = task.cost,
                .staff = task.staff,
            });
            group = std::prev(plan.groups.end());
        }
        group->engine_ids.push_back(task.engine_id);
        group->rul_min = std::min(group->rul_min, task.rul);
        group->rul_max = std::max(group->rul_max, task.rul);
        group->total_cost_usd += task.cost.cost_usd;
        group->total_labor_hours += task.cost.labor_hours;
        plan.total_cost_usd += task.cost.cost_usd;
        plan.total_labor_hours += task.cost.labor_hours;
    }
    std::sort(plan.groups.begin(), plan.groups.end(), [](const PlanGroup& a, const PlanGroup& b) {
        return std::tuple(a.rul_min, severity(b.action)) < std::tuple(b.rul_min, severity(a.action));
    });
    return plan;
}

std::string_view to_string(Action action)
{
    switch (action) {
    case Action::Monitor: return "monitor";
    case Action::Repair: return "repair";
    case Action::Stop: return "stop";
    }
    return "monitor";
}

std::string_view to_string(TaskPriority priority)
{
    switch (priority) {
    case TaskPriority::Low: return "low";
    case TaskPriority::High: return "high";
    case TaskPriority::Critical: return "critical";
    }
    return "low";
}

std::string_view to_string(Role role)
{
    switch (role) {
    case Role::JrMechanic: return "jr_mechanic";
    case Role::Mechanic: return "mechanic";
    case Role::SrMechanic: return "sr_mechanic";
    case Role::TechLead: return "tech_lead";
    }
    return "mechanic";
}

std::optional<Action> parse_action(std::string_view text)
{
    for (const auto action : {Action::Monitor, Action::Repair, Action::Stop})
        if (to_string(action) == text)
            return action;
    return std::nullopt;
}

std::optional<TaskPriority> parse_priority(std::string_view text)
{
    for (const auto priority : {TaskPriority::Low, TaskPriority::High, TaskPriority::Critical})
        if (to_string(priority) == text)
            return priority;
    return std::nullopt;
}

std::optional<Role> parse_role(std::string_view text)
{
    for (const auto role : {Role::JrMechanic, Role::Mechanic, Role::SrMechanic, Role::TechLead})
        if (to_string(role) == text)
            return role;
    return std::nullopt;
}

std::string scheduled_time_label(const Window& window)
{
    if (window.kind == Window::Kind::Immediate)
        return "IMMEDIATE";
    return "Within " + std::to_string(window.days) + (window.days == 1 ? " day" : " days");
}

std::string rul_range_label(const PlanGroup& group)
{
    if (group.rul_min == group.rul_max)
        return std::to_string(group.rul_min);
    return std::to_string(group.rul_min) + "-" + std::to_string(group.rul_max);
}

std::string staff_label(const Assignment& staff)
{
    std::string out = "[";
    for (std::size_t i = 0; i < staff.size(); ++i) {
        if (i > 0)
            out += ", ";
        out += to_string(staff[i]);
    }
    return out + "]";
}

namespace {

nlohmann::json encode_window(const Window& window)
{
    if (window.kind == Window::Kind::Immediate)
        return {{"kind", "immediate"}, {"days", 0}};
    return {{"kind", "within_days"}, {"days", window.days}};
}

nlohmann::json encode_staff(const Assignment& staff)
{
    auto out = nlohmann::json::array();
    for (const auto role : staff)
        out.push_back(to_string(role));
    return out;
}

} // namespace

nlohmann::json encode(const ActionRecommendation& recommendation)
{
    return {
        {"action", to_string(recommendation.action)},
        {"priority", to_string(recommendation.priority)},
        {"window", encode_window(recommendation.window)},
        {"scheduled_time", scheduled_time_label(recommendation.window)},
    };
}

nlohmann::json encode(const MaintenanceTask& task)
{
    auto out = encode(task.recommendation);
    out["engine_id"] = to_int(task.engine_id);
    out["rul"] = task.rul;
    out["cost_usd"] = task.cost.cost_usd;
    out["labor_hours"] = task.cost.labor_hours;
    out["staff"] = encode_staff(task.staff);
    out["scheduled_day"] = task.scheduled_day;
    out["capacity_overrun"] = task.capacity_overrun;
    return out;
}

nlohmann::json encode(const MaintenancePlan& plan)
{
    auto tasks = nlohmann::json::array();
    for (const auto& task : plan.tasks)
        tasks.push_back(encode(task));

    auto groups = nlohmann::json::array();
    for (const auto& group : plan.groups) {
        auto ids = nlohmann::json::array();
        for (const auto id : group.engine_ids)
            ids.push_back(to_int(id));
        groups.push_back({
            {"engine_count", group.engine_count()},
            {"engine_ids", ids},
            {"rul_min", group.rul_min},
            {"rul_max", group.rul_max},
            {"rul_range", rul_range_label(group)},
            {"action", to_string(group.action)},
            {"priority", to_string(group.priority)},
            {"window", encode_window(group.window)},
            {"scheduled_time", scheduled_time_label(group.window)},
            {"cost_usd", group.unit_cost.cost_usd},
            {"labor_hours", group.unit_cost.labor_hours},
            {"staff", encode_staff(group.staff)},
            {"total_cost_usd", group.total_cost_usd},
            {"total_labor_hours", group.total_labor_hours},
        });
    }
    return {
        {"tasks", tasks},
        {"groups", groups},
        {"totals",
         {{"engine_count", plan.tasks.size()},
          {"cost_usd", plan.total_cost_usd},
          {"labor_hours", plan.total_labor_hours}}},
    };
}

namespace {

template <typename T>
T must(std::optional<T> value, std::string_view what, const nlohmann::json& text)
{
    if (!value)
        throw std::invalid_argument("plan document: bad " + std::string(what) + " " + text.dump());
    return *value;
}

Window decode_window(const nlohmann::json& document)
{
    const auto kind = document.at("kind").get<std::string>();
    if (kind == "immediate")
        return Window::immediate();
    if (kind == "within_days")
        return Window::within(document.at("days").get<int>());
    throw std::invalid_argument("plan document: bad window kind " + kind);
}

Assignment decode_staff(const nlohmann::json& document)
{
    Assignment staff;
    for (const auto& role : document)
        staff.push_back(must(parse_role(role.get<std::string>()), "role", role));
    return staff;
}

ActionRecommendation decode_recommendation(const nlohmann::json& document)
{
    return {
        must(parse_action(document.at("action").get<std::string>()), "action", document.at("action")),
        must(parse_priority(document.at("priority").get<std::string>()), "priority", document.at("priority")),
        decode_window(document.at("window")),
    };
}

} // namespace

MaintenancePlan decode_plan(const nlohmann::json& document)
{
    try {
        MaintenancePlan plan;
        for (const auto& t : document.at("tasks")) {
            plan.tasks.push_back({
                .engine_id = make_engine_id(t.at("engine_id").get<std::int32_t>()),
                .rul = t.at("rul").get<int>(),
                .recommendation = decode_recommendation(t),
                .cost = {t.at("cost_usd").get<double>(), t.at("labor_hours").get<double>()},
                .staff = decode_staff(t.at("staff")),
                .scheduled_day = t.at("scheduled_day").get<int>(),
                .capacity_overrun = t.value("capacity_overrun", false),
            });
        }
        for (const auto& g : document.at("groups")) {
            const auto rec = decode_recommendation(g);
            PlanGroup group{
                .action = rec.action,
                .priority = rec.priority,
                .window = rec.window,
                .engine_ids = {},
                .rul_min = g.at("rul_min").get<int>(),
                .rul_max = g.at("rul_max").get<int>(),
                .unit_cost = {g.at("cost_usd").get<double>(), g.at("labor_hours").get<double>()},
                .staff = decode_staff(g.at("staff")),
                .total_cost_usd = g.at("total_cost_usd").get<double>(),
                .total_labor_hours = g.at("total_labor_hours").get<double>(),
            };
            for (const auto& id : g.at("engine_ids"))
                group.engine_ids.push_back(make_engine_id(id.get<std::int32_t>()));
            plan.groups.push_back(std::move(group));
        }
        const auto& totals = document.at("totals");
        plan.total_cost_usd = totals.at("cost_usd").get<double>();
        plan.total_labor_hours = totals.at("labor_hours").get<double>();
        return plan;
    } catch (const nlohmann::json::exception& error) {
        throw std::invalid_argument(std::string("plan document: ") + error.what());
    }
}

} // namespace intentops::maintenance
