// SPDX-License-Identifier: Apache-2.0
#include "intentops/maintenance/planner.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace intentops::maintenance {

namespace {

constexpr std::array<std::string_view, 8> kColumns{
    "# Engines", "RUL Range", "Recommended Action", "Priority",
    "Cost (USD)", "Labor Hours", "Assigned Staff", "Scheduled Time",
};

using Row = std::array<std::string, kColumns.size()>;

// Whole numbers print without a fraction; anything else with two decimals.
std::string number(double value)
{
    char buffer[64];
    if (value == std::floor(value) && std::abs(value) < 1e15)
        std::snprintf(buffer, sizeof buffer, "%.0f", value);
    else
        std::snprintf(buffer, sizeof buffer, "%.2f", value);
    return buffer;
}

std::string upper(std::string_view text)
{
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

std::vector<Row> rows(const MaintenancePlan& plan)
{
    std::vector<Row> out;
    for (const auto& group : plan.groups) {
        out.push_back({
            std::to_string(group.engine_count()),
            rul_range_label(group),
            upper(to_string(group.action)),
            std::string(to_string(group.priority)),
            number(group.unit_cost.cost_usd),
            number(group.unit_cost.labor_hours),
            staff_label(group.staff),
            scheduled_time_label(group.window),
        });
    }
    return out;
}

std::string csv_field(const std::string& value)
{
    if (value.find_first_of(",\"\n") == std::string::npos)
        return value;
    std::string out = "\"";
    for (const char c : value) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string render_table(const MaintenancePlan& plan)
{
    const auto body = rows(plan);
    std::array<std::size_t, kColumns.size()> width{};
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        width[c] = kColumns[c].size();
        for (const auto& row : body)
            width[c] = std::max(width[c], row[c].size());
    }

    std::string out;
    const auto line = [&](const auto& cells) {
        out += "|";
        for (std::size_t c = 0; c < kColumns.size(); ++c) {
            const std::string_view cell = cells[c];
            out += ' ';
            out += cell;
            out.append(width[c] - cell.size(), ' ');
            out += " |";
        }
        out += '\n';
    };
    line(kColumns);
    out += "|";
    for (const auto w : width)
        out += std::string(w + 2, '-') + "|";
    out += '\n';
    for (const auto& row : body)
        line(row);
    out += "Total: " + std::to_string(plan.tasks.size()) + " engines, " + number(plan.total_cost_usd) + " USD, " +
           number(plan.total_labor_hours) + " labor hours\n";
    return out;
}

std::string render_csv(const MaintenancePlan& plan)
{
    std::string out;
    const auto line = [&](const auto& cells) {
        for (std::size_t c = 0; c < kColumns.size(); ++c) {
            if (c > 0)
                out += ',';
            out += csv_field(std::string(cells[c]));
        }
        out += '\n';
    };
    line(kColumns);
    for (const auto& row : rows(plan))
        line(row);
    return out;
}

} // namespace intentops::maintenance
