// SPDX-License-Identifier: Apache-2.0
#include "intentops/fleet/cmapss.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

namespace intentops::fleet {

MalformedLine::MalformedLine(std::size_t line_number, std::string detail)
    : std::runtime_error("line " + std::to_string(line_number) + ": " + detail), line_number_(line_number),
      detail_(std::move(detail))
{
}

namespace {

bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i]))
            ++i;
        const auto start = i;
        while (i < line.size() && !is_space(line[i]))
            ++i;
        if (i > start)
            fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

double to_double(std::string_view field, std::size_t column, std::size_t line_number)
{
    double value = 0.0;
    const auto* first = field.data();
    if (!field.empty() && field.front() == '+')
        ++first;
    const auto [end, error] = std::from_chars(first, field.data() + field.size(), value);
    if (error != std::errc{} || end != field.data() + field.size() || !std::isfinite(value))
        throw MalformedLine(line_number,
                            "field " + std::to_string(column) + " is not numeric: '" + std::string(field) + "'");
    return value;
}

int to_positive_int(std::string_view field, std::size_t column, std::size_t line_number)
{
    const double value = to_double(field, column, line_number);
    if (value != std::floor(value) || value < 1 || value > 2147483647.0)
        throw MalformedLine(line_number, "field " + std::to_string(column) + " must be a positive integer: '" +
                                             std::string(field) + "'");
    return static_cast<int>(value);
}

bool blank(std::string_view line)
{
    for (char c : line)
        if (!is_space(c))
            return false;
    return true;
}

} // namespace

EngineRecord parse_cmapss_line(std::string_view line, std::size_t line_number)
{
    const auto fields = split_fields(line);
    if (fields.size() != kFieldCount)
        throw MalformedLine(line_number, "expected " + std::to_string(kFieldCount) + " fields, found " +
                                             std::to_string(fields.size()));
    EngineRecord record;
    record.engine_id = make_engine_id(to_positive_int(fields[0], 1, line_number));
    record.cycle = to_positive_int(fields[1], 2, line_number);
    for (std::size_t i = 0; i < kSettingCount; ++i)
        record.op_settings[i] = to_double(fields[2 + i], 3 + i, line_number);
    for (std::size_t i = 0; i < kSensorCount; ++i)
        record.sensors[i] = to_double(fields[2 + kSettingCount + i], 3 + kSettingCount + i, line_number);
    return record;
}

std::vector<EngineRecord> parse_cmapss(std::istream& input)
{
    std::vector<EngineRecord> records;
    std::string line;
    for (std::size_t number = 1; std::getline(input, line); ++number) {
        if (blank(line))
            continue;
        records.push_back(parse_cmapss_line(line, number));
    }
    return records;
}

ParseReport parse_cmapss_report(std::istream& input)
{
    ParseReport report;
    std::string line;
    for (std::size_t number = 1; std::getline(input, line); ++number) {
        if (blank(line))
            continue;
        ++report.data_lines;
        try {
            report.records.push_back(parse_cmapss_line(line, number));
        } catch (const MalformedLine& error) {
            report.errors.push_back({error.line_number(), error.detail()});
        }
    }
    return report;
}

std::vector<EngineRecord> parse_cmapss_file(const std::filesystem::path& path)
{
    std::ifstream input(path);
    if (!input)
        throw std::runtime_error("cannot open dataset file " + path.string());
    return parse_cmapss(input);
}

std::string serialize_cmapss(std::span<const EngineRecord> records)
{
    std::string out;
    char buffer[64];
    auto append = [&](double value) {
        const auto [end, error] = std::to_chars(buffer, buffer + sizeof buffer, value);
        (void)error;
        out.append(buffer, end);
    };
    for (const auto& record : records) {
        out += std::to_string(to_int(record.engine_id));
        out += ' ';
        out += std::to_string(record.cycle);
        for (double value : record.op_settings) {
            out += ' ';
            append(value);
        }
        for (double value : record.sensors) {
            out += ' ';
            append(value);
        }
        out += '\n';
    }
    return out;
}

} // namespace intentops::fleet
