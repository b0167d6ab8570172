// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "intentops/common/engine_id.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace intentops::fleet {

inline constexpr std::size_t kSettingCount = 3;
inline constexpr std::size_t kSensorCount = 21;
inline constexpr std::size_t kFieldCount = 2 + kSettingCount + kSensorCount;

/// One CMAPSS row: unit, cycle, three operational settings, 21 sensors.
struct EngineRecord
{
    EngineId engine_id{};
    int cycle = 1;
    std::array<double, kSettingCount> op_settings{};
    std::array<double, kSensorCount> sensors{};

    bool operator==(const EngineRecord&) const = default;
};

class MalformedLine : public std::runtime_error
{
public:
    MalformedLine(std::size_t line_number, std::string detail);

    std::size_t line_number() const { return line_number_; }
    const std::string& detail() const { return detail_; }

private:
    std::size_t line_number_;
    std::string detail_;
};

struct LineError
{
    std::size_t line_number = 0;
    std::string detail;
};

struct ParseReport
{
    std::vector<EngineRecord> records;
    std::vector<LineError> errors;
    /// Non-blank lines seen.
    std::size_t data_lines = 0;
};

/// Parses one line. Throws MalformedLine tagged with `line_number`.
EngineRecord parse_cmapss_line(std::string_view line, std::size_t line_number);

/// Stops at the first bad line (MalformedLine). Blank lines are skipped.
std::vector<EngineRecord> parse_cmapss(std::istream& input);
/// Keeps going and collects every bad line.
ParseReport parse_cmapss_report(std::istream& input);

std::vector<EngineRecord> parse_cmapss_file(const std::filesystem::path& path);

/// Shortest round-trip decimal text, one record per line.
std::string serialize_cmapss(std::span<const EngineRecord> records);

} // namespace intentops::fleet
