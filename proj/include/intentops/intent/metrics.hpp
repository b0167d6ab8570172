// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>

namespace intentops::intent {

/// One measurable attribute of an engine, in dataset column order.
struct MetricInfo
{
    std::string_view name;
    std::string_view label;
    std::string_view unit;
};

inline constexpr std::string_view kRulMetric = "rul";

inline constexpr std::array<MetricInfo, 3> kOperationalSettings{{
    {"speed", "Speed", "Ma"},
    {"altitude", "Altitude", "feet"},
    {"sea_level_temperature", "Sea level temperature", "°F"},
}};

inline constexpr std::array<MetricInfo, 21> kSensors{{
    {"fan_inlet_temperature", "Fan inlet temperature", "°R"},
    {"lpc_outlet_temperature", "LPC outlet temperature", "°R"},
    {"hpc_outlet_temperature", "HPC outlet temperature", "°R"},
    {"lpt_outlet_temperature", "LPT outlet temperature", "°R"},
    {"fan_inlet_pressure", "Fan inlet pressure", "psia"},
    {"bypass_duct_pressure", "Bypass-duct pressure", "psia"},
    {"hpc_outlet_pressure", "HPC outlet pressure", "psia"},
    {"physical_fan_speed", "Physical fan speed", "rpm"},
    {"physical_core_speed", "Physical core speed", "rpm"},
    {"engine_pressure_ratio", "Engine pressure ratio", "-"},
    {"hpc_outlet_static_pressure", "HPC outlet static pressure", "psia"},
    {"ratio_of_fuel_flow", "Ratio of fuel flow", "pps/psia"},
    {"corrected_fan_speed", "Corrected fan speed", "rpm"},
    {"corrected_core_speed", "Corrected core speed", "rpm"},
    {"bypass_ratio", "Bypass ratio", "-"},
    {"burner_fuel_air_ratio", "Burner fuel-air ratio", "-"},
    {"bleed_enthalpy", "Bleed enthalpy", "-"},
    {"required_fan_speed", "Required fan speed", "rpm"},
    {"required_fan_conversion_speed", "Required fan conversion speed", "rpm"},
    {"high_pressure_turbines_cool_air_flow", "High-pressure turbines cool air flow", "lbm/s"},
    {"low_pressure_turbines_cool_air_flow", "Low-pressure turbines cool air flow", "lbm/s"},
}};

/// Closed condition-subject vocabulary: rul, then settings, then sensors.
std::span<const std::string> metric_vocabulary();

bool is_known_metric(std::string_view name);

} // namespace intentops::intent
