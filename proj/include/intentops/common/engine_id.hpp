// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

namespace intentops {

/// Fleet-wide engine identifier (the CMAPSS unit number).
enum class EngineId : std::int32_t {};

constexpr EngineId make_engine_id(std::int32_t value) noexcept
{
    return static_cast<EngineId>(value);
}

constexpr std::int32_t to_int(EngineId id) noexcept
{
    return static_cast<std::int32_t>(id);
}

inline std::string to_string(EngineId id)
{
    return std::to_string(to_int(id));
}

} // namespace intentops
