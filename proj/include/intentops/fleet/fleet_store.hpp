// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "intentops/common/engine_id.hpp"
#include "intentops/fleet/cmapss.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace intentops::fleet {

enum class EngineStatus { Running, Stopped };

struct EngineSnapshot
{
    EngineId engine_id{};
    int observed_cycle = 1;
    int last_cycle = 1;
    int rul = 0;
    std::array<double, kSettingCount> op_settings{};
    std::array<double, kSensorCount> sensors{};
    EngineStatus status = EngineStatus::Running;

    bool operator==(const EngineSnapshot&) const = default;

    /// rul, settings and sensors keyed by metric vocabulary name.
    std::map<std::string, double> metrics() const;
};

struct RulPrediction
{
    EngineId engine_id{};
    int rul = 0;
    std::string method = "ground_truth";
};

/// Observation fixture: observed_cycle = last_cycle - rul for every listed
/// engine. `stopped` engines start out of service.
struct FixturePolicy
{
    std::map<EngineId, int> rul;
    std::set<EngineId> stopped;
};

/// observed_cycle = ceil(fraction * last_cycle), at least 1.
struct FractionPolicy
{
    double fraction = 1.0;
};

struct LatestPolicy
{
};

using ObservationPolicy = std::variant<FixturePolicy, FractionPolicy, LatestPolicy>;

class FleetError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class UnknownEngine : public FleetError
{
public:
    explicit UnknownEngine(EngineId id);

    EngineId engine_id() const { return id_; }

private:
    EngineId id_;
};

class UnknownEngineInFixture : public FleetError
{
public:
    using FleetError::FleetError;
};

class FixtureRulExceedsLife : public FleetError
{
public:
    using FleetError::FleetError;
};

/// Single-writer, multi-reader store of the loaded fleet.
class FleetStore
{
public:
    struct Track
    {
        std::vector<EngineRecord> records;
        int observed_cycle = 1;
        EngineStatus status = EngineStatus::Running;
    };

    FleetStore(std::vector<EngineId> order, std::map<EngineId, Track> tracks);
    FleetStore(const FleetStore&) = delete;
    FleetStore& operator=(const FleetStore&) = delete;

    /// Insertion order (ascending id for loaded fleets).
    const std::vector<EngineId>& engine_ids() const { return order_; }
    bool contains(EngineId id) const;

    EngineSnapshot snapshot(EngineId id) const;
    std::vector<EngineSnapshot> snapshots() const;
    RulPrediction predict_rul(EngineId id) const;

    int last_cycle(EngineId id) const;
    /// Ground-truth RUL had the engine been observed at `cycle`.
    int rul_at(EngineId id, int cycle) const;

    /// Returns true when the status changed. Throws UnknownEngine.
    bool set_status(EngineId id, EngineStatus status);

    /// Moves running engines forward by `cycles`, capped at end of life.
    /// Stopped engines keep the telemetry of the cycle they stopped at.
    void advance(int cycles);

    /// Digest of observed cycles and statuses.
    std::uint64_t state_hash() const;

private:
    const Track& track(EngineId id) const;

    mutable std::shared_mutex mutex_;
    std::vector<EngineId> order_;
    std::map<EngineId, Track> tracks_;
};

/// Keeps the first `engine_limit` engines by id and places each engine's
/// observation point per `policy`. Cycles must run 1..last without gaps.
std::shared_ptr<FleetStore> load_fleet(const std::vector<EngineRecord>& records,
                                       std::size_t engine_limit,
                                       const ObservationPolicy& policy);

struct FleetFixture
{
    std::string dataset = "FD001";
    FixturePolicy policy;
};

/// Reads {"dataset": .., "engines": [{"engine_id", "rul", "status"?}, ..]}.
FleetFixture load_fixture(const std::filesystem::path& path);
FleetFixture parse_fixture(const nlohmann::json& document);

std::string_view to_string(EngineStatus status);

/// Snapshot document with snake_case attribute names.
nlohmann::json encode(const EngineSnapshot& snapshot);
EngineSnapshot decode_snapshot(const nlohmann::json& document);
nlohmann::json encode(const RulPrediction& prediction);

} // namespace intentops::fleet
