// SPDX-License-Identifier: Apache-2.0
#include "intentops/fleet/fleet_store.hpp"

#include "intentops/intent/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>

namespace intentops::fleet {

using nlohmann::json;

UnknownEngine::UnknownEngine(EngineId id) : FleetError("unknown engine " + to_string(id)), id_(id) {}

std::map<std::string, double> EngineSnapshot::metrics() const
{
    std::map<std::string, double> out;
    out.emplace(intent::kRulMetric, rul);
    for (std::size_t i = 0; i < kSettingCount; ++i)
        out.emplace(intent::kOperationalSettings[i].name, op_settings[i]);
    for (std::size_t i = 0; i < kSensorCount; ++i)
        out.emplace(intent::kSensors[i].name, sensors[i]);
    return out;
}

FleetStore::FleetStore(std::vector<EngineId> order, std::map<EngineId, Track> tracks)
    : order_(std::move(order)), tracks_(std::move(tracks))
{
}

bool FleetStore::contains(EngineId id) const
{
    return tracks_.contains(id);
}

const FleetStore::Track& FleetStore::track(EngineId id) const
{
    const auto it = tracks_.find(id);
    if (it == tracks_.end())
        throw UnknownEngine(id);
    return it->second;
}

namespace {

EngineSnapshot make_snapshot(EngineId id, const FleetStore::Track& track)
{
    const auto& record = track.records[static_cast<std::size_t>(track.observed_cycle - 1)];
    EngineSnapshot snapshot;
    snapshot.engine_id = id;
    snapshot.observed_cycle = track.observed_cycle;
    snapshot.last_cycle = static_cast<int>(track.records.size());
    snapshot.rul = snapshot.last_cycle - snapshot.observed_cycle;
    snapshot.op_settings = record.op_settings;
    snapshot.sensors = record.sensors;
    snapshot.status = track.status;
    return snapshot;
}

} // namespace

EngineSnapshot FleetStore::snapshot(EngineId id) const
{
    std::shared_lock lock(mutex_);
    return make_snapshot(id, track(id));
}

std::vector<EngineSnapshot> FleetStore::snapshots() const
{
    std::shared_lock lock(mutex_);
    std::vector<EngineSnapshot> out;
    out.reserve(order_.size());
    for (auto id : order_)
        out.push_back(make_snapshot(id, tracks_.at(id)));
    return out;
}

RulPrediction FleetStore::predict_rul(EngineId id) const
{
    std::shared_lock lock(mutex_);
    const auto& engine = track(id);
    return {id, static_cast<int>(engine.records.size()) - engine.observed_cycle, "ground_truth"};
}

int FleetStore::last_cycle(EngineId id) const
{
    std::shared_lock lock(mutex_);
    return static_cast<int>(track(id).records.size());
}

int FleetStore::rul_at(EngineId id, int cycle) const
{
    std::shared_lock lock(mutex_);
    const int last = static_cast<int>(track(id).records.size());
    if (cycle < 1 || cycle > last)
        throw std::out_of_range("cycle " + std::to_string(cycle) + " outside 1.." + std::to_string(last));
    return last - cycle;
}

bool FleetStore::set_status(EngineId id, EngineStatus status)
{
    std::unique_lock lock(mutex_);
    const auto it = tracks_.find(id);
    if (it == tracks_.end())
        throw UnknownEngine(id);
    const bool changed = it->second.status != status;
    it->second.status = status;
    return changed;
}

void FleetStore::advance(int cycles)
{
    if (cycles < 0)
        throw std::invalid_argument("cannot move the fleet backwards in time");
    std::unique_lock lock(mutex_);
    for (auto& [id, engine] : tracks_)
        if (engine.status == EngineStatus::Running)
            engine.observed_cycle =
                std::min(engine.observed_cycle + cycles, static_cast<int>(engine.records.size()));
}

std::uint64_t FleetStore::state_hash() const
{
    std::shared_lock lock(mutex_);
    std::uint64_t hash = 1469598103934665603ull;
    auto mix = [&hash](std::uint64_t value) {
        for (int i = 0; i < 8; ++i) {
            hash ^= (value >> (8 * i)) & 0xffu;
            hash *= 1099511628211ull;
        }
    };
    for (auto id : order_) {
        const auto& engine = tracks_.at(id);
        mix(static_cast<std::uint64_t>(to_int(id)));
        mix(static_cast<std::uint64_t>(engine.observed_cycle));
        mix(engine.status == EngineStatus::Stopped ? 1u : 0u);
    }
    return hash;
}

std::shared_ptr<FleetStore> load_fleet(const std::vector<EngineRecord>& records,
                                       std::size_t engine_limit,
                                       const ObservationPolicy& policy)
{
    std::map<EngineId, std::vector<EngineRecord>> grouped;
    for (const auto& record : records)
        grouped[record.engine_id].push_back(record);

    std::vector<EngineId> order;
    std::map<EngineId, FleetStore::Track> tracks;
    for (auto& [id, rows] : grouped) {
        if (order.size() >= engine_limit)
            break;
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.cycle < b.cycle; });
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].cycle != static_cast<int>(i + 1))
                throw FleetError("engine " + to_string(id) + ": cycles are not the contiguous sequence 1.." +
                                 std::to_string(rows.size()));
        order.push_back(id);
        tracks.emplace(id, FleetStore::Track{std::move(rows), 1, EngineStatus::Running});
    }

    if (const auto* fixture = std::get_if<FixturePolicy>(&policy)) {
        for (const auto& [id, rul] : fixture->rul)
            if (!tracks.contains(id))
                throw UnknownEngineInFixture("fixture names engine " + to_string(id) + ", which is not loaded");
        for (auto id : fixture->stopped)
            if (!tracks.contains(id))
                throw UnknownEngineInFixture("fixture names engine " + to_string(id) + ", which is not loaded");
        for (auto& [id, engine] : tracks) {
            const auto it = fixture->rul.find(id);
            if (it == fixture->rul.end())
                throw FleetError("fixture does not cover engine " + to_string(id));
            const int last = static_cast<int>(engine.records.size());
            if (it->second < 0 || it->second > last - 1)
                throw FixtureRulExceedsLife("engine " + to_string(id) + ": fixture RUL " +
                                            std::to_string(it->second) + " does not fit a life of " +
                                            std::to_string(last) + " cycles");
            engine.observed_cycle = last - it->second;
            if (fixture->stopped.contains(id))
                engine.status = EngineStatus::Stopped;
        }
    } else if (const auto* fraction = std::get_if<FractionPolicy>(&policy)) {
        if (!(fraction->fraction > 0.0 && fraction->fraction <= 1.0))
            throw std::invalid_argument("observation fraction must be in (0, 1]");
        for (auto& [id, engine] : tracks) {
            const auto last = static_cast<double>(engine.records.size());
            engine.observed_cycle = std::max(1, static_cast<int>(std::ceil(fraction->fraction * last)));
        }
    } else {
        for (auto& [id, engine] : tracks)
            engine.observed_cycle = static_cast<int>(engine.records.size());
    }

    return std::make_shared<FleetStore>(std::move(order), std::move(tracks));
}

FleetFixture parse_fixture(const json& document)
{
    FleetFixture fixture;
    try {
        fixture.dataset = document.value("dataset", std::string("FD001"));
        for (const auto& entry : document.at("engines")) {
            const auto id = make_engine_id(entry.at("engine_id").get<std::int32_t>());
            if (!fixture.policy.rul.emplace(id, entry.at("rul").get<int>()).second)
                throw FleetError("fixture lists engine " + to_string(id) + " twice");
            const auto status = entry.value("status", std::string("running"));
            if (status == "stopped")
                fixture.policy.stopped.insert(id);
            else if (status != "running")
                throw FleetError("fixture engine " + to_string(id) + ": unknown status '" + status + "'");
        }
    } catch (const json::exception& error) {
        throw FleetError(std::string("malformed fixture: ") + error.what());
    }
    return fixture;
}

FleetFixture load_fixture(const std::filesystem::path& path)
{
    std::ifstream input(path);
    if (!input)
        throw FleetError("cannot open fixture " + path.string());
    json document;
    try {
        document = json::parse(input);
    } catch (const json::exception& error) {
        throw FleetError("fixture " + path.string() + " is not valid JSON: " + error.what());
    }
    return parse_fixture(document);
}

std::string_view to_string(EngineStatus status)
{
    return status == EngineStatus::Running ? "running" : "stopped";
}

json encode(const EngineSnapshot& snapshot)
{
    json settings = json::object();
    for (std::size_t i = 0; i < kSettingCount; ++i)
        settings[std::string(intent::kOperationalSettings[i].name)] = snapshot.op_settings[i];
    json sensors = json::object();
    for (std::size_t i = 0; i < kSensorCount; ++i)
        sensors[std::string(intent::kSensors[i].name)] = snapshot.sensors[i];
    return {
        {"engine_id", to_int(snapshot.engine_id)},
        {"observed_cycle", snapshot.observed_cycle},
        {"last_cycle", snapshot.last_cycle},
        {"rul", snapshot.rul},
        {"status", to_string(snapshot.status)},
        {"op_settings", settings},
        {"sensors", sensors},
    };
}

EngineSnapshot decode_snapshot(const json& document)
{
    EngineSnapshot snapshot;
    snapshot.engine_id = make_engine_id(document.at("engine_id").get<std::int32_t>());
    snapshot.observed_cycle = document.at("observed_cycle").get<int>();
    snapshot.last_cycle = document.at("last_cycle").get<int>();
    snapshot.rul = document.at("rul").get<int>();
    snapshot.status = document.at("status").get<std::string>() == "stopped" ? EngineStatus::Stopped
                                                                             : EngineStatus::Running;
    const auto& settings = document.at("op_settings");
    for (std::size_t i = 0; i < kSettingCount; ++i)
        snapshot.op_settings[i] = settings.at(std::string(intent::kOperationalSettings[i].name)).get<double>();
    const auto& sensors = document.at("sensors");
    for (std::size_t i = 0; i < kSensorCount; ++i)
        snapshot.sensors[i] = sensors.at(std::string(intent::kSensors[i].name)).get<double>();
    return snapshot;
}

json encode(const RulPrediction& prediction)
{
    return {{"engine_id", to_int(prediction.engine_id)}, {"rul", prediction.rul}, {"method", prediction.method}};
}

} // namespace intentops::fleet
