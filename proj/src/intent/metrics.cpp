// SPDX-License-Identifier: Apache-2.0
#include "intentops/intent/metrics.hpp"

#include <algorithm>
#include <vector>

namespace intentops::intent {

std::span<const std::string> metric_vocabulary()
{
    static const std::vector<std::string> vocabulary = [] {
        std::vector<std::string> names;
        names.emplace_back(kRulMetric);
        for (const auto& setting : kOperationalSettings)
            names.emplace_back(setting.name);
        for (const auto& sensor : kSensors)
            names.emplace_back(sensor.name);
        return names;
    }();
    return vocabulary;
}

bool is_known_metric(std::string_view name)
{
    const auto vocabulary = metric_vocabulary();
    return std::find(vocabulary.begin(), vocabulary.end(), name) != vocabulary.end();
}

} // namespace intentops::intent
