// SPDX-License-Identifier: Apache-2.0
#include "intentops/runtime/agent.hpp"

#include <set>

namespace intentops::runtime {

void AgentDirectory::add(AgentSpec spec)
{
    if (spec.name.empty())
        throw InvalidAgentGraph("agent name must not be empty");
    if (agents_.contains(spec.name))
        throw InvalidAgentGraph("agent '" + spec.name + "' is already registered");
    if (spec.max_steps <= 0)
        throw InvalidAgentGraph("agent '" + spec.name + "' needs a positive step budget");
    for (const auto& sub : spec.sub_agent_names) {
        if (sub == spec.name)
            throw InvalidAgentGraph("agent '" + spec.name + "' lists itself as a sub-agent");
        if (reaches(sub, spec.name))
            throw InvalidAgentGraph("delegating from '" + spec.name + "' to '" + sub + "' closes a cycle");
    }
    auto name = spec.name;
    agents_.emplace(std::move(name), std::move(spec));
}

bool AgentDirectory::reaches(const std::string& from, const std::string& target) const
{
    std::set<std::string> visited;
    std::vector<std::string> stack{from};
    while (!stack.empty()) {
        auto current = std::move(stack.back());
        stack.pop_back();
        if (current == target)
            return true;
        if (!visited.insert(current).second)
            continue;
        if (const auto it = agents_.find(current); it != agents_.end())
            for (const auto& sub : it->second.sub_agent_names)
                stack.push_back(sub);
    }
    return false;
}

const AgentSpec* AgentDirectory::find(std::string_view name) const
{
    const auto it = agents_.find(name);
    return it == agents_.end() ? nullptr : &it->second;
}

std::vector<std::string> AgentDirectory::names() const
{
    std::vector<std::string> out;
    for (const auto& [name, spec] : agents_)
        out.push_back(name);
    return out;
}

std::vector<std::string> AgentDirectory::validate(const ToolRegistry& registry) const
{
    std::vector<std::string> problems;
    for (const auto& [name, spec] : agents_) {
        for (const auto& sub : spec.sub_agent_names)
            if (!agents_.contains(sub))
                problems.push_back("agent '" + name + "' delegates to unknown agent '" + sub + "'");
        for (const auto& tool : spec.tool_names)
            if (!registry.contains(tool))
                problems.push_back("agent '" + name + "' uses unregistered tool '" + tool + "'");
    }
    return problems;
}

} // namespace intentops::runtime
