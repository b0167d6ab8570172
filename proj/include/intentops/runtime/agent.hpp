// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "intentops/runtime/tool.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace intentops::runtime {

struct AgentSpec
{
    std::string name;
    std::string role_instructions;
    std::vector<std::string> tool_names;
    std::vector<std::string> sub_agent_names;
    int max_steps = 8;
};

class InvalidAgentGraph : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

/// Agents by name. The sub-agent graph is kept acyclic at insertion time;
/// references to agents added later are allowed until validate().
class AgentDirectory
{
public:
    /// Throws InvalidAgentGraph on duplicate names, self delegation,
    /// non-positive step budgets or a cycle through known agents.
    void add(AgentSpec spec);

    const AgentSpec* find(std::string_view name) const;
    std::vector<std::string> names() const;

    /// Dangling sub-agent references and tools missing from the registry.
    std::vector<std::string> validate(const ToolRegistry& registry) const;

private:
    bool reaches(const std::string& from, const std::string& target) const;

    std::map<std::string, AgentSpec, std::less<>> agents_;
};

} // namespace intentops::runtime
