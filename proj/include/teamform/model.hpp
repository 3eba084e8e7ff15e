#pragma once

#include <string>
#include <vector>

#include "teamform/payoffs.hpp"
#include "teamform/types.hpp"

namespace teamform {

/// The team formation quintuple: agents, endowments, technology and payoff,
/// plus the dynamics configuration. Immutable after construction.
struct Model {
    int n = 0;
    std::vector<std::string> agent_names;
    Endowments endowments;
    Technology technology;
    PayoffFn payoff = EqualSplit{};
    std::vector<Rat> draw_weights;  // per project, > 0; empty means uniform
    double numeric_tolerance = 1e-9;
    Guards guards;

    Rat draw_weight(int project) const {
        return draw_weights.empty() ? Rat(1) : draw_weights[project];
    }
};

inline void validate_model(const Model& m) {
    if (m.n <= 0) throw ConfigError("model needs at least one agent");
    if (static_cast<int>(m.endowments.size()) != m.n)
        throw ConfigError("endowment vector length does not match agent count");
    for (int wi : m.endowments)
        if (wi < 1) throw ConfigError("endowments must be positive");
    validate_technology(m.technology, m.endowments);
    if (!m.draw_weights.empty()) {
        if (m.draw_weights.size() != m.technology.projects.size())
            throw ConfigError("draw weight count does not match project count");
        for (const auto& w : m.draw_weights)
            if (w <= Rat(0)) throw ConfigError("draw weights must be strictly positive");
    }
    if (m.numeric_tolerance < 0) throw ConfigError("numeric tolerance must be non-negative");
}

inline bool is_feasible(State x, const Model& m) {
    auto e = resource_usage(x, m.technology);
    for (int i = 0; i < m.n; ++i)
        if (e[i] > m.endowments[i]) return false;
    if (m.technology.unique_activity_per_state) {
        std::uint64_t seen = 0;
        for (int pi : x.members()) {
            std::uint64_t bit = std::uint64_t{1} << m.technology.projects[pi].activity;
            if (seen & bit) return false;
            seen |= bit;
        }
    }
    return true;
}

/// Incremental feasibility: x feasible, is x + p still feasible?
inline bool can_add(State x, int p, const Model& m, const std::vector<int>& usage) {
    const auto& proj = m.technology.projects[p];
    for (int i = 0; i < m.n; ++i)
        if (usage[i] + proj.time[i] > m.endowments[i]) return false;
    if (m.technology.unique_activity_per_state) {
        for (int pi : x.members())
            if (m.technology.projects[pi].activity == proj.activity) return false;
    }
    return true;
}

inline int project_count(State x) { return x.size(); }

inline Util eval(const Model& m, State x, AgentId i) {
    return eval_payoff(m.payoff, m.technology, x, i);
}

}  // namespace teamform
