#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "teamform/base.hpp"

namespace teamform {

using AgentId = int;

/// Per-agent time budgets, every entry >= 1.
using Endowments = std::vector<int>;

/// A project is an activity performed by a team; the team vector records the
/// time each agent puts in. Identity is the (activity, time-vector) pair.
struct Project {
    int activity = 0;              // index into Technology::activities
    std::vector<int> time;         // length n, non-negative, not all zero
};

struct Technology {
    std::vector<std::string> activities;
    std::vector<Project> projects;
    bool unique_activity_per_state = false;
};

/// A set of project indices with bitset semantics. Bounded to 64 projects,
/// which covers the search guards by a wide margin.
struct State {
    std::uint64_t bits = 0;

    bool contains(int p) const { return (bits >> p) & 1u; }
    State with(int p) const { return State{bits | (std::uint64_t{1} << p)}; }
    State without(int p) const { return State{bits & ~(std::uint64_t{1} << p)}; }
    int size() const { return std::popcount(bits); }
    bool empty() const { return bits == 0; }

    friend State operator&(State a, State b) { return State{a.bits & b.bits}; }
    friend State operator|(State a, State b) { return State{a.bits | b.bits}; }
    /// Set difference a \ b.
    friend State operator-(State a, State b) { return State{a.bits & ~b.bits}; }
    friend bool operator==(State a, State b) { return a.bits == b.bits; }
    friend bool operator!=(State a, State b) { return a.bits != b.bits; }

    bool subset_of(State o) const { return (bits & ~o.bits) == 0; }

    std::vector<int> members() const {
        std::vector<int> out;
        for (std::uint64_t b = bits; b; b &= b - 1) out.push_back(std::countr_zero(b));
        return out;
    }
};

inline std::vector<AgentId> participants(const Project& p) {
    std::vector<AgentId> out;
    for (int i = 0; i < static_cast<int>(p.time.size()); ++i)
        if (p.time[i] > 0) out.push_back(i);
    return out;
}

/// Bitmask version of participants(p), for coalition arithmetic.
inline std::uint32_t participant_mask(const Project& p) {
    std::uint32_t m = 0;
    for (int i = 0; i < static_cast<int>(p.time.size()); ++i)
        if (p.time[i] > 0) m |= 1u << i;
    return m;
}

inline int total_hours(const Project& p) {
    return std::accumulate(p.time.begin(), p.time.end(), 0);
}

inline std::vector<int> resource_usage(State x, const Technology& tech) {
    std::vector<int> e(tech.projects.empty() ? 0 : tech.projects.front().time.size(), 0);
    for (int pi : x.members()) {
        const auto& t = tech.projects[pi].time;
        if (e.size() < t.size()) e.resize(t.size(), 0);
        for (std::size_t i = 0; i < t.size(); ++i) e[i] += t[i];
    }
    return e;
}

inline void validate_technology(const Technology& tech, const Endowments& w) {
    std::set<std::pair<int, std::vector<int>>> seen;
    for (const auto& p : tech.projects) {
        if (p.activity < 0 || p.activity >= static_cast<int>(tech.activities.size()))
            throw ConfigError("project references unknown activity");
        if (p.time.size() != w.size())
            throw ConfigError("project time vector length does not match agent count");
        if (std::all_of(p.time.begin(), p.time.end(), [](int t) { return t == 0; }))
            throw ConfigError("project '" + tech.activities[p.activity] +
                              "' has an all-zero time vector");
        for (std::size_t i = 0; i < p.time.size(); ++i) {
            if (p.time[i] < 0) throw ConfigError("negative time entry");
            if (p.time[i] > w[i])
                throw ConfigError("project '" + tech.activities[p.activity] +
                                  "' requires more time than agent " + std::to_string(i) +
                                  " is endowed with");
        }
        if (!seen.insert({p.activity, p.time}).second)
            throw ConfigError("duplicate (activity, time-vector) pair in technology");
    }
    if (tech.projects.size() > 64) throw ConfigError("technologies beyond 64 projects are not supported");
}

}  // namespace teamform
