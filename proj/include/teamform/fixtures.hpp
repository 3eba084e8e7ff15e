#pragma once

#include "teamform/lattice.hpp"

namespace teamform {

// Built-in example models used throughout the test battery and the CLI.

namespace detail {

inline Model base_model(std::vector<std::string> agents, Endowments w,
                        std::vector<std::string> activities) {
    Model m;
    m.n = static_cast<int>(agents.size());
    m.agent_names = std::move(agents);
    m.endowments = std::move(w);
    m.technology.activities = std::move(activities);
    return m;
}

}  // namespace detail

/// Four agents with two units each; activities a and b can each be done by
/// the pairs ij, jk or km with one unit apiece.
inline Model example_ex1() {
    Model m = detail::base_model({"i", "j", "k", "m"}, {2, 2, 2, 2}, {"a", "b"});
    const std::vector<std::vector<int>> teams = {{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    for (const auto& t : teams)
        for (int a = 0; a < 2; ++a) m.technology.projects.push_back({a, t});
    m.payoff = Linear{Rat(1, 2)};
    return m;
}

/// EX1 with a payoff table that pays j and k an extra unit for every project
/// they do together.
inline Model example_ex1_jk() {
    Model m = example_ex1();
    m.payoff = Linear{Rat(1)};  // placeholder for enumeration
    StateSpace space = enumerate_states(m);
    AffinityBonus aff{Rat(1), Rat(1), 0b0110u};  // pair {j, k}
    m.payoff = make_affinity_table(space.states, m.technology, aff);
    return m;
}

/// Four agents with three units each; ij and km pair up with a 1/2 time
/// split, jk with one unit each; three activities.
inline Model example_ex2() {
    Model m = detail::base_model({"i", "j", "k", "m"}, {3, 3, 3, 3}, {"a", "b", "c"});
    const std::vector<std::vector<int>> teams = {
        {1, 2, 0, 0}, {2, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 2}, {0, 0, 2, 1}};
    for (int a = 0; a < 3; ++a)
        for (const auto& t : teams) m.technology.projects.push_back({a, t});
    m.payoff = Linear{Rat(1, 2)};
    return m;
}

/// Mutual exclusivity via a fictitious agent: h has a single unit of time
/// and belongs to both teams, so the two projects can never coexist.
inline Model example_ex3() {
    Model m = detail::base_model({"i", "j", "k", "m", "h"}, {1, 1, 1, 1, 1}, {"a", "b"});
    m.technology.projects.push_back({0, {1, 1, 0, 0, 1}});
    m.technology.projects.push_back({1, {0, 0, 1, 1, 1}});
    m.payoff = Linear{Rat(1, 2)};
    return m;
}

/// The marriage problem: three women, four men, seven feasible pairs, one
/// unit of time each, so states are exactly the matchings.
inline Model example_mar() {
    Model m = detail::base_model({"w1", "w2", "w3", "m1", "m2", "m3", "m4"}, {1, 1, 1, 1, 1, 1, 1},
                                 {"match"});
    const std::vector<std::pair<int, int>> edges = {{0, 3}, {0, 4}, {1, 3}, {1, 4},
                                                    {2, 4}, {2, 5}, {2, 6}};
    for (auto [a, b] : edges) {
        std::vector<int> t(7, 0);
        t[a] = t[b] = 1;
        m.technology.projects.push_back({0, t});
    }
    m.payoff = EqualSplit{};
    return m;
}

/// The publishing model at desk scale: four homogeneous authors with two
/// units each, every team of size >= 2 allowed, U = V = 1, phi and pgood
/// identically one.
inline Model example_pub() {
    Model m = detail::base_model({"a1", "a2", "a3", "a4"}, {2, 2, 2, 2}, {"paper"});
    std::vector<std::vector<int>> teams;
    for (std::uint32_t s = 1; s < 16; ++s) {
        if (std::popcount(s) < 2) continue;
        std::vector<int> t(4, 0);
        for (int i = 0; i < 4; ++i)
            if (s & (1u << i)) t[i] = 1;
        teams.push_back(t);
    }
    std::sort(teams.begin(), teams.end(), [](const auto& a, const auto& b) {
        int sa = std::accumulate(a.begin(), a.end(), 0);
        int sb = std::accumulate(b.begin(), b.end(), 0);
        return sa != sb ? sa < sb : a < b;
    });
    for (const auto& t : teams) m.technology.projects.push_back({0, t});
    m.payoff = Publishing{};
    return m;
}

inline std::vector<std::string> builtin_example_names() {
    return {"EX1", "EX1-JK", "EX2", "EX3", "MAR", "PUB"};
}

inline Model builtin_example(const std::string& name) {
    if (name == "EX1") return example_ex1();
    if (name == "EX1-JK") return example_ex1_jk();
    if (name == "EX2") return example_ex2();
    if (name == "EX3") return example_ex3();
    if (name == "MAR") return example_mar();
    if (name == "PUB") return example_pub();
    throw ConfigError("unknown built-in example '" + name + "'");
}

}  // namespace teamform
