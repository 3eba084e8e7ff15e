#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "teamform/model.hpp"

namespace teamform {

/// The enumerated feasible-state lattice with its Hasse structure and the
/// distinguished sets M (maximal) and L (maximum project count).
struct StateSpace {
    std::vector<State> states;                          // sorted by (size, lex)
    std::unordered_map<std::uint64_t, int> index_of;    // bits -> index
    std::vector<std::vector<std::pair<int, int>>> hasse_up;  // (project, successor index)
    std::vector<int> maximal;                           // indices, ascending
    std::vector<int> max_projects;                      // indices, ascending
    std::vector<std::vector<int>> by_size;

    // Equivalence classes of states that coincide up to activity labels,
    // i.e. that carry the same multiset of team vectors. The paper's figures
    // count these classes rather than labeled states.
    std::vector<int> class_id;
    int num_classes = 0;

    int index(State x) const {
        auto it = index_of.find(x.bits);
        return it == index_of.end() ? -1 : it->second;
    }
    bool contains(State x) const { return index_of.count(x.bits) != 0; }
};

/// Lexicographic order on ascending project-index lists, sizes first.
inline bool state_order(State a, State b) {
    if (a.size() != b.size()) return a.size() < b.size();
    auto ma = a.members(), mb = b.members();
    return ma < mb;
}

inline StateSpace enumerate_states(const Model& m) {
    validate_model(m);
    const int np = static_cast<int>(m.technology.projects.size());

    std::unordered_set<std::uint64_t> seen;
    std::queue<State> frontier;
    std::vector<State> all;
    seen.insert(0);
    frontier.push(State{});
    all.push_back(State{});
    while (!frontier.empty()) {
        State x = frontier.front();
        frontier.pop();
        auto usage = resource_usage(x, m.technology);
        if (usage.empty()) usage.assign(m.n, 0);
        for (int p = 0; p < np; ++p) {
            if (x.contains(p) || !can_add(x, p, m, usage)) continue;
            State y = x.with(p);
            if (seen.insert(y.bits).second) {
                if (seen.size() > m.guards.max_states)
                    throw CapacityError("state enumeration exceeded the guard limit of " +
                                        std::to_string(m.guards.max_states) + " states");
                frontier.push(y);
                all.push_back(y);
            }
        }
    }

    StateSpace space;
    std::sort(all.begin(), all.end(), state_order);
    space.states = std::move(all);
    for (int i = 0; i < static_cast<int>(space.states.size()); ++i)
        space.index_of[space.states[i].bits] = i;

    space.hasse_up.resize(space.states.size());
    int max_l = 0;
    for (int i = 0; i < static_cast<int>(space.states.size()); ++i) {
        State x = space.states[i];
        max_l = std::max(max_l, x.size());
        for (int p = 0; p < np; ++p) {
            if (x.contains(p)) continue;
            auto it = space.index_of.find(x.with(p).bits);
            if (it != space.index_of.end()) space.hasse_up[i].push_back({p, it->second});
        }
        if (space.hasse_up[i].empty()) space.maximal.push_back(i);
    }
    space.by_size.resize(max_l + 1);
    for (int i = 0; i < static_cast<int>(space.states.size()); ++i) {
        if (space.states[i].size() == max_l) space.max_projects.push_back(i);
        space.by_size[space.states[i].size()].push_back(i);
    }

    // class key: sorted multiset of team vectors
    std::map<std::vector<std::vector<int>>, int> classes;
    space.class_id.resize(space.states.size());
    for (int i = 0; i < static_cast<int>(space.states.size()); ++i) {
        std::vector<std::vector<int>> key;
        for (int pi : space.states[i].members()) key.push_back(m.technology.projects[pi].time);
        std::sort(key.begin(), key.end());
        auto [it, inserted] = classes.emplace(std::move(key), static_cast<int>(classes.size()));
        (void)inserted;
        space.class_id[i] = it->second;
    }
    space.num_classes = static_cast<int>(classes.size());
    return space;
}

inline std::vector<State> maximal_states(const StateSpace& space) {
    std::vector<State> out;
    for (int i : space.maximal) out.push_back(space.states[i]);
    return out;
}

inline std::vector<State> max_project_states(const StateSpace& space) {
    std::vector<State> out;
    for (int i : space.max_projects) out.push_back(space.states[i]);
    return out;
}

/// Number of distinct classes among a set of state indices.
inline int class_count(const StateSpace& space, const std::vector<int>& indices) {
    std::unordered_set<int> ids;
    for (int i : indices) ids.insert(space.class_id[i]);
    return static_cast<int>(ids.size());
}

}  // namespace teamform
