#pragma once

#include <optional>

#include "teamform/lattice.hpp"

namespace teamform {

/// Report on the paper-style structural (t1/s1/s2) and payoff (v0/v1/v2)
/// assumptions, checked exhaustively over the enumerated lattice.
struct AssumptionReport {
    bool t1 = false;
    bool s1 = false;
    std::optional<int> s1_k;
    bool s2 = false;
    bool v0 = false;
    bool v1 = false;
    bool v2 = false;
    std::optional<Util> v2_v;
};

inline AssumptionReport check_assumptions(const Model& m, const StateSpace& space) {
    AssumptionReport rep;
    const auto& projects = m.technology.projects;
    const double tol = payoff_is_exact(m.payoff) ? 0.0 : m.numeric_tolerance;

    rep.t1 = true;
    for (const auto& p : projects)
        for (int t : p.time)
            if (t != 0 && t != 1) rep.t1 = false;

    if (!projects.empty()) {
        int k = static_cast<int>(participants(projects.front()).size());
        rep.s1 = std::all_of(projects.begin(), projects.end(), [&](const Project& p) {
            return static_cast<int>(participants(p).size()) == k;
        });
        if (rep.s1) rep.s1_k = k;
        rep.s2 = rep.s1 && k == 2;
    }

    // v0: every one-project extension inside X strictly benefits each member
    rep.v0 = true;
    for (int xi = 0; xi < static_cast<int>(space.states.size()) && rep.v0; ++xi) {
        State x = space.states[xi];
        for (const auto& [p, yi] : space.hasse_up[xi]) {
            State y = space.states[yi];
            for (AgentId i : participants(projects[p])) {
                if (!Util::gt(eval(m, y, i), eval(m, x, i), tol)) {
                    rep.v0 = false;
                    break;
                }
            }
            if (!rep.v0) break;
        }
    }

    // v1: aggregate utility equals the project count in every state
    rep.v1 = true;
    for (State x : space.states) {
        Util sum;
        for (AgentId i = 0; i < m.n; ++i) sum += eval(m, x, i);
        if (!Util::eq(sum, Util(Rat(x.size())), tol)) {
            rep.v1 = false;
            break;
        }
    }

    // v2: fit v from any nonzero membership, then verify globally
    std::optional<Util> v;
    for (State x : space.states) {
        for (AgentId i = 0; i < m.n && !v; ++i) {
            int c = membership_count(x, m.technology, i);
            if (c > 0) {
                Util u = eval(m, x, i);
                v = u.exact() ? Util(u.rat() / c) : Util::real(u.approx() / c);
            }
        }
        if (v) break;
    }
    rep.v2 = true;
    if (!v) {
        rep.v2 = projects.empty();  // vacuous without any membership
    } else {
        for (State x : space.states) {
            for (AgentId i = 0; i < m.n; ++i) {
                Util expected = *v * Rat(membership_count(x, m.technology, i));
                if (!v->exact())
                    expected = Util::real(v->approx() * membership_count(x, m.technology, i));
                if (!Util::eq(eval(m, x, i), expected, tol)) {
                    rep.v2 = false;
                    break;
                }
            }
            if (!rep.v2) break;
        }
        if (rep.v2) rep.v2_v = *v;
    }
    return rep;
}

}  // namespace teamform
