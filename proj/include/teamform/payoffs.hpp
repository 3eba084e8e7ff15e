#pragma once

#include <cmath>
#include <optional>
#include <unordered_map>
#include <variant>
#include <vector>

#include "teamform/types.hpp"

namespace teamform {

// Payoff families. Linear and EqualSplit are evaluated in exact rational
// arithmetic, Table stores whatever it was built from, Publishing is
// floating point.

struct Linear {
    Rat v;  // > 0, per-membership payoff
};

struct EqualSplit {};

/// Lookup table keyed by the canonical state encoding (the bitset itself,
/// which is order-independent). Must cover every feasible state of the model
/// it is attached to.
struct Table {
    std::unordered_map<std::uint64_t, std::vector<Util>> utilities;
};

struct Publishing {
    double U = 1.0;
    double V = 1.0;
    std::vector<double> phi;    // per project, > 0; empty means identically 1
    std::vector<double> pgood;  // per project, in (0,1]; empty means identically 1
};

using PayoffFn = std::variant<Linear, EqualSplit, Table, Publishing>;

/// Table-builder helper: base payoff v per membership plus bonus b on
/// projects whose participant set equals a designated pair of agents.
struct AffinityBonus {
    Rat v;                    // > 0
    Rat b;                    // >= 0
    std::uint32_t pair_mask;  // participant set that earns the bonus
};

inline int membership_count(State x, const Technology& tech, AgentId i) {
    int c = 0;
    for (int pi : x.members())
        if (tech.projects[pi].time[i] > 0) ++c;
    return c;
}

inline double publishing_phi(const Publishing& pub, int project) {
    return pub.phi.empty() ? 1.0 : pub.phi[project];
}
inline double publishing_pgood(const Publishing& pub, int project) {
    return pub.pgood.empty() ? 1.0 : pub.pgood[project];
}

inline Util eval_payoff(const PayoffFn& payoff, const Technology& tech, State x, AgentId i) {
    if (const auto* lin = std::get_if<Linear>(&payoff))
        return Util(lin->v * membership_count(x, tech, i));
    if (std::get_if<EqualSplit>(&payoff)) {
        Rat sum(0);
        for (int pi : x.members()) {
            const auto& p = tech.projects[pi];
            if (p.time[i] > 0) sum += Rat(1, static_cast<long long>(participants(p).size()));
        }
        return Util(sum);
    }
    if (const auto* tab = std::get_if<Table>(&payoff)) {
        auto it = tab->utilities.find(x.bits);
        if (it == tab->utilities.end())
            throw ConfigError("table payoff does not cover state with project set bits=" +
                              std::to_string(x.bits));
        return it->second[i];
    }
    const auto& pub = std::get<Publishing>(payoff);
    if (x.empty()) return Util::real(0.0);
    double total_phi = 0.0;
    for (int pi : x.members()) total_phi += publishing_phi(pub, pi);
    double u = 0.0;
    for (int pi : x.members()) {
        const auto& p = tech.projects[pi];
        if (p.time[i] > 0) {
            double team_size = static_cast<double>(participants(p).size());
            u += pub.U * publishing_phi(pub, pi) / total_phi +
                 pub.V / team_size * publishing_pgood(pub, pi);
        }
    }
    return Util::real(u);
}

inline bool payoff_is_exact(const PayoffFn& payoff) {
    return !std::holds_alternative<Publishing>(payoff);
}

/// Marginal utility of joining a new project, computed two ways: from the
/// definition (always) and from the closed-form expression, which applies
/// when the agent joins the new project and the state is nonempty.
struct MarginalCheck {
    double direct = 0.0;
    std::optional<double> closed_form;
};

inline MarginalCheck publishing_marginal_check(const PayoffFn& payoff, const Technology& tech,
                                               State x, int new_project, AgentId i) {
    const auto* pub = std::get_if<Publishing>(&payoff);
    if (!pub) throw ConfigError("publishing_marginal_check requires the publishing family");
    if (x.contains(new_project)) throw ConfigError("publishing_marginal_check: project already in state");

    MarginalCheck out;
    out.direct = eval_payoff(payoff, tech, x.with(new_project), i).approx() -
                 eval_payoff(payoff, tech, x, i).approx();

    double phi_other = 0.0, phi_total = 0.0;
    for (int pi : x.members()) {
        double f = publishing_phi(*pub, pi);
        phi_total += f;
        if (tech.projects[pi].time[i] == 0) phi_other += f;
    }
    const auto& pnew = tech.projects[new_project];
    if (pnew.time[i] > 0 && phi_total > 0.0) {
        double fp = publishing_phi(*pub, new_project);
        out.closed_form = pub->U * fp * phi_other / ((phi_total + fp) * phi_total) +
                          pub->V * publishing_pgood(*pub, new_project) /
                              static_cast<double>(participants(pnew).size());
    }
    return out;
}

inline Table make_affinity_table(const std::vector<State>& states, const Technology& tech,
                                 const AffinityBonus& aff) {
    int n = tech.projects.empty() ? 0 : static_cast<int>(tech.projects.front().time.size());
    Table tab;
    for (State x : states) {
        std::vector<Util> u(n, Util(Rat(0)));
        for (int pi : x.members()) {
            const auto& p = tech.projects[pi];
            bool bonus = participant_mask(p) == aff.pair_mask;
            for (int i = 0; i < n; ++i)
                if (p.time[i] > 0) u[i] += Util(bonus ? aff.v + aff.b : aff.v);
        }
        tab.utilities.emplace(x.bits, std::move(u));
    }
    return tab;
}

}  // namespace teamform
