#pragma once

// Shared helpers for the test battery: deterministic random models and
// independent brute-force oracles that deliberately avoid the library's own
// search shortcuts.

#include <limits>
#include <random>

#include "teamform/teamform.hpp"

namespace tftest {

using namespace teamform;

/// Random technology with a Linear payoff. Strict per-membership gains make
/// non-satiation hold by construction.
inline Model random_linear_model(std::mt19937_64& rng, int max_n = 5, int max_p = 8) {
    auto pick = [&](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    Model m;
    m.n = pick(2, max_n);
    for (int i = 0; i < m.n; ++i) {
        m.agent_names.push_back("a" + std::to_string(i));
        m.endowments.push_back(pick(1, 3));
    }
    m.technology.activities = {"act0", "act1"};
    int np = pick(1, max_p);
    std::set<std::pair<int, std::vector<int>>> seen;
    for (int attempts = 0; attempts < 200 && static_cast<int>(m.technology.projects.size()) < np;
         ++attempts) {
        Project p;
        p.activity = pick(0, 1);
        p.time.assign(m.n, 0);
        int members = pick(1, std::min(3, m.n));
        for (int k = 0; k < members; ++k) {
            int i = pick(0, m.n - 1);
            p.time[i] = pick(1, m.endowments[i]);
        }
        if (std::all_of(p.time.begin(), p.time.end(), [](int t) { return t == 0; })) continue;
        bool over = false;
        for (int i = 0; i < m.n; ++i)
            if (p.time[i] > m.endowments[i]) over = true;
        if (over) continue;
        if (!seen.insert({p.activity, p.time}).second) continue;
        m.technology.projects.push_back(std::move(p));
    }
    m.payoff = Linear{Rat(pick(1, 3), pick(1, 3))};
    validate_model(m);
    return m;
}

/// Unit-time variant: every membership costs exactly one unit, so the t1
/// assumption holds alongside v2.
inline Model random_unit_model(std::mt19937_64& rng, int max_n = 5, int max_p = 8) {
    Model m = random_linear_model(rng, max_n, max_p);
    for (auto& p : m.technology.projects)
        for (int& t : p.time)
            if (t > 1) t = 1;
    // re-deduplicate after clamping
    std::set<std::pair<int, std::vector<int>>> seen;
    std::vector<Project> kept;
    for (auto& p : m.technology.projects)
        if (seen.insert({p.activity, p.time}).second) kept.push_back(p);
    m.technology.projects = std::move(kept);
    validate_model(m);
    return m;
}

/// Feasible states by raw enumeration of all 2^|P| subsets.
inline std::vector<State> brute_states(const Model& m) {
    const int np = static_cast<int>(m.technology.projects.size());
    std::vector<State> out;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << np); ++b) {
        State x{b};
        if (is_feasible(x, m)) out.push_back(x);
    }
    std::sort(out.begin(), out.end(), state_order);
    return out;
}

/// Direct transcription of the coalitional-stability definition: coalitions,
/// deleted sets and formed sets all enumerated explicitly.
inline bool brute_blocked(const Model& m, const StateSpace& space, const UtilTable& util, int xi,
                          const Rat& c) {
    const int np = static_cast<int>(m.technology.projects.size());
    State x = space.states[xi];
    for (std::uint32_t C = 1; C < (1u << m.n); ++C) {
        std::vector<int> touched, formable;
        for (int p = 0; p < np; ++p) {
            std::uint32_t pm = participant_mask(m.technology.projects[p]);
            if (x.contains(p) && (pm & C)) touched.push_back(p);
            if (!x.contains(p) && (pm & ~C) == 0) formable.push_back(p);
        }
        for (std::uint32_t yb = 0; yb < (1u << touched.size()); ++yb) {
            State y{};
            for (std::size_t k = 0; k < touched.size(); ++k)
                if (yb & (1u << k)) y = y.with(touched[k]);
            for (std::uint32_t zb = 0; zb < (1u << formable.size()); ++zb) {
                if (yb == 0 && zb == 0) continue;
                State z{};
                for (std::size_t k = 0; k < formable.size(); ++k)
                    if (zb & (1u << k)) z = z.with(formable[k]);
                State target = (x - y) | z;
                int ti = space.index(target);
                if (ti < 0) continue;
                bool all_gain = true;
                for (AgentId i = 0; i < m.n && all_gain; ++i) {
                    if (!(C & (1u << i))) continue;
                    int exits = 0;
                    for (int p : y.members())
                        if (m.technology.projects[p].time[i] > 0) ++exits;
                    if (!Util::gt(util.u[ti][i] - Util(c * exits), util.u[xi][i], util.tol))
                        all_gain = false;
                }
                if (all_gain) return true;
            }
        }
    }
    return false;
}

inline std::vector<int> brute_cs_set(const Model& m, const StateSpace& space, const Rat& c) {
    UtilTable util = tabulate_utilities(m, space);
    std::vector<int> out;
    for (int xi = 0; xi < static_cast<int>(space.states.size()); ++xi)
        if (!brute_blocked(m, space, util, xi, c)) out.push_back(xi);
    return out;
}

struct BruteThresholds {
    std::optional<Rat> c_low, c_high;
};

/// Thresholds straight from their definition: min/max over every costless
/// blocking operation of the worst coalition member's gain.
inline BruteThresholds brute_thresholds(const Model& m, const StateSpace& space) {
    UtilTable util = tabulate_utilities(m, space);
    const int np = static_cast<int>(m.technology.projects.size());
    BruteThresholds th;
    for (int xi = 0; xi < static_cast<int>(space.states.size()); ++xi) {
        State x = space.states[xi];
        for (std::uint32_t C = 1; C < (1u << m.n); ++C) {
            std::vector<int> touched, formable;
            for (int p = 0; p < np; ++p) {
                std::uint32_t pm = participant_mask(m.technology.projects[p]);
                if (x.contains(p) && (pm & C)) touched.push_back(p);
                if (!x.contains(p) && (pm & ~C) == 0) formable.push_back(p);
            }
            for (std::uint32_t yb = 0; yb < (1u << touched.size()); ++yb) {
                State y{};
                for (std::size_t k = 0; k < touched.size(); ++k)
                    if (yb & (1u << k)) y = y.with(touched[k]);
                for (std::uint32_t zb = 0; zb < (1u << formable.size()); ++zb) {
                    if (yb == 0 && zb == 0) continue;
                    State z{};
                    for (std::size_t k = 0; k < formable.size(); ++k)
                        if (zb & (1u << k)) z = z.with(formable[k]);
                    State target = (x - y) | z;
                    int ti = space.index(target);
                    if (ti < 0) continue;
                    std::optional<Rat> worst;
                    bool all_gain = true;
                    for (AgentId i = 0; i < m.n && all_gain; ++i) {
                        if (!(C & (1u << i))) continue;
                        Util g = util.u[ti][i] - util.u[xi][i];
                        if (!Util::gt(g, Util(Rat(0)), util.tol)) {
                            all_gain = false;
                            break;
                        }
                        if (!worst || g.rat() < *worst) worst = g.rat();
                    }
                    if (!all_gain || !worst) continue;
                    if (!th.c_low || *worst < *th.c_low) th.c_low = *worst;
                    if (!th.c_high || *worst > *th.c_high) th.c_high = *worst;
                }
            }
        }
    }
    return th;
}

/// Least-error path between states under the destructive scheme: one tick
/// deletes any subset (one error per deletion) and then adds at most one
/// feasible project at no cost (valid under non-satiation). Plain Dijkstra
/// on the full state space.
inline std::vector<long long> error_path_costs(const Model& /*m*/, const StateSpace& space,
                                               int source) {
    constexpr long long INF = std::numeric_limits<long long>::max() / 4;
    const int nx = static_cast<int>(space.states.size());
    std::vector<long long> dist(nx, INF);
    dist[source] = 0;
    using Node = std::pair<long long, int>;
    std::priority_queue<Node, std::vector<Node>, std::greater<>> pq;
    pq.push({0, source});
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[v]) continue;
        State x = space.states[v];
        // deleting one project costs one error; chains of deletions compose
        for (int p : x.members()) {
            int u = space.index(x.without(p));
            if (d + 1 < dist[u]) {
                dist[u] = d + 1;
                pq.push({d + 1, u});
            }
        }
        // a free tick can add any single feasible project
        for (const auto& [p, u] : space.hasse_up[v]) {
            (void)p;
            if (d < dist[u]) {
                dist[u] = d;
                pq.push({d, u});
            }
        }
    }
    return dist;
}

/// Minimum-weight tree oriented toward `root`, by exhausting all parent
/// functions (feasible only for a handful of nodes).
inline long long brute_in_tree(int root, const std::vector<std::vector<long long>>& w) {
    const int n = static_cast<int>(w.size());
    std::vector<int> others;
    for (int v = 0; v < n; ++v)
        if (v != root) others.push_back(v);
    const int k = static_cast<int>(others.size());
    long long best = std::numeric_limits<long long>::max();
    std::vector<int> parent(k, 0);
    // each non-root picks a parent among the n-1 remaining nodes
    std::vector<int> choice(k, 0);
    while (true) {
        long long total = 0;
        std::vector<int> par(n, -1);
        for (int j = 0; j < k; ++j) {
            int v = others[j];
            int c = choice[j];
            int p = (c >= v) ? c + 1 : c;  // skip self
            par[v] = p;
            total += w[v][p];
        }
        // orientation toward root means following parents must reach root
        bool ok = true;
        for (int j = 0; j < k && ok; ++j) {
            int v = others[j], steps = 0;
            while (v != root && steps <= n) {
                v = par[v];
                ++steps;
            }
            if (v != root) ok = false;
        }
        if (ok && total < best) best = total;
        int j = 0;
        for (; j < k; ++j) {
            if (++choice[j] < n - 1) break;
            choice[j] = 0;
        }
        if (j == k) break;
    }
    return best;
}

}  // namespace tftest
