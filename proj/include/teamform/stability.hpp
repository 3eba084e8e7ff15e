#pragma once

#include <array>
#include <optional>
#include <vector>

#include "teamform/lattice.hpp"

namespace teamform {

/// Witness of a coalitional deviation from `origin`: the coalition deletes
/// `removed`, forms `added`, and every member strictly gains net of the
/// per-exit switching cost.
struct BlockingOperation {
    State origin;
    std::uint32_t coalition = 0;
    State removed;
    State added;
    Rat cost{0};
};

struct CostThresholds {
    std::optional<Util> c_low;
    std::optional<Util> c_high;
    long long defined_over = 0;  // number of supportable (x, y, z) moves at c = 0
};

struct FarsightedSet {
    std::vector<int> members;  // state indices, ascending
    bool certified_i = false;
    bool certified_ii = false;
    bool certified_iii = false;
};

enum class FarsightedMode { exhaustive, greedy };

/// Utilities of every agent in every state, computed once.
struct UtilTable {
    std::vector<std::vector<Util>> u;  // [state][agent]
    double tol = 0.0;
};

inline UtilTable tabulate_utilities(const Model& m, const StateSpace& space) {
    UtilTable t;
    t.tol = payoff_is_exact(m.payoff) ? 0.0 : m.numeric_tolerance;
    t.u.resize(space.states.size());
    for (std::size_t xi = 0; xi < space.states.size(); ++xi) {
        t.u[xi].reserve(m.n);
        for (AgentId i = 0; i < m.n; ++i) t.u[xi].push_back(eval(m, space.states[xi], i));
    }
    return t;
}

inline void check_search_guards(const Model& m) {
    if (m.n > m.guards.max_coalition_n)
        throw CapacityError("coalition search guard: n = " + std::to_string(m.n) + " exceeds " +
                            std::to_string(m.guards.max_coalition_n));
    if (static_cast<int>(m.technology.projects.size()) > m.guards.max_search_projects)
        throw CapacityError("coalition search guard: |P| = " +
                            std::to_string(m.technology.projects.size()) + " exceeds " +
                            std::to_string(m.guards.max_search_projects));
}

// ---------------------------------------------------------------------------
// Myopic team-wise stability

inline bool is_mts(const Model& m, const StateSpace& space, State x) {
    int xi = space.index(x);
    if (xi < 0) throw ConfigError("is_mts: state is not in the enumerated lattice");
    double tol = payoff_is_exact(m.payoff) ? 0.0 : m.numeric_tolerance;
    // (i) no member strictly prefers dropping one of her projects
    for (int p : x.members()) {
        State y = x.without(p);
        for (AgentId i : participants(m.technology.projects[p]))
            if (!Util::ge(eval(m, x, i), eval(m, y, i), tol)) return false;
    }
    // (ii) no addable project strictly benefits all of its members
    for (const auto& [p, yi] : space.hasse_up[xi]) {
        State y = space.states[yi];
        bool all_gain = true;
        for (AgentId i : participants(m.technology.projects[p]))
            if (!Util::gt(eval(m, y, i), eval(m, x, i), tol)) {
                all_gain = false;
                break;
            }
        if (all_gain) return false;
    }
    return true;
}

inline std::vector<int> mts_set(const Model& m, const StateSpace& space) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(space.states.size()); ++i)
        if (is_mts(m, space, space.states[i])) out.push_back(i);
    return out;
}

// ---------------------------------------------------------------------------
// Coalitional stability

/// For the move x -> x' the deleted and formed sets are forced: y = x \ x'
/// and z = x' \ x. An agent supports the move if she strictly gains net of
/// the exit costs she pays. Returns the mask of supporting agents if some
/// coalition (necessarily a subset of that mask) can carry the move, and
/// nullopt otherwise.
inline std::optional<std::uint32_t> move_gainers(const Model& m, const StateSpace& space,
                                                 const UtilTable& util, int xi, int xj,
                                                 const Rat& c) {
    if (xi == xj) return std::nullopt;
    State x = space.states[xi], xp = space.states[xj];
    State y = x - xp, z = xp - x;
    std::uint32_t gain = 0;
    for (AgentId i = 0; i < m.n; ++i) {
        int exits = 0;
        for (int p : y.members())
            if (m.technology.projects[p].time[i] > 0) ++exits;
        Util net = util.u[xj][i] - Util(c * exits);
        if (Util::gt(net, util.u[xi][i], util.tol)) gain |= 1u << i;
    }
    // coalition must absorb all new-project members and touch every deleted one
    for (int p : z.members())
        if ((participant_mask(m.technology.projects[p]) & ~gain) != 0) return std::nullopt;
    for (int p : y.members())
        if ((participant_mask(m.technology.projects[p]) & gain) == 0) return std::nullopt;
    if (gain == 0) return std::nullopt;
    return gain;
}

namespace detail {

/// All coalition masks over n agents, ordered by size then lexicographically
/// on the ascending member list.
inline std::vector<std::uint32_t> coalition_order(int n) {
    std::vector<std::uint32_t> masks;
    for (std::uint32_t c = 1; c < (1u << n); ++c) masks.push_back(c);
    std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        if (pa != pb) return pa < pb;
        std::vector<int> la, lb;
        for (int i = 0; i < 32; ++i) {
            if (a & (1u << i)) la.push_back(i);
            if (b & (1u << i)) lb.push_back(i);
        }
        return la < lb;
    });
    return masks;
}

inline bool coalition_gains(const Model& m, const StateSpace& /*space*/, const UtilTable& util,
                            int xi, int xj, State y, std::uint32_t coalition, const Rat& c) {
    for (AgentId i = 0; i < m.n; ++i) {
        if (!(coalition & (1u << i))) continue;
        int exits = 0;
        for (int p : y.members())
            if (m.technology.projects[p].time[i] > 0) ++exits;
        Util net = util.u[xj][i] - Util(c * exits);
        if (!Util::gt(net, util.u[xi][i], util.tol)) return false;
    }
    return true;
}

template <typename Fn>
bool lex_subsets(const std::vector<int>& pool, std::size_t from, std::vector<int>& cur, Fn&& fn) {
    if (fn(cur)) return true;  // fn returns true to stop the whole enumeration
    for (std::size_t k = from; k < pool.size(); ++k) {
        cur.push_back(pool[k]);
        bool stop = lex_subsets(pool, k + 1, cur, fn);
        cur.pop_back();
        if (stop) return true;
    }
    return false;
}

}  // namespace detail

/// Deterministic witness search: coalitions by increasing size, then deleted
/// sets, then formed sets.
inline std::optional<BlockingOperation> find_blocking_operation(const Model& m,
                                                                const StateSpace& space, State x,
                                                                const Rat& c) {
    check_search_guards(m);
    if (c < Rat(0)) throw ConfigError("switching cost must be non-negative");
    int xi = space.index(x);
    if (xi < 0) throw ConfigError("find_blocking_operation: state is not in the lattice");
    UtilTable util = tabulate_utilities(m, space);

    const int np = static_cast<int>(m.technology.projects.size());
    for (std::uint32_t coalition : detail::coalition_order(m.n)) {
        std::vector<int> touched, addable;
        for (int p : x.members())
            if (participant_mask(m.technology.projects[p]) & coalition) touched.push_back(p);
        for (int p = 0; p < np; ++p)
            if (!x.contains(p) &&
                (participant_mask(m.technology.projects[p]) & ~coalition) == 0)
                addable.push_back(p);

        std::optional<BlockingOperation> found;
        std::vector<int> ycur;
        detail::lex_subsets(touched, 0, ycur, [&](const std::vector<int>& ylist) {
            State y{};
            for (int p : ylist) y = y.with(p);
            State base = x - y;
            std::vector<int> zcur;
            detail::lex_subsets(addable, 0, zcur, [&](const std::vector<int>& zlist) {
                if (ylist.empty() && zlist.empty()) return false;
                State z{};
                for (int p : zlist) z = z.with(p);
                State result = base | z;
                int ri = space.index(result);
                if (ri < 0) return false;
                if (detail::coalition_gains(m, space, util, xi, ri, y, coalition, c)) {
                    found = BlockingOperation{x, coalition, y, z, c};
                    return true;
                }
                return false;
            });
            return found.has_value();
        });
        if (found) return found;
    }
    return std::nullopt;
}

inline std::vector<int> cs_set(const Model& m, const StateSpace& space, const Rat& c) {
    check_search_guards(m);
    if (c < Rat(0)) throw ConfigError("switching cost must be non-negative");
    UtilTable util = tabulate_utilities(m, space);
    std::vector<int> out;
    const int nx = static_cast<int>(space.states.size());
    for (int xi = 0; xi < nx; ++xi) {
        bool blocked = false;
        for (int xj = 0; xj < nx && !blocked; ++xj)
            if (move_gainers(m, space, util, xi, xj, c)) blocked = true;
        if (!blocked) out.push_back(xi);
    }
    // CS(c) is always a subset of MTS
    auto mts = mts_set(m, space);
    for (int xi : out)
        if (!std::binary_search(mts.begin(), mts.end(), xi))
            throw std::logic_error("internal: CS state outside MTS");
    return out;
}

inline CostThresholds cost_thresholds(const Model& m, const StateSpace& space) {
    check_search_guards(m);
    UtilTable util = tabulate_utilities(m, space);
    CostThresholds th;
    const int nx = static_cast<int>(space.states.size());
    for (int xi = 0; xi < nx; ++xi) {
        for (int xj = 0; xj < nx; ++xj) {
            auto gainers = move_gainers(m, space, util, xi, xj, Rat(0));
            if (!gainers) continue;
            th.defined_over++;
            State x = space.states[xi], xp = space.states[xj];
            State y = x - xp, z = xp - x;
            auto gain_of = [&](AgentId i) { return util.u[xj][i] - util.u[xi][i]; };

            // lowest member gain over any supporting coalition: all gainers in
            std::optional<Util> low;
            for (AgentId i = 0; i < m.n; ++i) {
                if (!(*gainers & (1u << i))) continue;
                Util g = gain_of(i);
                if (!low || Util::lt(g, *low, util.tol)) low = g;
            }
            // highest achievable min-member gain: mandatory members are the
            // new-project participants plus one best representative per
            // deleted project
            std::optional<Util> high;
            auto fold_min = [&](Util g) {
                if (!high || Util::lt(g, *high, util.tol)) high = g;
            };
            for (int p : z.members())
                for (AgentId i : participants(m.technology.projects[p])) fold_min(gain_of(i));
            for (int p : y.members()) {
                std::optional<Util> best;
                std::uint32_t pm = participant_mask(m.technology.projects[p]) & *gainers;
                for (AgentId i = 0; i < m.n; ++i)
                    if (pm & (1u << i)) {
                        Util g = gain_of(i);
                        if (!best || Util::gt(g, *best, util.tol)) best = g;
                    }
                fold_min(*best);
            }
            if (!th.c_low || Util::lt(*low, *th.c_low, util.tol)) th.c_low = low;
            if (!th.c_high || Util::gt(*high, *th.c_high, util.tol)) th.c_high = high;
        }
    }
    return th;
}

/// One-step improving moves F(x): every state reachable by a single
/// coalition deviation, tagged with the deterministic witness coalition
/// (smallest, then lexicographic).
inline std::vector<std::pair<int, std::uint32_t>> improving_moves(const Model& m,
                                                                  const StateSpace& space,
                                                                  const UtilTable& util, int xi) {
    check_search_guards(m);
    static thread_local std::vector<std::uint32_t> order;
    static thread_local int order_n = -1;
    if (order_n != m.n) {
        order = detail::coalition_order(m.n);
        order_n = m.n;
    }
    std::vector<std::pair<int, std::uint32_t>> out;
    const int nx = static_cast<int>(space.states.size());
    for (int xj = 0; xj < nx; ++xj) {
        auto gainers = move_gainers(m, space, util, xi, xj, Rat(0));
        if (!gainers) continue;
        State x = space.states[xi], xp = space.states[xj];
        State y = x - xp, z = xp - x;
        std::uint32_t mandatory = 0;
        for (int p : z.members()) mandatory |= participant_mask(m.technology.projects[p]);
        std::uint32_t witness = 0;
        for (std::uint32_t cand : order) {
            if ((mandatory & ~cand) || (cand & ~*gainers)) continue;
            bool covers = true;
            for (int p : y.members())
                if ((participant_mask(m.technology.projects[p]) & cand) == 0) {
                    covers = false;
                    break;
                }
            if (covers) {
                witness = cand;
                break;
            }
        }
        out.push_back({xj, witness});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Farsighted stable sets

namespace detail {

struct FarsightedGraph {
    // moves[x] = one-step improving moves with witness coalitions
    std::vector<std::vector<std::pair<int, std::uint32_t>>> moves;
    // deterred[x-edge]: some witness-coalition member ends up below her
    // utility at x after a further move from the target
    std::vector<std::vector<char>> deterred;
};

inline FarsightedGraph build_farsighted_graph(const Model& m, const StateSpace& space,
                                              const UtilTable& util) {
    FarsightedGraph g;
    const int nx = static_cast<int>(space.states.size());
    g.moves.resize(nx);
    for (int xi = 0; xi < nx; ++xi) g.moves[xi] = improving_moves(m, space, util, xi);
    g.deterred.resize(nx);
    for (int xi = 0; xi < nx; ++xi) {
        g.deterred[xi].resize(g.moves[xi].size(), 0);
        for (std::size_t e = 0; e < g.moves[xi].size(); ++e) {
            auto [xj, coalition] = g.moves[xi][e];
            bool det = false;
            for (const auto& [xk, c2] : g.moves[xj]) {
                (void)c2;
                for (AgentId i = 0; i < m.n && !det; ++i)
                    if ((coalition & (1u << i)) &&
                        Util::lt(util.u[xk][i], util.u[xi][i], util.tol))
                        det = true;
                if (det) break;
            }
            g.deterred[xi][e] = det ? 1 : 0;
        }
    }
    return g;
}

/// Conditions (i) and (ii) for membership vector `in`.
inline bool conditions_i_ii(const FarsightedGraph& g, const std::vector<char>& in) {
    const int nx = static_cast<int>(in.size());
    for (int x = 0; x < nx; ++x) {
        if (in[x]) {
            for (std::size_t e = 0; e < g.moves[x].size(); ++e)
                if (!in[g.moves[x][e].first] && !g.deterred[x][e]) return false;
        } else {
            bool covered = false;
            for (const auto& [t, c] : g.moves[x]) {
                (void)c;
                if (in[t]) {
                    covered = true;
                    break;
                }
            }
            if (!covered) return false;
        }
    }
    return true;
}

inline bool is_minimal(const FarsightedGraph& g, const std::vector<int>& members, int nx) {
    if (members.size() > 20) return false;  // subset certification not attempted
    std::vector<char> in(nx, 0);
    std::uint32_t full = (members.size() >= 32) ? 0 : (1u << members.size());
    for (std::uint32_t sub = 1; sub + 1 < full; ++sub) {
        std::fill(in.begin(), in.end(), 0);
        for (std::size_t k = 0; k < members.size(); ++k)
            if (sub & (1u << k)) in[members[k]] = 1;
        if (conditions_i_ii(g, in)) return false;
    }
    return true;
}

}  // namespace detail

inline std::vector<FarsightedSet> farsighted_stable_sets(const Model& m, const StateSpace& space,
                                                         FarsightedMode mode) {
    check_search_guards(m);
    UtilTable util = tabulate_utilities(m, space);
    auto g = detail::build_farsighted_graph(m, space, util);
    const int nx = static_cast<int>(space.states.size());
    std::vector<FarsightedSet> out;

    if (mode == FarsightedMode::exhaustive) {
        if (nx > m.guards.farsighted_exhaustive_max)
            throw CapacityError("exhaustive farsighted search guard: |X| = " + std::to_string(nx) +
                                " exceeds " + std::to_string(m.guards.farsighted_exhaustive_max));
        std::vector<std::uint32_t> masks;
        for (std::uint32_t s = 1; s < (1u << nx); ++s) masks.push_back(s);
        std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
            int pa = std::popcount(a), pb = std::popcount(b);
            return pa != pb ? pa < pb : a < b;
        });
        std::vector<std::uint32_t> found;
        std::vector<char> in(nx);
        for (std::uint32_t s : masks) {
            bool superset = false;
            for (std::uint32_t f : found)
                if ((f & ~s) == 0) {
                    superset = true;
                    break;
                }
            if (superset) continue;
            for (int x = 0; x < nx; ++x) in[x] = (s >> x) & 1;
            if (!detail::conditions_i_ii(g, in)) continue;
            found.push_back(s);
            FarsightedSet fs;
            for (int x = 0; x < nx; ++x)
                if (in[x]) fs.members.push_back(x);
            fs.certified_i = fs.certified_ii = true;
            fs.certified_iii = true;  // minimal by increasing-size enumeration
            out.push_back(std::move(fs));
        }
        return out;
    }

    // Greedy: start from the whole lattice (which satisfies (i) and (ii)
    // trivially) and repeatedly drop the lowest-index state whose removal
    // keeps both conditions, until no single removal is possible.
    std::vector<char> in(nx, 1);
    std::vector<int> cover_count(nx, 0);  // |F(x) ∩ S| for every x
    std::vector<std::vector<std::pair<int, std::size_t>>> rev(nx);  // target -> (source, edge)
    for (int x = 0; x < nx; ++x)
        for (std::size_t e = 0; e < g.moves[x].size(); ++e) {
            rev[g.moves[x][e].first].push_back({x, e});
            cover_count[x]++;  // everything starts inside S
        }

    bool changed = true;
    while (changed) {
        changed = false;
        for (int s = 0; s < nx; ++s) {
            if (!in[s]) continue;
            // (ii) for s itself once outside
            if (cover_count[s] == 0) continue;
            bool only_cover_is_self = true;
            for (const auto& [t, c] : g.moves[s]) {
                (void)c;
                if (in[t] && t != s) {
                    only_cover_is_self = false;
                    break;
                }
            }
            if (only_cover_is_self) continue;
            // (ii) for states already outside that relied on s
            bool breaks = false;
            for (const auto& [src, e] : rev[s]) {
                (void)e;
                if (!in[src] && cover_count[src] <= 1) {
                    breaks = true;
                    break;
                }
            }
            if (breaks) continue;
            // (i) for inside states with an edge onto s
            for (const auto& [src, e] : rev[s]) {
                if (in[src] && src != s && !g.deterred[src][e]) {
                    breaks = true;
                    break;
                }
            }
            if (breaks) continue;
            in[s] = 0;
            for (const auto& [src, e] : rev[s]) {
                (void)e;
                cover_count[src]--;
            }
            changed = true;
        }
    }

    FarsightedSet fs;
    for (int x = 0; x < nx; ++x)
        if (in[x]) fs.members.push_back(x);
    fs.certified_i = fs.certified_ii = detail::conditions_i_ii(g, in);
    fs.certified_iii = detail::is_minimal(g, fs.members, nx);
    out.push_back(std::move(fs));
    return out;
}

/// Independent re-check of conditions (i)-(iii) for a candidate set.
inline std::array<bool, 3> verify_farsighted_set(const Model& m, const StateSpace& space,
                                                 const FarsightedSet& fs) {
    UtilTable util = tabulate_utilities(m, space);
    auto g = detail::build_farsighted_graph(m, space, util);
    std::vector<char> in(space.states.size(), 0);
    for (int x : fs.members) in[x] = 1;
    bool i_and_ii = detail::conditions_i_ii(g, in);
    bool minimal = detail::is_minimal(g, fs.members, static_cast<int>(space.states.size()));
    return {i_and_ii, i_and_ii, minimal};
}

}  // namespace teamform
