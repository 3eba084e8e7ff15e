#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <vector>

#include "teamform/assumptions.hpp"
#include "teamform/stability.hpp"

namespace teamform {

enum class Scheme { unperturbed, uniform, uniform_destructive, coalition_wise };

/// Sparse row-stochastic transition structure over the lattice. Unperturbed
/// and coalition-wise chains carry exact rational rows; perturbed chains are
/// floating point.
struct ChainAnalysis {
    Scheme scheme = Scheme::unperturbed;
    bool exact = true;
    std::vector<std::vector<std::pair<int, Rat>>> exact_rows;
    std::vector<std::vector<std::pair<int, double>>> real_rows;
    std::vector<int> absorbing;  // state indices, ascending
    std::vector<int> recurrent;  // state indices, ascending
    double epsilon = 0.0;
    Rat cost{0};

    std::size_t size() const { return exact ? exact_rows.size() : real_rows.size(); }
    double prob(int from, int to) const {
        if (exact) {
            for (const auto& [t, p] : exact_rows[from])
                if (t == to) return boost::rational_cast<double>(p);
        } else {
            for (const auto& [t, p] : real_rows[from])
                if (t == to) return p;
        }
        return 0.0;
    }
};

struct ResistanceGraph {
    std::vector<int> nodes;                        // absorbing state indices
    std::vector<std::vector<long long>> weights;   // r*(x, x')
};

struct PotentialTable {
    std::vector<int> nodes;          // absorbing state indices
    std::vector<long long> gamma;    // stochastic potential per node
    std::vector<int> ss;             // argmin, as state indices
};

// ---------------------------------------------------------------------------
// Chains

inline ChainAnalysis build_unperturbed_chain(const Model& m, const StateSpace& space);

namespace detail {

/// Tarjan SCC over the positive-probability graph; fills recurrent (sink
/// components) and absorbing (self-loop probability one) members.
template <typename Rows, typename One>
void classify_from_rows(const Rows& rows, ChainAnalysis& chain, One is_one) {
    const int n = static_cast<int>(rows.size());
    std::vector<std::vector<int>> adj(n);
    for (int x = 0; x < n; ++x)
        for (const auto& [t, p] : rows[x]) {
            (void)p;
            if (t != x) adj[x].push_back(t);
        }
    std::vector<int> num(n, -1), low(n, 0), comp(n, -1), stack;
    std::vector<char> on_stack(n, 0);
    int counter = 0, ncomp = 0;
    // iterative Tarjan
    struct Frame {
        int v;
        std::size_t edge;
    };
    for (int s = 0; s < n; ++s) {
        if (num[s] != -1) continue;
        std::vector<Frame> call{{s, 0}};
        num[s] = low[s] = counter++;
        stack.push_back(s);
        on_stack[s] = 1;
        while (!call.empty()) {
            auto& [v, e] = call.back();
            if (e < adj[v].size()) {
                int w = adj[v][e++];
                if (num[w] == -1) {
                    num[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], num[w]);
                }
            } else {
                if (low[v] == num[v]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp[w] = ncomp;
                        if (w == v) break;
                    }
                    ncomp++;
                }
                call.pop_back();
                if (!call.empty()) {
                    int parent = call.back().v;
                    low[parent] = std::min(low[parent], low[v]);
                }
            }
        }
    }
    std::vector<char> is_sink(ncomp, 1);
    std::vector<int> comp_size(ncomp, 0);
    for (int x = 0; x < n; ++x) {
        comp_size[comp[x]]++;
        for (int t : adj[x])
            if (comp[t] != comp[x]) is_sink[comp[x]] = 0;
    }
    chain.recurrent.clear();
    chain.absorbing.clear();
    for (int x = 0; x < n; ++x) {
        if (!is_sink[comp[x]]) continue;
        chain.recurrent.push_back(x);
        if (comp_size[comp[x]] == 1) {
            for (const auto& [t, p] : rows[x])
                if (t == x && is_one(p)) chain.absorbing.push_back(x);
        }
    }
}

}  // namespace detail

inline void classify_recurrent(ChainAnalysis& chain) {
    if (chain.exact)
        detail::classify_from_rows(chain.exact_rows, chain, [](const Rat& p) { return p == Rat(1); });
    else
        detail::classify_from_rows(chain.real_rows, chain,
                                   [](double p) { return std::abs(p - 1.0) < 1e-12; });
}

/// Myopic team-wise dynamics: one project is drawn per tick and formed when
/// feasible and strictly beneficial to each participant.
inline ChainAnalysis build_unperturbed_chain(const Model& m, const StateSpace& space) {
    ChainAnalysis chain;
    chain.scheme = Scheme::unperturbed;
    chain.exact = true;
    const int np = static_cast<int>(m.technology.projects.size());
    double tol = payoff_is_exact(m.payoff) ? 0.0 : m.numeric_tolerance;
    Rat total(0);
    for (int p = 0; p < np; ++p) total += m.draw_weight(p);
    chain.exact_rows.resize(space.states.size());
    for (int xi = 0; xi < static_cast<int>(space.states.size()); ++xi) {
        State x = space.states[xi];
        std::map<int, Rat> row;
        for (int p = 0; p < np; ++p) {
            Rat q = m.draw_weight(p) / total;
            int target = xi;
            if (!x.contains(p)) {
                int yi = space.index(x.with(p));
                if (yi >= 0) {
                    bool all_gain = true;
                    for (AgentId i : participants(m.technology.projects[p]))
                        if (!Util::gt(eval(m, space.states[yi], i), eval(m, x, i), tol)) {
                            all_gain = false;
                            break;
                        }
                    if (all_gain) target = yi;
                }
            }
            row[target] += q;
        }
        if (np == 0) row[xi] = Rat(1);
        chain.exact_rows[xi].assign(row.begin(), row.end());
    }
    classify_recurrent(chain);
    return chain;
}

// ---------------------------------------------------------------------------
// Resistances and stochastic potentials

/// Closed-form resistance between absorbing states under non-satiation:
/// every project of x missing from x' must be destroyed by an error.
inline long long resistance(State x, State xp) {
    return x.size() - (x & xp).size();
}

inline ResistanceGraph build_resistance_graph(const StateSpace& space,
                                              const std::vector<int>& absorbing) {
    ResistanceGraph g;
    g.nodes = absorbing;
    const int n = static_cast<int>(absorbing.size());
    g.weights.assign(n, std::vector<long long>(n, 0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            g.weights[a][b] = resistance(space.states[absorbing[a]], space.states[absorbing[b]]);
    return g;
}

namespace detail {

/// Minimum-weight spanning arborescence with all edges directed away from
/// `root` (Chu-Liu/Edmonds, dense O(V^3) with deterministic tie-breaking).
inline long long min_out_arborescence(int root, int nv,
                                      const std::vector<std::vector<long long>>& w) {
    constexpr long long INF = std::numeric_limits<long long>::max() / 4;
    struct Edge {
        int from, to;
        long long w;
    };
    std::vector<Edge> edges;
    for (int u = 0; u < nv; ++u)
        for (int v = 0; v < nv; ++v)
            if (u != v) edges.push_back({u, v, w[u][v]});
    long long res = 0;
    int n = nv;
    int r = root;
    while (true) {
        std::vector<long long> in_w(n, INF);
        std::vector<int> in_from(n, -1);
        for (const auto& e : edges) {
            if (e.to != r && e.w < in_w[e.to]) {
                in_w[e.to] = e.w;
                in_from[e.to] = e.from;
            }
        }
        for (int v = 0; v < n; ++v)
            if (v != r && in_w[v] == INF) return INF;  // unreachable
        std::vector<int> id(n, -1), visited(n, -1);
        int groups = 0;
        for (int v = 0; v < n; ++v)
            if (v != r) res += in_w[v];
        for (int v = 0; v < n; ++v) {
            int u = v;
            while (u != r && visited[u] == -1 && id[u] == -1) {
                visited[u] = v;
                u = in_from[u];
            }
            if (u != r && id[u] == -1 && visited[u] == v) {  // found a new cycle
                int c = u;
                do {
                    id[c] = groups;
                    c = in_from[c];
                } while (c != u);
                groups++;
            }
        }
        if (groups == 0) break;
        for (int v = 0; v < n; ++v)
            if (id[v] == -1) id[v] = groups++;
        std::vector<Edge> next;
        for (const auto& e : edges) {
            int fu = id[e.from], fv = id[e.to];
            if (fu == fv) continue;
            long long nw = e.w - (e.to != r ? in_w[e.to] : 0);
            next.push_back({fu, fv, nw});
        }
        r = id[r];
        n = groups;
        edges = std::move(next);
    }
    return res;
}

}  // namespace detail

/// Stochastic potential: for every absorbing state, the minimum total
/// resistance over trees spanning all absorbing states and oriented toward
/// it. Computed as a minimum arborescence on the reversed resistance graph.
inline PotentialTable stochastic_potentials(const ResistanceGraph& g) {
    PotentialTable table;
    table.nodes = g.nodes;
    const int n = static_cast<int>(g.nodes.size());
    if (n == 0) throw ConfigError("stochastic_potentials: no absorbing states");
    std::vector<std::vector<long long>> rev(n, std::vector<long long>(n, 0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) rev[b][a] = g.weights[a][b];
    table.gamma.resize(n);
    for (int r = 0; r < n; ++r) table.gamma[r] = detail::min_out_arborescence(r, n, rev);
    long long best = *std::min_element(table.gamma.begin(), table.gamma.end());
    for (int r = 0; r < n; ++r)
        if (table.gamma[r] == best) table.ss.push_back(g.nodes[r]);
    return table;
}

struct SsResult {
    std::vector<int> via_potentials;    // state indices from argmin potential
    std::vector<int> via_max_projects;  // the lattice's L
    bool equal = false;
    PotentialTable potentials;
};

inline SsResult ss_set(const Model& m, const StateSpace& space) {
    auto report = check_assumptions(m, space);
    if (!report.v0)
        throw ConfigError(
            "ss_set: the model violates non-satiation (v0); the closed-form "
            "resistance is not valid");
    ChainAnalysis chain = build_unperturbed_chain(m, space);
    auto graph = build_resistance_graph(space, chain.absorbing);
    SsResult out;
    out.potentials = stochastic_potentials(graph);
    out.via_potentials = out.potentials.ss;
    out.via_max_projects = space.max_projects;
    out.equal = out.via_potentials == out.via_max_projects;
    return out;
}

// ---------------------------------------------------------------------------
// Perturbed chains

/// One tick = destruction phase (each existing project independently deleted
/// with probability eps) followed by one unperturbed draw-and-add step.
/// Exact summation over all destruction subsets.
inline ChainAnalysis perturbed_transition_matrix(const Model& m, const StateSpace& space,
                                                 double eps, Scheme scheme) {
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    if (scheme != Scheme::uniform_destructive)
        throw ConfigError(
            "exact perturbed analysis supports only the uniform-destructive "
            "scheme; the uniform scheme is available in Monte Carlo");
    ChainAnalysis base = build_unperturbed_chain(m, space);
    std::vector<std::vector<std::pair<int, double>>> base_rows(space.states.size());
    for (std::size_t xi = 0; xi < space.states.size(); ++xi)
        for (const auto& [t, p] : base.exact_rows[xi])
            base_rows[xi].push_back({t, boost::rational_cast<double>(p)});

    ChainAnalysis chain;
    chain.scheme = scheme;
    chain.exact = false;
    chain.epsilon = eps;
    chain.real_rows.resize(space.states.size());
    for (std::size_t xi = 0; xi < space.states.size(); ++xi) {
        State x = space.states[xi];
        auto proj = x.members();
        std::map<int, double> row;
        const std::uint32_t nsub = 1u << proj.size();
        for (std::uint32_t d = 0; d < nsub; ++d) {
            State mid = x;
            for (std::size_t k = 0; k < proj.size(); ++k)
                if (d & (1u << k)) mid = mid.without(proj[k]);
            double pd = 1.0;
            for (std::size_t k = 0; k < proj.size(); ++k)
                pd *= (d & (1u << k)) ? eps : 1.0 - eps;
            int mi = space.index(mid);
            for (const auto& [t, p] : base_rows[mi]) row[t] += pd * p;
        }
        chain.real_rows[xi].assign(row.begin(), row.end());
    }
    classify_recurrent(chain);
    return chain;
}

/// Exact-to-machine-precision stationary vector. Requires a unique recurrent
/// class; transient states carry zero mass.
inline std::vector<double> stationary_distribution(const ChainAnalysis& chain) {
    const int n = static_cast<int>(chain.size());
    ChainAnalysis probe = chain;
    classify_recurrent(probe);
    const auto& rec = probe.recurrent;
    if (rec.empty()) throw ConfigError("stationary_distribution: no recurrent states");

    auto prob_to = [&](int x) {
        std::vector<std::pair<int, double>> row;
        if (chain.exact)
            for (const auto& [t, p] : chain.exact_rows[x])
                row.push_back({t, boost::rational_cast<double>(p)});
        else
            row = chain.real_rows[x];
        return row;
    };

    // single-class check: every recurrent state reaches rec[0] and vice versa
    std::vector<int> pos(n, -1);
    for (int k = 0; k < static_cast<int>(rec.size()); ++k) pos[rec[k]] = k;
    {
        std::vector<std::vector<int>> fwd(rec.size()), bwd(rec.size());
        for (int k = 0; k < static_cast<int>(rec.size()); ++k)
            for (const auto& [t, p] : prob_to(rec[k])) {
                (void)p;
                if (pos[t] >= 0 && pos[t] != k) {
                    fwd[k].push_back(pos[t]);
                    bwd[pos[t]].push_back(k);
                }
            }
        for (const auto& adj : {fwd, bwd}) {
            std::vector<char> seen(rec.size(), 0);
            std::vector<int> stack{0};
            seen[0] = 1;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (int w : adj[v])
                    if (!seen[w]) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
            }
            if (std::count(seen.begin(), seen.end(), char(1)) !=
                static_cast<long>(rec.size()))
                throw ConfigError(
                    "stationary_distribution: more than one recurrent class, the "
                    "stationary distribution is not unique");
        }
    }

    const int r = static_cast<int>(rec.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(r, r);
    for (int k = 0; k < r; ++k)
        for (const auto& [t, p] : prob_to(rec[k]))
            if (pos[t] >= 0) A(pos[t], k) += p;
    // (D^T - I) pi = 0 with sum(pi) = 1
    Eigen::MatrixXd B = A - Eigen::MatrixXd::Identity(r, r);
    B.row(r - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(r);
    rhs(r - 1) = 1.0;
    Eigen::VectorXd pi = B.fullPivLu().solve(rhs);
    std::vector<double> out(n, 0.0);
    for (int k = 0; k < r; ++k) out[rec[k]] = pi(k);
    return out;
}

// ---------------------------------------------------------------------------
// Coalition-wise dynamics with switching costs

/// Each tick draws a deleted set and a formed set (every pair with positive
/// probability; here both by independent inclusion 1/2 per project) and moves
/// iff some coalition profits net of exit costs. Each candidate target state
/// therefore carries probability 2^-|P|.
inline ChainAnalysis coalition_chain(const Model& m, const StateSpace& space, const Rat& c) {
    check_search_guards(m);
    auto th = cost_thresholds(m, space);
    double tol = payoff_is_exact(m.payoff) ? 0.0 : m.numeric_tolerance;
    if (th.c_high && !Util::ge(Util(c), *th.c_high, tol)) {
        std::string hi = th.c_high->exact()
                             ? std::to_string(th.c_high->rat().numerator()) + "/" +
                                   std::to_string(th.c_high->rat().denominator())
                             : std::to_string(th.c_high->approx());
        throw ConfigError(
            "coalition_chain: the characterization requires c >= c_high = " + hi);
    }
    UtilTable util = tabulate_utilities(m, space);
    ChainAnalysis chain;
    chain.scheme = Scheme::coalition_wise;
    chain.exact = true;
    chain.cost = c;
    const int np = static_cast<int>(m.technology.projects.size());
    const Rat tick(1, 1ll << np);
    const int nx = static_cast<int>(space.states.size());
    chain.exact_rows.resize(nx);
    for (int xi = 0; xi < nx; ++xi) {
        Rat stay(1);
        for (int xj = 0; xj < nx; ++xj) {
            if (xj == xi) continue;
            if (move_gainers(m, space, util, xi, xj, c)) {
                chain.exact_rows[xi].push_back({xj, tick});
                stay -= tick;
            }
        }
        chain.exact_rows[xi].push_back({xi, stay});
        std::sort(chain.exact_rows[xi].begin(), chain.exact_rows[xi].end());
    }
    classify_recurrent(chain);
    return chain;
}

inline SsResult ss_with_costs(const Model& m, const StateSpace& space, const Rat& c) {
    ChainAnalysis chain = coalition_chain(m, space, c);
    auto graph = build_resistance_graph(space, chain.absorbing);
    SsResult out;
    out.potentials = stochastic_potentials(graph);
    out.via_potentials = out.potentials.ss;
    out.via_max_projects = space.max_projects;
    out.equal = out.via_potentials == out.via_max_projects;
    return out;
}

}  // namespace teamform
