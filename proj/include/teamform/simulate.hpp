#pragma once

#include <random>

#include "teamform/dynamics.hpp"

namespace teamform {

struct SimulationConfig {
    double epsilon = 1e-2;
    Scheme scheme = Scheme::uniform_destructive;
    std::uint64_t steps = 100000;
    std::uint64_t burn_in = 1000;  // default 1% of steps when left unset by callers
    std::uint64_t seed = 0;
    int replicas = 1;
};

struct OccupancyReport {
    std::vector<double> frequency;        // per state, post burn-in, sums to 1
    std::vector<double> class_frequency;  // per activity-relabeling class
    std::uint64_t samples = 0;            // per replica
    int modal_state = -1;
    int modal_class = -1;
};

namespace detail {

/// Portable uniform double in [0, 1) from the raw mt19937_64 stream, so that
/// identical seeds reproduce identical trajectories on any platform.
inline double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int draw_weighted(std::mt19937_64& rng, const std::vector<double>& cumulative) {
    double u = next_unit(rng) * cumulative.back();
    return static_cast<int>(std::lower_bound(cumulative.begin(), cumulative.end(), u) -
                            cumulative.begin());
}

}  // namespace detail

inline double compare_occupancy(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ConfigError("compare_occupancy: dimension mismatch");
    double tv = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
    return tv / 2.0;
}

inline OccupancyReport run_simulation(const Model& m, const StateSpace& space,
                                      const SimulationConfig& cfg) {
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    if (cfg.burn_in >= cfg.steps) throw ConfigError("burn-in must be smaller than the step count");
    if (cfg.replicas < 1) throw ConfigError("at least one replica required");
    if (cfg.scheme != Scheme::uniform && cfg.scheme != Scheme::uniform_destructive)
        throw ConfigError("simulation supports the uniform and uniform-destructive schemes");

    const int np = static_cast<int>(m.technology.projects.size());
    double tol = payoff_is_exact(m.payoff) ? 0.0 : m.numeric_tolerance;
    std::vector<double> cumulative(np);
    double acc = 0.0;
    for (int p = 0; p < np; ++p) {
        acc += boost::rational_cast<double>(m.draw_weight(p));
        cumulative[p] = acc;
    }

    std::vector<double> visits(space.states.size(), 0.0);
    auto usage_of = [&](State x) { return resource_usage(x, m.technology); };

    for (int rep = 0; rep < cfg.replicas; ++rep) {
        std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(rep));
        State x{};  // start at the empty state
        std::vector<std::uint64_t> count(space.states.size(), 0);
        for (std::uint64_t s = 0; s < cfg.steps; ++s) {
            // error phase
            if (cfg.scheme == Scheme::uniform_destructive) {
                for (int p : x.members())
                    if (detail::next_unit(rng) < cfg.epsilon) x = x.without(p);
            } else {
                std::vector<int> create;
                for (int p = 0; p < np; ++p) {
                    if (detail::next_unit(rng) >= cfg.epsilon) continue;
                    if (x.contains(p))
                        x = x.without(p);
                    else
                        create.push_back(p);
                }
                // creations apply in uniformly random order with incremental
                // feasibility filtering
                for (std::size_t k = create.size(); k > 1; --k) {
                    std::size_t j = static_cast<std::size_t>(detail::next_unit(rng) * k);
                    std::swap(create[k - 1], create[j]);
                }
                for (int p : create) {
                    auto usage = usage_of(x);
                    if (can_add(x, p, m, usage)) x = x.with(p);
                }
            }
            // adaptive phase: one draw-and-add step
            if (np > 0) {
                int p = detail::draw_weighted(rng, cumulative);
                if (!x.contains(p)) {
                    auto usage = usage_of(x);
                    if (can_add(x, p, m, usage)) {
                        State y = x.with(p);
                        bool all_gain = true;
                        for (AgentId i : participants(m.technology.projects[p]))
                            if (!Util::gt(eval(m, y, i), eval(m, x, i), tol)) {
                                all_gain = false;
                                break;
                            }
                        if (all_gain) x = y;
                    }
                }
            }
            if (s >= cfg.burn_in) count[space.index(x)]++;
        }
        for (std::size_t i = 0; i < visits.size(); ++i) visits[i] += static_cast<double>(count[i]);
    }

    OccupancyReport rep;
    rep.samples = cfg.steps - cfg.burn_in;
    double total = static_cast<double>(rep.samples) * cfg.replicas;
    rep.frequency.resize(space.states.size());
    for (std::size_t i = 0; i < visits.size(); ++i) rep.frequency[i] = visits[i] / total;
    rep.class_frequency.assign(space.num_classes, 0.0);
    for (std::size_t i = 0; i < visits.size(); ++i)
        rep.class_frequency[space.class_id[i]] += rep.frequency[i];
    rep.modal_state = static_cast<int>(std::max_element(rep.frequency.begin(), rep.frequency.end()) -
                                       rep.frequency.begin());
    rep.modal_class =
        static_cast<int>(std::max_element(rep.class_frequency.begin(), rep.class_frequency.end()) -
                         rep.class_frequency.begin());
    return rep;
}

}  // namespace teamform
