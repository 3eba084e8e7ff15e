#pragma once

#include <sstream>

#include "teamform/dynamics.hpp"

namespace teamform {

enum class CheckStatus { passed, not_applicable, failed };

struct PropositionCheck {
    std::string id;
    CheckStatus status = CheckStatus::not_applicable;
    std::string hypotheses;  // which preconditions held or failed
    std::string detail;      // witness or counterexample
};

struct VerificationReport {
    std::vector<PropositionCheck> checks;
    bool all_passed() const {
        return std::none_of(checks.begin(), checks.end(), [](const PropositionCheck& c) {
            return c.status == CheckStatus::failed;
        });
    }
};

namespace verify_detail {

inline std::string show_state(State x) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (int p : x.members()) {
        if (!first) os << ',';
        os << p;
        first = false;
    }
    os << '}';
    return os.str();
}

inline std::string show_states(const StateSpace& space, const std::vector<int>& idx,
                               std::size_t limit = 6) {
    std::ostringstream os;
    for (std::size_t k = 0; k < idx.size() && k < limit; ++k) {
        if (k) os << ' ';
        os << show_state(space.states[idx[k]]);
    }
    if (idx.size() > limit) os << " …(" << idx.size() << " total)";
    return os.str();
}

inline std::string set_diff_detail(const StateSpace& space, const std::string& lhs,
                                   const std::vector<int>& a, const std::string& rhs,
                                   const std::vector<int>& b) {
    std::vector<int> only_a, only_b;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_a));
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_b));
    std::ostringstream os;
    if (!only_a.empty()) os << lhs << "-only: " << show_states(space, only_a);
    if (!only_b.empty()) {
        if (!only_a.empty()) os << "; ";
        os << rhs << "-only: " << show_states(space, only_b);
    }
    return os.str();
}

inline bool pareto_efficient(const StateSpace& space, const UtilTable& util, int xi, int n,
                             int& dominator) {
    for (int yi = 0; yi < static_cast<int>(space.states.size()); ++yi) {
        if (yi == xi) continue;
        bool weak = true, strict = false;
        for (int i = 0; i < n; ++i) {
            if (Util::lt(util.u[yi][i], util.u[xi][i], util.tol)) {
                weak = false;
                break;
            }
            if (Util::gt(util.u[yi][i], util.u[xi][i], util.tol)) strict = true;
        }
        if (weak && strict) {
            dominator = yi;
            return false;
        }
    }
    return true;
}

inline bool exact_rat(const std::optional<Util>& u) { return u && u->exact(); }

}  // namespace verify_detail

/// Runs every proposition-level check that the model's assumptions license;
/// hypothesis failures yield "not applicable", never "failed".
inline VerificationReport verify_propositions(const Model& m) {
    using namespace verify_detail;
    VerificationReport report;
    StateSpace space = enumerate_states(m);
    AssumptionReport ar = check_assumptions(m, space);
    UtilTable util = tabulate_utilities(m, space);

    auto assumption_summary = [&]() {
        std::ostringstream os;
        os << "t1=" << (ar.t1 ? "yes" : "no") << " v0=" << (ar.v0 ? "yes" : "no")
           << " v1=" << (ar.v1 ? "yes" : "no") << " v2=" << (ar.v2 ? "yes" : "no");
        return os.str();
    };

    bool searchable = m.n <= m.guards.max_coalition_n &&
                      static_cast<int>(m.technology.projects.size()) <= m.guards.max_search_projects;

    // --- maximal-state characterization of team-wise stability ---
    {
        PropositionCheck c{"L1", CheckStatus::not_applicable, assumption_summary(), ""};
        if (ar.v0) {
            auto mts = mts_set(m, space);
            if (mts == space.maximal) {
                c.status = CheckStatus::passed;
                c.detail = std::to_string(mts.size()) + " stable = maximal states";
            } else {
                c.status = CheckStatus::failed;
                c.detail = set_diff_detail(space, "MTS", mts, "maximal", space.maximal);
            }
        } else {
            c.detail = "requires non-satiation (v0)";
        }
        report.checks.push_back(std::move(c));
    }

    // --- absorbing = recurrent = maximal = MTS in the unperturbed chain ---
    ChainAnalysis unperturbed = build_unperturbed_chain(m, space);
    {
        PropositionCheck c{"P1", CheckStatus::not_applicable, assumption_summary(), ""};
        if (ar.v0) {
            auto mts = mts_set(m, space);
            bool ok = unperturbed.absorbing == unperturbed.recurrent &&
                      unperturbed.absorbing == space.maximal && unperturbed.absorbing == mts;
            if (ok) {
                c.status = CheckStatus::passed;
                c.detail = std::to_string(unperturbed.absorbing.size()) + " absorbing states";
            } else {
                c.status = CheckStatus::failed;
                c.detail = "A: " + show_states(space, unperturbed.absorbing) +
                           "; R: " + show_states(space, unperturbed.recurrent) +
                           "; M: " + show_states(space, space.maximal);
            }
        } else {
            c.detail = "requires non-satiation (v0)";
        }
        report.checks.push_back(std::move(c));
    }

    // --- stochastically stable = maximum-project states ---
    std::vector<int> ss_states;
    bool ss_known = false;
    {
        PropositionCheck c{"P2", CheckStatus::not_applicable, assumption_summary(), ""};
        if (ar.v0) {
            SsResult ss = ss_set(m, space);
            ss_states = ss.via_potentials;
            ss_known = true;
            if (ss.equal) {
                c.status = CheckStatus::passed;
                c.detail = "SS = L = " + show_states(space, ss.via_potentials);
            } else {
                c.status = CheckStatus::failed;
                c.detail = set_diff_detail(space, "SS", ss.via_potentials, "L", ss.via_max_projects);
            }
        } else {
            c.detail = "requires non-satiation (v0)";
        }
        report.checks.push_back(std::move(c));
    }

    // --- every stochastically stable state is Pareto efficient ---
    {
        PropositionCheck c{"C1", CheckStatus::not_applicable, assumption_summary(), ""};
        if (ar.v0 && ar.v1 && ss_known) {
            c.status = CheckStatus::passed;
            for (int xi : ss_states) {
                int dom = -1;
                if (!pareto_efficient(space, util, xi, m.n, dom)) {
                    c.status = CheckStatus::failed;
                    c.detail = show_state(space.states[xi]) + " dominated by " +
                               show_state(space.states[dom]);
                    break;
                }
            }
            if (c.status == CheckStatus::passed)
                c.detail = std::to_string(ss_states.size()) + " states, all Pareto efficient";
        } else {
            c.detail = "requires v0 and aggregate-value normalization (v1)";
        }
        report.checks.push_back(std::move(c));
    }

    // --- costless coalitional stability collapses to team-wise stability ---
    std::vector<int> cs0;
    bool cs0_known = false;
    {
        PropositionCheck c{"P3", CheckStatus::not_applicable, assumption_summary(), ""};
        if (ar.t1 && ar.v2 && searchable) {
            cs0 = cs_set(m, space, Rat(0));
            cs0_known = true;
            auto mts = mts_set(m, space);
            if (cs0 == mts) {
                c.status = CheckStatus::passed;
                c.detail = "CS(0) = MTS, " + std::to_string(cs0.size()) + " states";
            } else {
                c.status = CheckStatus::failed;
                c.detail = set_diff_detail(space, "CS", cs0, "MTS", mts);
            }
        } else if (!searchable) {
            c.detail = "coalition search guard exceeded";
        } else {
            c.detail = "requires unit times (t1) and proportional payoffs (v2)";
        }
        report.checks.push_back(std::move(c));
    }

    // --- switching-cost thresholds ---
    std::optional<CostThresholds> th;
    if (searchable) th = cost_thresholds(m, space);
    {
        PropositionCheck c{"B1", CheckStatus::not_applicable, assumption_summary(), ""};
        if (th && th->defined_over > 0 && exact_rat(th->c_low) && exact_rat(th->c_high)) {
            if (!cs0_known) {
                cs0 = cs_set(m, space, Rat(0));
                cs0_known = true;
            }
            Rat lo = th->c_low->rat(), hi = th->c_high->rat();
            bool low_ok = lo <= Rat(0) || cs_set(m, space, lo / Rat(2)) == cs0;
            bool high_ok = cs_set(m, space, hi) == mts_set(m, space);
            if (low_ok && high_ok) {
                c.status = CheckStatus::passed;
                std::ostringstream os;
                os << "c_low=" << lo.numerator() << '/' << lo.denominator() << " c_high="
                   << hi.numerator() << '/' << hi.denominator();
                c.detail = os.str();
            } else {
                c.status = CheckStatus::failed;
                c.detail = low_ok ? "CS(c_high) != MTS" : "CS(c_low/2) != CS(0)";
            }
        } else {
            c.detail = th && th->defined_over == 0 ? "no supportable moves at c = 0"
                                                   : "requires exact rational thresholds";
        }
        report.checks.push_back(std::move(c));
    }

    // --- coalition-wise chain: absorbing = recurrent at high cost ---
    {
        PropositionCheck c{"B2", CheckStatus::not_applicable, assumption_summary(), ""};
        if (th && exact_rat(th->c_high)) {
            ChainAnalysis cw = coalition_chain(m, space, th->c_high->rat());
            if (cw.absorbing == cw.recurrent) {
                c.status = CheckStatus::passed;
                c.detail = std::to_string(cw.absorbing.size()) + " absorbing states at c = c_high";
            } else {
                c.status = CheckStatus::failed;
                c.detail = set_diff_detail(space, "A", cw.absorbing, "R", cw.recurrent);
            }
        } else {
            c.detail = "requires an exact rational c_high";
        }
        report.checks.push_back(std::move(c));
    }

    // --- stochastic stability under costs still selects L ---
    {
        PropositionCheck c{"B3", CheckStatus::not_applicable, assumption_summary(), ""};
        if (th && exact_rat(th->c_high) && ar.v0) {
            SsResult ss = ss_with_costs(m, space, th->c_high->rat());
            if (ss.equal) {
                c.status = CheckStatus::passed;
                c.detail = "SS(c) = L = " + show_states(space, ss.via_potentials);
            } else {
                c.status = CheckStatus::failed;
                c.detail = set_diff_detail(space, "SS", ss.via_potentials, "L", ss.via_max_projects);
            }
        } else {
            c.detail = "requires v0 and an exact rational c_high";
        }
        report.checks.push_back(std::move(c));
    }

    // --- a farsightedly stable set always exists ---
    {
        PropositionCheck c{"FS", CheckStatus::not_applicable, assumption_summary(), ""};
        if (searchable) {
            FarsightedMode mode = static_cast<int>(space.states.size()) <=
                                          m.guards.farsighted_exhaustive_max
                                      ? FarsightedMode::exhaustive
                                      : FarsightedMode::greedy;
            auto sets = farsighted_stable_sets(m, space, mode);
            if (!sets.empty() && sets.front().certified_i && sets.front().certified_ii) {
                c.status = CheckStatus::passed;
                c.detail = std::to_string(sets.size()) + " set(s); first: " +
                           show_states(space, sets.front().members);
            } else {
                c.status = CheckStatus::failed;
                c.detail = sets.empty() ? "no set found" : "returned set fails (i)/(ii)";
            }
        } else {
            c.detail = "coalition search guard exceeded";
        }
        report.checks.push_back(std::move(c));
    }

    return report;
}

}  // namespace teamform
