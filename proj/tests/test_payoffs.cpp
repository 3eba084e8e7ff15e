#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace teamform;
using namespace tftest;

TEST_CASE("linear payoff counts memberships") {
    Model m = example_ex1();  // Linear(1/2)
    State both_ij = State{}.with(0).with(1);
    CHECK(eval(m, both_ij, 0).rat() == Rat(1));      // i in two projects
    CHECK(eval(m, both_ij, 1).rat() == Rat(1));      // j likewise
    CHECK(eval(m, both_ij, 2).rat() == Rat(0));      // k in none
    CHECK(eval(m, State{}, 3).rat() == Rat(0));
    CHECK(payoff_is_exact(m.payoff));
}

TEST_CASE("equal split divides one unit among the team") {
    Model m = example_mar();
    State one_pair = State{}.with(0);  // w1 with m1
    CHECK(eval(m, one_pair, 0).rat() == Rat(1, 2));
    CHECK(eval(m, one_pair, 3).rat() == Rat(1, 2));
    CHECK(eval(m, one_pair, 1).rat() == Rat(0));

    // a 3-member team splits into thirds
    Model t = example_ex3();
    t.payoff = EqualSplit{};
    CHECK(eval(t, State{}.with(0), 0).rat() == Rat(1, 3));
}

TEST_CASE("affinity table pays the bonus only to the designated pair") {
    Model m = example_ex1_jk();  // v=1, b=1 on the {j,k} pair
    State jk_only = State{}.with(2).with(3);
    CHECK(eval(m, jk_only, 1).rat() == Rat(4));  // two bonus projects
    CHECK(eval(m, jk_only, 2).rat() == Rat(4));
    CHECK(eval(m, jk_only, 0).rat() == Rat(0));
    State ij_only = State{}.with(0).with(1);
    CHECK(eval(m, ij_only, 0).rat() == Rat(2));  // base rate only
}

TEST_CASE("table misses raise a configuration error") {
    Model m = example_ex1();
    Table tab;
    tab.utilities.emplace(0, std::vector<Util>(4, Util(Rat(0))));
    m.payoff = std::move(tab);
    CHECK(eval(m, State{}, 0).rat() == Rat(0));
    CHECK_THROWS_AS(eval(m, State{}.with(0), 0), ConfigError);
}

TEST_CASE("publishing payoff: shares plus quality bonus") {
    Model m = example_pub();  // U = V = 1, phi = pgood = 1
    CHECK_FALSE(payoff_is_exact(m.payoff));
    CHECK(eval(m, State{}, 0).approx() == 0.0);

    StateSpace space = enumerate_states(m);
    // one project: each member gets the full share plus 1/|team|
    State solo = State{}.with(0);
    auto team = participants(m.technology.projects[0]);
    double expect = 1.0 + 1.0 / static_cast<double>(team.size());
    CHECK(eval(m, solo, team.front()).approx() == Catch::Approx(expect));

    // with phi = pgood = 1 the aggregate utility has a closed form:
    // sum over projects of |team| / #projects (shares) plus one per project
    for (State x : space.states) {
        if (x.empty()) continue;
        double total = 0.0;
        for (AgentId i = 0; i < m.n; ++i) total += eval(m, x, i).approx();
        double members = 0.0;
        for (int p : x.members())
            members += static_cast<double>(participants(m.technology.projects[p]).size());
        double expected = members / x.size() + x.size();
        CHECK(total == Catch::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("publishing marginal: closed form equals the direct difference") {
    Model m = example_pub();
    auto& pub = std::get<Publishing>(m.payoff);
    pub.phi.assign(m.technology.projects.size(), 1.0);
    pub.pgood.assign(m.technology.projects.size(), 1.0);
    std::mt19937_64 rng(7);
    for (std::size_t p = 0; p < pub.phi.size(); ++p) {
        pub.phi[p] = 0.5 + static_cast<double>(rng() % 100) / 50.0;
        pub.pgood[p] = 0.1 + 0.9 * static_cast<double>(rng() % 100) / 100.0;
    }
    StateSpace space = enumerate_states(m);
    int applicable = 0;
    for (State x : space.states) {
        int xi = space.index(x);
        for (const auto& [p, yi] : space.hasse_up[xi]) {
            (void)yi;
            for (AgentId i = 0; i < m.n; ++i) {
                auto chk = publishing_marginal_check(m.payoff, m.technology, x, p, i);
                bool in_team = m.technology.projects[p].time[i] > 0;
                CHECK(chk.closed_form.has_value() == (in_team && !x.empty()));
                if (chk.closed_form) {
                    ++applicable;
                    CHECK(*chk.closed_form == Catch::Approx(chk.direct).margin(1e-12));
                }
            }
        }
    }
    CHECK(applicable > 100);
}

TEST_CASE("publishing marginal guards its preconditions") {
    Model m = example_pub();
    CHECK_THROWS_AS(publishing_marginal_check(m.payoff, m.technology, State{}.with(0), 0, 0),
                    ConfigError);
    Model lin = example_ex1();
    CHECK_THROWS_AS(publishing_marginal_check(lin.payoff, lin.technology, State{}, 0, 0),
                    ConfigError);
}
