#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace teamform;
using namespace tftest;

TEST_CASE("unperturbed chain: exact rows, absorption, classification") {
    Model m = example_ex1();
    StateSpace space = enumerate_states(m);
    ChainAnalysis chain = build_unperturbed_chain(m, space);
    REQUIRE(chain.exact);

    SECTION("rows sum to one exactly") {
        for (const auto& row : chain.exact_rows) {
            Rat sum(0);
            for (const auto& [t, p] : row) sum += p;
            CHECK(sum == Rat(1));
        }
    }
    SECTION("from the empty state each project forms with its draw weight") {
        int empty = space.index(State{});
        REQUIRE(chain.exact_rows[empty].size() == 6);
        for (const auto& [t, p] : chain.exact_rows[empty]) {
            CHECK(space.states[t].size() == 1);
            CHECK(p == Rat(1, 6));
        }
    }
    SECTION("absorbing = recurrent = maximal") {
        CHECK(chain.absorbing == chain.recurrent);
        CHECK(chain.absorbing == space.maximal);
        for (int i : chain.absorbing) CHECK(chain.prob(i, i) == 1.0);
    }
    SECTION("project count never decreases along positive-probability moves") {
        for (int x = 0; x < static_cast<int>(chain.exact_rows.size()); ++x)
            for (const auto& [t, p] : chain.exact_rows[x]) {
                (void)p;
                CHECK(space.states[t].size() >= space.states[x].size());
            }
    }
}

TEST_CASE("non-uniform draw weights shift the transition probabilities") {
    Model m = example_ex1();
    m.draw_weights.assign(6, Rat(1));
    m.draw_weights[0] = Rat(5);
    StateSpace space = enumerate_states(m);
    ChainAnalysis chain = build_unperturbed_chain(m, space);
    int empty = space.index(State{});
    CHECK(chain.prob(empty, space.index(State{}.with(0))) == Catch::Approx(0.5));
}

TEST_CASE("closed-form resistance equals the least-error path oracle") {
    for (auto name : {"EX1", "EX3", "MAR"}) {
        INFO(name);
        Model m = builtin_example(name);
        StateSpace space = enumerate_states(m);
        ChainAnalysis chain = build_unperturbed_chain(m, space);
        for (int a : chain.absorbing) {
            auto dist = error_path_costs(m, space, a);
            for (int b : chain.absorbing)
                CHECK(resistance(space.states[a], space.states[b]) == dist[b]);
        }
    }
}

TEST_CASE("stochastic potentials and the selected set") {
    Model m = example_ex1();
    StateSpace space = enumerate_states(m);
    ChainAnalysis chain = build_unperturbed_chain(m, space);
    auto graph = build_resistance_graph(space, chain.absorbing);
    auto table = stochastic_potentials(graph);

    SECTION("potential plus project count is constant across absorbing states") {
        long long c = table.gamma[0] + space.states[table.nodes[0]].size();
        for (std::size_t k = 0; k < table.nodes.size(); ++k)
            CHECK(table.gamma[k] + space.states[table.nodes[k]].size() == c);
    }
    SECTION("the argmin is the top layer") {
        CHECK(table.ss == space.max_projects);
        SsResult ss = ss_set(m, space);
        CHECK(ss.equal);
        CHECK(ss.via_potentials == space.max_projects);
    }
}

TEST_CASE("arborescence potentials match brute-force tree enumeration") {
    Model m = example_ex3();  // two absorbing states: trivially checkable
    StateSpace space = enumerate_states(m);
    ChainAnalysis chain = build_unperturbed_chain(m, space);
    auto graph = build_resistance_graph(space, chain.absorbing);
    auto table = stochastic_potentials(graph);
    const int n = static_cast<int>(graph.nodes.size());
    for (int r = 0; r < n; ++r) CHECK(table.gamma[r] == brute_in_tree(r, graph.weights));
}

TEST_CASE("selection refuses models that violate non-satiation") {
    Model m = example_ex1();
    StateSpace space = enumerate_states(m);
    Table tab;
    for (State x : space.states) tab.utilities.emplace(x.bits, std::vector<Util>(4, Util(Rat(1))));
    m.payoff = std::move(tab);
    CHECK_THROWS_AS(ss_set(m, space), ConfigError);
}

TEST_CASE("perturbed transition matrix") {
    Model m = example_ex1();
    StateSpace space = enumerate_states(m);
    ChainAnalysis base = build_unperturbed_chain(m, space);

    SECTION("rows sum to one within tolerance") {
        ChainAnalysis chain = perturbed_transition_matrix(m, space, 1e-3,
                                                          Scheme::uniform_destructive);
        for (const auto& row : chain.real_rows) {
            double sum = 0.0;
            for (const auto& [t, p] : row) sum += p;
            CHECK(sum == Catch::Approx(1.0).margin(1e-12));
        }
    }
    SECTION("vanishing errors recover the unperturbed rows") {
        ChainAnalysis chain = perturbed_transition_matrix(m, space, 1e-13,
                                                          Scheme::uniform_destructive);
        for (int x = 0; x < static_cast<int>(space.states.size()); ++x)
            for (const auto& [t, p] : base.exact_rows[x])
                CHECK(chain.prob(x, t) ==
                      Catch::Approx(boost::rational_cast<double>(p)).margin(1e-9));
    }
    SECTION("a maximal state keeps itself with probability at least (1-eps)^l") {
        double eps = 0.05;
        ChainAnalysis chain = perturbed_transition_matrix(m, space, eps,
                                                          Scheme::uniform_destructive);
        for (int i : space.maximal) {
            double keep = std::pow(1.0 - eps, space.states[i].size());
            CHECK(chain.prob(i, i) >= keep - 1e-12);
        }
    }
    SECTION("parameter validation") {
        CHECK_THROWS_AS(perturbed_transition_matrix(m, space, 0.0, Scheme::uniform_destructive),
                        ConfigError);
        CHECK_THROWS_AS(perturbed_transition_matrix(m, space, 1.0, Scheme::uniform_destructive),
                        ConfigError);
        CHECK_THROWS_AS(perturbed_transition_matrix(m, space, 1e-3, Scheme::uniform),
                        ConfigError);
    }
}

TEST_CASE("stationary distribution") {
    SECTION("one-state chain") {
        ChainAnalysis c;
        c.exact = false;
        c.real_rows = {{{0, 1.0}}};
        auto pi = stationary_distribution(c);
        REQUIRE(pi.size() == 1);
        CHECK(pi[0] == Catch::Approx(1.0));
    }
    SECTION("two-state symmetric chain") {
        ChainAnalysis c;
        c.exact = false;
        c.real_rows = {{{0, 0.5}, {1, 0.5}}, {{0, 0.5}, {1, 0.5}}};
        auto pi = stationary_distribution(c);
        CHECK(pi[0] == Catch::Approx(0.5));
        CHECK(pi[1] == Catch::Approx(0.5));
    }
    SECTION("two disconnected absorbing states are rejected") {
        ChainAnalysis c;
        c.exact = false;
        c.real_rows = {{{0, 1.0}}, {{1, 1.0}}};
        CHECK_THROWS_AS(stationary_distribution(c), ConfigError);
    }
    SECTION("the perturbed fixture chain has a small residual") {
        Model m = example_ex1();
        StateSpace space = enumerate_states(m);
        ChainAnalysis chain = perturbed_transition_matrix(m, space, 1e-3,
                                                          Scheme::uniform_destructive);
        auto pi = stationary_distribution(chain);
        double total = 0.0;
        std::vector<double> out(pi.size(), 0.0);
        for (std::size_t x = 0; x < pi.size(); ++x) {
            total += pi[x];
            for (const auto& [t, p] : chain.real_rows[x]) out[t] += pi[x] * p;
        }
        CHECK(total == Catch::Approx(1.0).margin(1e-10));
        for (std::size_t x = 0; x < pi.size(); ++x)
            CHECK(out[x] == Catch::Approx(pi[x]).margin(1e-10));
        // the empty state is transient: a tick always adds some project
        CHECK(pi[space.index(State{})] == 0.0);
    }
}

TEST_CASE("coalition-wise chain with switching costs") {
    Model m = example_ex1();
    StateSpace space = enumerate_states(m);
    auto th = cost_thresholds(m, space);
    REQUIRE(th.c_high);
    Rat hi = th.c_high->rat();

    SECTION("refuses costs below the high threshold") {
        CHECK_THROWS_AS(coalition_chain(m, space, hi - Rat(1, 100)), ConfigError);
    }
    SECTION("at the threshold: exact rows, absorbing = recurrent = maximal") {
        ChainAnalysis chain = coalition_chain(m, space, hi);
        for (const auto& row : chain.exact_rows) {
            Rat sum(0);
            for (const auto& [t, p] : row) sum += p;
            CHECK(sum == Rat(1));
        }
        CHECK(chain.absorbing == chain.recurrent);
        CHECK(chain.absorbing == space.maximal);
    }
    SECTION("cost-based selection still picks the top layer") {
        SsResult ss = ss_with_costs(m, space, hi);
        CHECK(ss.equal);
        CHECK(ss.via_potentials == space.max_projects);
    }
}
