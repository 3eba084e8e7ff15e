#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace teamform;
using namespace tftest;

namespace {

AssumptionReport report_for(const std::string& name) {
    Model m = builtin_example(name);
    StateSpace space = enumerate_states(m);
    return check_assumptions(m, space);
}

}  // namespace

TEST_CASE("assumption flags on the built-in examples") {
    SECTION("EX1: unit times, pairs, all payoff conditions") {
        auto a = report_for("EX1");
        CHECK(a.t1);
        CHECK(a.s1);
        CHECK(a.s1_k == 2);
        CHECK(a.s2);
        CHECK(a.v0);
        CHECK(a.v1);
        CHECK(a.v2);
        REQUIRE(a.v2_v);
        CHECK(a.v2_v->rat() == Rat(1, 2));
    }
    SECTION("EX1-JK: the bonus breaks proportionality but not non-satiation") {
        auto a = report_for("EX1-JK");
        CHECK(a.v0);
        CHECK_FALSE(a.v1);
        CHECK_FALSE(a.v2);
    }
    SECTION("EX2: non-unit times with proportional payoffs") {
        auto a = report_for("EX2");
        CHECK_FALSE(a.t1);
        CHECK(a.s2);
        CHECK(a.v0);
        CHECK(a.v1);
        CHECK(a.v2);
        REQUIRE(a.v2_v);
        CHECK(a.v2_v->rat() == Rat(1, 2));
    }
    SECTION("EX3: triples, so the pair condition fails and v1 fails") {
        auto a = report_for("EX3");
        CHECK(a.t1);
        CHECK(a.s1);
        CHECK(a.s1_k == 3);
        CHECK_FALSE(a.s2);
        CHECK(a.v0);
        CHECK_FALSE(a.v1);  // each 3-member project contributes 3/2 in total
        CHECK(a.v2);
    }
    SECTION("MAR: matchings with equal split") {
        auto a = report_for("MAR");
        CHECK(a.t1);
        CHECK(a.s2);
        CHECK(a.v0);
        CHECK(a.v1);
        CHECK(a.v2);
        REQUIRE(a.v2_v);
        CHECK(a.v2_v->rat() == Rat(1, 2));
    }
    SECTION("PUB: heterogeneous team sizes, non-satiated but not proportional") {
        auto a = report_for("PUB");
        CHECK(a.t1);
        CHECK_FALSE(a.s1);
        CHECK(a.v0);
        CHECK_FALSE(a.v1);
        CHECK_FALSE(a.v2);
    }
}

TEST_CASE("non-satiation fails when an addition leaves a member indifferent") {
    Model m = example_ex1();
    StateSpace space = enumerate_states(m);
    // constant-utility table: nobody ever strictly gains
    Table tab;
    for (State x : space.states) tab.utilities.emplace(x.bits, std::vector<Util>(4, Util(Rat(1))));
    m.payoff = std::move(tab);
    auto a = check_assumptions(m, space);
    CHECK_FALSE(a.v0);
    CHECK_FALSE(a.v1);
    CHECK_FALSE(a.v2);
}

TEST_CASE("random linear models satisfy non-satiation by construction") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        Model m = random_linear_model(rng);
        StateSpace space = enumerate_states(m);
        auto a = check_assumptions(m, space);
        CHECK(a.v0);
        CHECK(a.v2);
    }
}

TEST_CASE("v2 fit is consistent with a scaled linear payoff") {
    Model m = example_ex1();
    m.payoff = Linear{Rat(7, 3)};
    StateSpace space = enumerate_states(m);
    auto a = check_assumptions(m, space);
    CHECK(a.v2);
    REQUIRE(a.v2_v);
    CHECK(a.v2_v->rat() == Rat(7, 3));
    CHECK_FALSE(a.v1);  // aggregate is 2 * 7/3 per project, not 1
}
