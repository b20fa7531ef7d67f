#include "adp/oracle.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace adp;
using adp::testing::Sys;

TEST_CASE("simulate_run") {
    Sys b2 = adp::testing::sys_branch2();
    SimConfig cfg;
    SUBCASE("constructor ground start terminates immediately") {
        RunResult run = simulate_run(b2.R(), b2.t("b"), cfg);
        CHECK(run.terminated);
        CHECK(run.steps == 0);
    }
    SUBCASE("the identity loop always censors") {
        Sys loop = adp::testing::make("(RULES a -> a)");
        cfg.step_cap = 100;
        RunResult run = simulate_run(loop.R(), loop.t("a"), cfg);
        CHECK_FALSE(run.terminated);
    }
    SUBCASE("runs are reproducible per trial index") {
        Sys rw = adp::testing::sys_rw();
        cfg.step_cap = 1000;
        RunResult r1 = simulate_run(rw.R(), rw.t("g(x)"), cfg, 7);
        RunResult r2 = simulate_run(rw.R(), rw.t("g(x)"), cfg, 7);
        CHECK(r1.terminated == r2.terminated);
        CHECK(r1.steps == r2.steps);
    }
}

TEST_CASE("estimate_termination") {
    SimConfig cfg;
    cfg.trials = 200;
    cfg.step_cap = 2000;
    SUBCASE("normal-form start gives exactly 1") {
        Sys b2 = adp::testing::sys_branch2();
        Estimate est = estimate_termination(b2.R(), b2.t("b"), cfg);
        CHECK(est.point == 1);
        CHECK(est.terminated == 200);
    }
    SUBCASE("interval brackets the estimate") {
        Sys b3 = adp::testing::sys_branch3();
        Estimate est = estimate_termination(b3.R(), b3.t("a"), cfg);
        double phat = double(est.terminated) / double(est.trials);
        CHECK(est.lower <= phat);
        CHECK(phat <= est.upper);
        CHECK(est.lower >= 0.0);
        CHECK(est.upper <= 1.0);
    }
}

TEST_CASE("bounded_mass on the paper trees") {
    Sys rw = adp::testing::sys_rw();
    CHECK(bounded_mass(rw.R(), rw.t("g(x)"), 2) == Rat(1, 2));
    // second leaf (g^2 -> g -> x) arrives at depth 3; parity forbids leaves
    // at depth 4, so the exact mass stays 5/8 there
    CHECK(bounded_mass(rw.R(), rw.t("g(x)"), 3) == Rat(5, 8));
    CHECK(bounded_mass(rw.R(), rw.t("g(x)"), 4) == Rat(5, 8));
    CHECK(bounded_mass(rw.R(), rw.t("g(x)"), 5) == Rat(11, 16));

    Sys incpl = adp::testing::sys_incpl();
    CHECK(bounded_mass(incpl.R(), incpl.t("a"), 3) == Rat(1, 4));

    CHECK(bounded_mass(rw.R(), rw.t("x"), 10) == 1);
}

TEST_CASE("bounded_mass properties") {
    Sys rw = adp::testing::sys_rw();
    SUBCASE("monotone in depth and bounded by 1") {
        Rat prev = 0;
        for (unsigned depth = 0; depth <= 8; ++depth) {
            Rat mass = bounded_mass(rw.R(), rw.t("g(x)"), depth);
            CHECK(mass >= prev);
            CHECK(mass <= 1);
            prev = mass;
        }
    }
    SUBCASE("adversarial equals default when there is no overlap") {
        for (unsigned depth = 0; depth <= 6; ++depth)
            CHECK(bounded_mass(rw.R(), rw.t("g(x)"), depth) ==
                  bounded_mass(rw.R(), rw.t("g(x)"), depth, true));
    }
    SUBCASE("adversarial minimizes over rule choices") {
        // e -> d1 | e -> d2 with f(d1) -> f(e) looping and d2 a dead end:
        // the adversary keeps the loop alive
        Sys s = adp::testing::make("(RULES f(d1) -> f(e) e -> d1 e -> d2)");
        CHECK(bounded_mass(s.R(), s.t("f(e)"), 6, true) == 0);
        CHECK(bounded_mass(s.R(), s.t("f(e)"), 6, false) == 0); // declaration order picks d1 too
        Sys flipped = adp::testing::make("(RULES f(d1) -> f(e) e -> d2 e -> d1)");
        CHECK(bounded_mass(flipped.R(), flipped.t("f(e)"), 6, false) == 1);
        CHECK(bounded_mass(flipped.R(), flipped.t("f(e)"), 6, true) == 0);
    }
    SUBCASE("explosion guard") {
        Sys b3 = adp::testing::sys_branch3();
        CHECK_THROWS_AS(bounded_mass(b3.R(), b3.t("a"), 30, false, 100), OracleError);
    }
}
