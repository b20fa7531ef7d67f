#include "helpers.hpp"

#include <doctest.h>

using namespace adp;
using adp::testing::Sys;

TEST_CASE("defined symbols") {
    Sys rw = adp::testing::sys_rw();
    CHECK(rw.defined() == std::set<SymbolId>{rw.t("g(x)").sym()});

    Sys incpl = adp::testing::sys_incpl();
    CHECK(incpl.defined() == std::set<SymbolId>{incpl.t("a").sym(), incpl.t("g").sym(),
                                                incpl.t("h(b1)").sym(),
                                                incpl.t("f(b1,b1)").sym()});
    CHECK(Ptrs().defined().empty());
}

TEST_CASE("normal forms") {
    Sys incpl = adp::testing::sys_incpl();
    CHECK(is_nf(incpl.t("f(h(b2),b1)"), incpl.R()));
    CHECK_FALSE(is_anf(incpl.t("f(h(g),g)"), incpl.R()));
    CHECK(is_anf(incpl.t("g"), incpl.R())); // no proper subterms
    Sys rw = adp::testing::sys_rw();
    CHECK(is_anf(rw.t("g(x)"), rw.R()));
    CHECK_FALSE(is_nf(rw.t("g(x)"), rw.R()));
    // annotations are ignored
    CHECK(is_nf(rw.at("x"), rw.R()));
    CHECK_FALSE(is_nf(rw.at("g#(x)"), rw.R()));
}

TEST_CASE("innermost redexes") {
    Sys incpl = adp::testing::sys_incpl();
    auto redexes = innermost_redexes(incpl.t("f(h(g),g)"), incpl.R());
    REQUIRE(redexes.size() == 2);
    CHECK(redexes[0].pos == Position{1, 1});
    CHECK(redexes[0].rule_index == 1);
    CHECK(redexes[1].pos == Position{2});
    CHECK(redexes[1].rule_index == 1);

    CHECK(innermost_redexes(incpl.t("f(h(b2),b1)"), incpl.R()).empty());

    Sys rw = adp::testing::sys_rw();
    auto inner = innermost_redexes(rw.t("g(g(x))"), rw.R());
    REQUIRE(inner.size() == 1); // the root is not innermost
    CHECK(inner[0].pos == Position{1});
}

TEST_CASE("rewrite_innermost") {
    Sys rw = adp::testing::sys_rw();
    MultiDistribution mu = rewrite_innermost(rw.t("g(x)"), {}, 0, rw.R());
    REQUIRE(mu.size() == 2);
    CHECK(mu.prob(0) == Rat(1, 2));
    CHECK(mu.term(0) == rw.t("g(g(x))"));
    CHECK(mu.term(1) == rw.t("x"));

    Sys incpl = adp::testing::sys_incpl();
    MultiDistribution a_step = rewrite_innermost(incpl.t("a"), {}, 0, incpl.R());
    REQUIRE(a_step.size() == 1);
    CHECK(a_step.term(0) == incpl.t("f(h(g),g)"));

    MultiDistribution right_g = rewrite_innermost(incpl.t("f(h(g),g)"), {2}, 1, incpl.R());
    CHECK(right_g.term(0) == incpl.t("f(h(g),b1)"));
    CHECK(right_g.term(1) == incpl.t("f(h(g),b2)"));

    // the outer g of g(g(x)) is not an innermost redex
    CHECK_THROWS_AS(rewrite_innermost(rw.t("g(g(x))"), {}, 0, rw.R()), TermError);
}

TEST_CASE("multi-distribution validation") {
    Sys rw = adp::testing::sys_rw();
    CHECK_THROWS_AS(MultiDistribution({{Rat(1, 2), rw.t("x")}}), TermError);
    CHECK_THROWS_AS(MultiDistribution({{Rat(1, 2), rw.t("x")}, {Rat(2, 3), rw.t("x")}}),
                    TermError);
    CHECK_THROWS_AS(MultiDistribution(std::vector<std::pair<Rat, Term>>{}), TermError);
    // duplicates are kept as a multiset
    MultiDistribution dup({{Rat(1, 2), rw.t("x")}, {Rat(1, 2), rw.t("x")}});
    CHECK(dup.size() == 2);
}

TEST_CASE("rule validation") {
    Sys rw = adp::testing::sys_rw();
    CHECK_THROWS_AS(Ptrs({Rule{rw.t("x"), MultiDistribution({{Rat(1), rw.t("x")}})}}), TermError);
    CHECK_THROWS_AS(Ptrs({Rule{rw.t("g(b)"), MultiDistribution({{Rat(1), rw.t("x")}})}}),
                    TermError);
}
