#include <doctest.h>

#include <cmath>

#include "npl/errors.hpp"
#include "npl/exponents.hpp"

using namespace npl;

TEST_CASE("extended reals") {
    const ExtReal inf = ExtReal::infinity();
    CHECK(inf.is_infinite());
    CHECK(inf.to_string() == "inf");
    CHECK(ExtReal(3.0) < inf);
    CHECK_FALSE(inf < inf);
    CHECK(inf == ExtReal::infinity());
    CHECK_THROWS(inf.value());
    CHECK(ExtReal(2.5).value() == 2.5);
}

TEST_CASE("critical exponents") {
    CHECK(sobolev_exponent(3).value() == doctest::Approx(5.0));
    CHECK(sobolev_exponent(2).is_infinite());
    CHECK(cazenave_lions_exponent(3).value() == doctest::Approx(17.0 / 5.0));
    CHECK(cazenave_lions_exponent(1).is_infinite());
    CHECK(fujita_exponent(3) == doctest::Approx(5.0 / 3.0));
    CHECK(fractional_sobolev_exponent(1, 0.75).is_infinite());
    CHECK(fractional_sobolev_exponent(3, 0.5).value() == doctest::Approx(2.0));
    CHECK(choquard_threshold(2).is_infinite());
}

TEST_CASE("table rows") {
    struct Row {
        int n;
        double p_S, p_star, p_CL, p_F;
    };
    for (const Row r : {Row{3, 5.0, 4.5894, 3.4, 5.0 / 3.0}, Row{4, 3.0, 2.9114, 2.5, 1.5},
                        Row{5, 7.0 / 3.0, 2.2996, 23.0 / 11.0, 1.4}}) {
        const auto t = exponent_table(r.n);
        CHECK(t.p_S.value() == doctest::Approx(r.p_S));
        CHECK(t.p_CL.value() == doctest::Approx(r.p_CL));
        CHECK(t.p_F == doctest::Approx(r.p_F));
        CHECK(std::abs(t.p_star.value() - r.p_star) <= 5e-4);
        CHECK(t.p_star < t.p_S);
    }
}

TEST_CASE("optional table entries") {
    const auto t = exponent_table(3, 2.0, 3.0);
    CHECK(t.q_star->value() == doctest::Approx(1.5));
    CHECK(*t.R_star == doctest::Approx(3.0));
    CHECK_FALSE(exponent_table(3).q_star.has_value());
}

TEST_CASE("bootstrap quantities") {
    CHECK(bootstrap_sq(3.0, 2.0) == doctest::Approx(4.0 - 2.0 / 3.0));
    CHECK(bootstrap_B(3, 2.0) == doctest::Approx(6.0));
    for (int n : {3, 4, 5}) {
        const double Q = bootstrap_rhs_argmin(n);
        CHECK(Q == doctest::Approx(n + 2 + std::sqrt(n * n + 3.0 * n)));
        const auto m = bootstrap_rhs_numeric_min(n);
        CHECK(m.argmin == doctest::Approx(Q).epsilon(1e-6));
        CHECK(m.value == doctest::Approx(bootstrap_rhs(n, Q)).epsilon(1e-12));
        CHECK(std::abs(m.value - choquard_threshold(n).value()) <= 1e-9);
    }
}

TEST_CASE("bootstrap ledger") {
    const auto a = bootstrap_ledger(3, 4.0);
    CHECK(a.terminated);
    CHECK_FALSE(a.stuck);
    CHECK(a.Q.front() == 2.0);
    CHECK(a.target == doctest::Approx(4.5));
    const auto b = bootstrap_ledger(3, 4.7);
    CHECK(b.stuck);
    CHECK_FALSE(b.terminated);
}

TEST_CASE("lemma tuple feasibility") {
    const auto t = lemma1_feasibility(2.5, 2.5);
    CHECK(t.satisfies_constraints(2.5, 2.5));
    CHECK_THROWS_AS(lemma1_feasibility(3.5, 5.0), InvalidArgument);
    CHECK_THROWS_AS(lemma1_feasibility(2.5, 2.0), InvalidArgument);
}

TEST_CASE("F-Phi ratio is scale invariant") {
    CHECK(fphi_exponent(3, 2.0) == doctest::Approx(12.0 / 7.0));
    const auto c = fphi_exponent_check(3, 2.0, 257);
    CHECK(c.r2 == doctest::Approx(12.0 / 7.0));
    CHECK(c.samples.size() == 9);
    CHECK(c.homogeneity_spread <= 1e-10);
}
