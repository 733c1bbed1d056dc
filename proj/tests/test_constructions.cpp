#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "npl/constructions.hpp"
#include "npl/errors.hpp"

using namespace npl;
using std::numbers::pi;

namespace {

// Maximum m of the positive solution with half-period 1/2, from the time map
// 1/2 = m^{(1-p)/2} sqrt((p+1)/2) int_0^1 (1 - w^{p+1})^{-1/2} dw.
double time_map_max(double p) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double J = ts.integrate([p](double w, double wc) {
        const double d = w > 0.5 ? -std::expm1((p + 1.0) * std::log1p(-wc)) : 1.0 - std::pow(w, p + 1.0);
        return 1.0 / std::sqrt(d);
    }, 0.0, 1.0);
    return std::pow(2.0 * std::sqrt((p + 1.0) / 2.0) * J, 2.0 / (p - 1.0));
}

}  // namespace

TEST_CASE("steady state agrees with the time map") {
    for (double p : {2.0, 3.0, 5.0}) {
        const auto v = steady_state_1d(p);
        const double m = time_map_max(p);
        CHECK(v.max_value() == doctest::Approx(m).epsilon(1e-9));
        CHECK(v.slope() == doctest::Approx(std::sqrt(2.0 * std::pow(m, p + 1.0) / (p + 1.0))).epsilon(1e-9));
        CHECK(v.argmax() == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(v.first_integral_drift() <= 1e-10);
        CHECK(v.endpoint_residual() <= 1e-10);
    }
    CHECK(time_map_max(3.0) == doctest::Approx(3.708149354603).epsilon(1e-11));
    CHECK_THROWS_AS(steady_state_1d(1.0), InvalidArgument);
}

TEST_CASE("steady state shape") {
    const auto v = steady_state_1d(3.0);
    CHECK(v.value(-0.1) == 0.0);
    CHECK(v.value(1.1) == 0.0);
    CHECK(v.value(0.3) == doctest::Approx(v.value(0.7)).epsilon(1e-12));
    CHECK(v.derivative(0.0) == doctest::Approx(v.slope()));
}

TEST_CASE("odd periodic extension") {
    const auto v = steady_state_1d(3.0);
    const auto g = Grid::interval(-3.0, 3.0, 601);
    const Field u = odd_periodic_extension(v, g);
    CHECK(sign_change_count(u) == 5);
    for (double x : {0.25, 0.6, 1.3}) {
        CHECK(interpolate(u, -x) == doctest::Approx(-interpolate(u, x)).epsilon(1e-10));
        CHECK(interpolate(u, x - 2.0) == doctest::Approx(interpolate(u, x)).epsilon(1e-10));
    }
}

TEST_CASE("steady data stay put for a while") {
    const auto v = steady_state_1d(3.0);
    const auto g = Grid::interval(0.0, 1.0, 256);
    ProblemSpec pr{g, {}, NonlinearitySpec::power(3.0), 85};
    StepperConfig sc;
    sc.t_end = 0.1;
    sc.store_fields = true;
    const auto traj = evolve(pr, sc, v.sample(g));
    CHECK(traj.outcome.kind == Outcome::Kind::GlobalToTend);
    for (const auto& f : traj.fields) CHECK(lq_norm(f - v.sample(g), 2.0) <= 1e-4);
}

TEST_CASE("calibration and rescaling") {
    const auto v = steady_state_1d(3.0);
    const auto rows = calibrate_T_lambda(v, {1.0, 1.5, 2.0});
    REQUIRE(rows.size() == 3);
    CHECK_FALSE(rows[0].blew_up);
    CHECK_FALSE(rows[0].note.empty());
    CHECK(rows[1].blew_up);
    CHECK(rows[2].blew_up);
    CHECK(rows[1].T > rows[2].T);
    CHECK(rows[1].T == doctest::Approx(0.0246337).epsilon(1e-3));

    const auto d = rescaled_blowup_data(v, 1.5, 1.0, rows[1].T);
    CHECK(d.alpha == doctest::Approx(std::sqrt(rows[1].T)));
    CHECK(d.u0.grid().node(d.u0.size() - 1) == doctest::Approx(1.0 / d.alpha));
    CHECK(d.u0.max_abs() == doctest::Approx(d.alpha * 1.5 * v.max_value()).epsilon(1e-3));
}

TEST_CASE("bump family closed forms") {
    const double q = 2.5;
    const auto fam = bump_family(2, 8.0, q);
    CHECK(fam.delta == doctest::Approx((q - 2.0) / 8.0));
    CHECK(fam.M_i[1] == doctest::Approx(std::pow(8.0, 1.0 + fam.delta)));
    CHECK_THROWS_AS(bump_family(2, 8.0, q, 0.2), InvalidArgument);
    const std::size_t n = fam.required_nodes(1.0);
    for (int i = 1; i <= 2; ++i) {
        const double Mi = fam.M_i[i - 1];
        const double lq = 8.0 * pi * std::pow(Mi, 2.0 * q - 1.0) / ((q + 2) * (q + 3) * (q + 4));
        const double dirichlet = 4.0 * pi / 3.0 * Mi * Mi * Mi;
        const Field v = fam.member(i, Grid::ball(1.0, 3, n));
        const Field fine = fam.member(i, Grid::ball(1.0, 3, 8 * n));
        CHECK(lq_power(v, q + 1.0) == doctest::Approx(lq).epsilon(1e-3));
        const double coarse_err = std::abs(sps_energy_direct(v, q, 1.0).dirichlet / dirichlet - 1.0);
        const double fine_err = std::abs(sps_energy_direct(fine, q, 1.0).dirichlet / dirichlet - 1.0);
        CHECK(coarse_err <= 2e-2);
        CHECK(fine_err <= 2e-3);
    }
}

TEST_CASE("negative-energy witness") {
    const auto w = negative_energy_witness(4.0, 1.0, 1);
    CHECK(w.energy < 0.0);
    CHECK(w.energy_refined < 0.0);
    CHECK(w.M == 4.0);
    CHECK(w.pattern == "equal");
    CHECK_THROWS_AS(negative_energy_witness(2.5, 1.0, 2, 1.0, 1024), ResolutionError);
}
