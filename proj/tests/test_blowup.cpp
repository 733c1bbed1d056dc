#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "npl/blowup.hpp"
#include "npl/errors.hpp"

using namespace npl;
using std::numbers::pi;

namespace {

// Flat ODE solution of u' = u^p: u = ((p-1)(T-t))^{-1/(p-1)}.
struct OdeHistory {
    std::vector<double> t, linf;
};

OdeHistory ode_history(double p, double T, std::size_t n) {
    OdeHistory h;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = T * (1.0 - std::pow(10.0, -6.0 * static_cast<double>(i) / static_cast<double>(n)));
        h.t.push_back(t);
        h.linf.push_back(std::pow((p - 1.0) * (T - t), -1.0 / (p - 1.0)));
    }
    return h;
}

}  // namespace

TEST_CASE("least squares line") {
    const std::vector<double> x = {0, 1, 2, 3}, y = {1, 3, 5, 7};
    const auto f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(f.samples == 4);
    CHECK_THROWS_AS(fit_line(std::vector<double>{0, 1}, std::vector<double>{0, 1}), FitError);
}

TEST_CASE("blow-up fit recovers the ODE law") {
    for (double p : {2.0, 3.0}) {
        const auto h = ode_history(p, 0.3, 400);
        CHECK(resolved_prefix(h.t, h.linf, p) == h.t.size());
        const auto r = estimate_blowup(h.t, h.linf, p);
        CHECK(r.T_est == doctest::Approx(0.3).epsilon(1e-9));
        CHECK(r.rate_exponent == doctest::Approx(-1.0 / (p - 1.0)).epsilon(1e-6));
        CHECK(r.fit_samples >= 20);
    }
    const auto h = ode_history(3.0, 0.3, 10);
    CHECK_THROWS_AS(estimate_blowup(h.t, h.linf, 3.0), FitError);
}

TEST_CASE("resolved prefix stops where T - t is below the resolution of t") {
    std::vector<double> t = {0.5, 0.9, 0.999}, linf = {1.0, 10.0, 1e9};
    CHECK(resolved_prefix(t, linf, 3.0) == 2);
}

TEST_CASE("decay exponent") {
    std::vector<double> t, linf;
    for (int i = 0; i <= 50; ++i) {
        t.push_back(std::pow(10.0, i / 25.0));
        linf.push_back(3.0 * std::pow(t.back(), -2.0));
    }
    const auto d = decay_fit(t, linf);
    CHECK(d.exponent == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(d.samples == 51);
}

TEST_CASE("universal profile of the flat solution tends to its constant") {
    const auto h = ode_history(3.0, 0.3, 400);
    const double M = universal_profile(h.t, h.linf, 3.0, 0.3);
    CHECK(M < 1.0 / std::sqrt(2.0));
    CHECK(M > 0.7);
}

TEST_CASE("backward similarity of the flat solution is s-invariant") {
    const auto g = Grid::interval(-1.0, 1.0, 201);
    const double T = 0.3;
    std::vector<double> times;
    std::vector<Field> fields;
    for (double t : {0.0, 0.1, 0.2, 0.29}) {
        times.push_back(t);
        fields.push_back(Field::constant(g, std::pow(2.0 * (T - t), -0.5)));
    }
    const auto seq = backward_similarity(times, fields, 0.0, T, 3.0, 1.0, 21);
    CHECK(seq.s_variation() <= 1e-12);
    CHECK(seq.w.front().front() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(backward_similarity_residual(seq, 3.0) <= 1e-8);
}

TEST_CASE("energy monitor on a blow-up run") {
    const auto g = Grid::interval(0.0, 1.0, 256);
    ProblemSpec pr{g, {}, NonlinearitySpec::power(3.0), 85};
    StepperConfig sc;
    const auto traj = evolve(pr, sc, Field::from_function(g, [](double x) { return 20.0 * std::sin(pi * x); }));
    const auto m = energy_blowup_monitor(traj);
    CHECK(m.verdict == EnergyMonitorReport::Verdict::EnergyDiverging);
    CHECK(m.energy_monotone_final);
    CHECK(m.norm_increasing_final);
    CHECK(m.final_energy < m.initial_energy);
    const auto r = estimate_blowup(traj, 3.0);
    CHECK(r.rate_exponent == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("forward decay on a large interval") {
    const auto g = Grid::interval(-100.0, 100.0, 2049);
    ProblemSpec pr{g, {}, NonlinearitySpec::power(3.5), 682};
    StepperConfig sc;
    sc.dt0 = 0.05;
    sc.t_end = 100.0;
    sc.record_every = 10;
    const auto traj = evolve(pr, sc, Field::from_function(g, [](double x) { return 0.5 * std::exp(-x * x); }));
    CHECK(traj.outcome.kind == Outcome::Kind::GlobalToTend);
    const auto d = decay_fit(traj, 3.5, 10.0);
    CHECK(std::abs(d.exponent + 1.0 / 2.5) <= 0.15);
    CHECK(d.exponent == doctest::Approx(-0.5).epsilon(0.02));
}
