#include <doctest.h>

#include <cmath>
#include <numbers>

#include "npl/energy.hpp"
#include "npl/errors.hpp"
#include "npl/integrate.hpp"

using namespace npl;
using std::numbers::pi;

TEST_CASE("energy of a scaled first mode") {
    const auto g = Grid::interval(0.0, 1.0, 256);
    ProblemSpec pr{g, {}, NonlinearitySpec::power(3.0), 85};
    const auto b = pr.make_basis();
    const double a = 1.7;
    const auto e = energy(pr, *b, b->mode(0) * a);
    // phi_1 = sqrt(2) sin(pi x): int phi_1^4 = 3/2
    CHECK(e.kinetic == doctest::Approx(0.5 * pi * pi * a * a).epsilon(1e-10));
    CHECK(e.potential == doctest::Approx(std::pow(a, 4) * 1.5 / 4.0).epsilon(1e-8));
    CHECK(e.total == doctest::Approx(e.kinetic - e.potential));
    CHECK(e.interaction == 0.0);
}

TEST_CASE("SPS energy includes mass and interaction") {
    const auto g = Grid::ball(1.0, 3, 257);
    OperatorSpec op;
    op.mu = 1.0;
    ProblemSpec pr{g, op, NonlinearitySpec::sps(3.5, 2.0), 85};
    const auto b = pr.make_basis();
    const Field u = b->mode(0) * 0.5;
    const auto e = energy(pr, *b, u);
    CHECK(e.interaction == doctest::Approx(interaction_integral(u)).epsilon(1e-12));
    CHECK(e.kinetic == doctest::Approx(0.5 * (pi * pi + 1.0) * 0.25).epsilon(1e-10));
    CHECK(e.total == doctest::Approx(e.kinetic - e.local_term + 2.0 * e.interaction / 4.0).epsilon(1e-10));
}

TEST_CASE("energy rejects unresolved fields") {
    const auto g = Grid::interval(0.0, 1.0, 256);
    ProblemSpec pr{g, {}, NonlinearitySpec::power(3.0), 20};
    const auto b = pr.make_basis();
    const Field rough = Field::from_function(g, [](double x) { return std::sin(60.0 * pi * x); });
    CHECK_THROWS_AS(energy(pr, *b, rough), ResolutionError);
}

TEST_CASE("energy dissipation along a small-data run") {
    const auto g = Grid::interval(0.0, 1.0, 256);
    ProblemSpec pr{g, {}, NonlinearitySpec::power(3.0), 85};
    StepperConfig sc;
    sc.t_end = 0.5;
    const auto traj = evolve(pr, sc, Field::from_function(g, [](double x) { return 0.1 * std::sin(pi * x); }));
    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
        CHECK(dissipation_residual(traj, i) <= 1e-3);
        CHECK(traj.samples[i + 1].energy.total <= traj.samples[i].energy.total + 1e-14);
    }
    CHECK_THROWS(dissipation_residual(traj, traj.samples.size() - 1));
}

TEST_CASE("finite differences") {
    const auto g = Grid::interval(0.0, 1.0, 401);
    const Field f = Field::from_function(g, [](double x) { return std::sin(pi * x); });
    const Field d = gradient_fd4(f);
    double err = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) err = std::max(err, std::abs(d[i] - pi * std::cos(pi * g->node(i))));
    CHECK(err <= 1e-7);
    CHECK(boundary_normal_derivative(f) == doctest::Approx(-pi).epsilon(1e-8));
}

TEST_CASE("combined inequality constant") {
    // eps = (q-2)/12, C = max(R^2, 1)/(4 eps)
    CHECK(combined_inequality_constant(3.5, 1.0) == doctest::Approx(2.0));
    CHECK(combined_inequality_constant(3.5, 2.0) == doctest::Approx(8.0));
}

TEST_CASE("identities hold on the zero field") {
    const auto g = Grid::ball(1.0, 3, 129);
    CHECK(pohozaev_residual(Field::zeros(g), Field::zeros(g), 3.5, 1.0) == doctest::Approx(0.0));
    CHECK(multiplier_identity_residual(Field::zeros(g), Field::zeros(g), 3.5, 1.0) == doctest::Approx(0.0));
}
