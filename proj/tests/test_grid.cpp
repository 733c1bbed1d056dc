#include <doctest.h>

#include <cmath>
#include <numbers>

#include "npl/errors.hpp"
#include "npl/grid.hpp"

using namespace npl;
using std::numbers::pi;

TEST_CASE("interval quadrature integrates smooth functions") {
    const auto g = Grid::interval(0.0, 1.0, 256);
    const Field f = Field::from_function(g, [](double x) { return std::sin(pi * x); });
    CHECK(integrate(f) == doctest::Approx(2.0 / pi).epsilon(1e-12));
    CHECK(g->measure() == doctest::Approx(1.0));
}

TEST_CASE("ball quadrature carries the r^2 surface factor") {
    const auto g = Grid::ball(1.0, 3, 257);
    CHECK(integrate(Field::constant(g, 1.0)) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-12));
    const Field r2 = Field::from_function(g, [](double r) { return r * r; });
    CHECK(integrate(r2) == doctest::Approx(4.0 * pi / 5.0).epsilon(1e-10));
    CHECK(g->weights()[0] == 0.0);
}

TEST_CASE("grid construction rejects bad input") {
    CHECK_THROWS_AS(Grid::interval(1.0, 0.0, 64), InvalidArgument);
    CHECK_THROWS_AS(Grid::interval(0.0, 1.0, 4), InvalidArgument);
    CHECK_THROWS_AS(Grid::ball(-1.0, 3, 64), InvalidArgument);
}

TEST_CASE("fields refuse non-finite values and mismatched grids") {
    const auto g = Grid::interval(0.0, 1.0, 16);
    std::vector<double> v(16, 0.0);
    v[3] = std::nan("");
    CHECK_THROWS_AS(Field(g, v), OverflowError);
    const auto h = Grid::interval(0.0, 2.0, 16);
    CHECK_THROWS(Field::zeros(g) + Field::zeros(h));
}

TEST_CASE("lq norms") {
    const auto g = Grid::interval(0.0, 1.0, 513);
    const Field f = Field::from_function(g, [](double x) { return 0.9 * std::sin(pi * x); });
    // int sin^2 = 1/2 on (0, 1)
    CHECK(lq_norm(f, 2.0) == doctest::Approx(0.9 * std::sqrt(0.5)).epsilon(1e-10));
    CHECK(lq_norm(f, INFINITY) == doctest::Approx(0.9).epsilon(1e-4));
    double prev = 0.0;
    for (double q : {1.0, 1.5, 2.0, 3.0, 6.0, 12.0}) {
        const double v = lq_norm(f, q);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK_THROWS_AS(lq_norm(f, 0.5), InvalidArgument);
}

TEST_CASE("h1 norm of sin(pi x)") {
    const auto g = Grid::interval(0.0, 1.0, 1025);
    const Field f = Field::from_function(g, [](double x) { return std::sin(pi * x); });
    CHECK(h1_norm(f) == doctest::Approx(std::sqrt((1.0 + pi * pi) / 2.0)).epsilon(1e-5));
}

TEST_CASE("sign changes") {
    const auto g = Grid::interval(0.0, 1.0, 400);
    CHECK(sign_change_count(Field::from_function(g, [](double x) { return std::sin(3.0 * pi * x); })) == 2);
    CHECK(sign_change_count(Field::zeros(g)) == 0);
}

TEST_CASE("cubic interpolation is exact on cubics and zero outside") {
    const auto g = Grid::interval(-1.0, 2.0, 31);
    auto c = [](double x) { return 1.0 - 2.0 * x + 0.5 * x * x * x; };
    const Field f = Field::from_function(g, c);
    for (double x : {-0.93, 0.0, 0.37, 1.51, 1.99}) CHECK(interpolate(f, x) == doctest::Approx(c(x)).epsilon(1e-12));
    CHECK(interpolate(f, 2.5) == 0.0);
    const auto b = Grid::ball(1.0, 3, 41);
    const Field e = Field::from_function(b, [](double r) { return 1.0 - r * r; });
    CHECK(interpolate(e, 0.013) == doctest::Approx(1.0 - 0.013 * 0.013).epsilon(1e-10));
}
