#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace npl {

/**
 * Uniform one-dimensional discretisation of either an interval [a, b] or
 * the radial coordinate r in [0, R] of an n-dimensional ball.
 *
 * Two weight sets are carried:
 *  - weights(): composite trapezoid with fourth-order Gregory end
 *    corrections, incorporating the measure (dx, or |S^{n-1}| r^{n-1} dr).
 *    This is the quadrature behind integrate() and all norms.
 *  - collocation_weights(): plain trapezoid with the same measure. Sine
 *    modes are exactly orthogonal under it (DST-I), so spectral
 *    projections use it.
 *
 * Grids are immutable and shared through GridPtr.
 */
class Grid {
public:
    enum class Kind { Interval, RadialBall };

    static constexpr std::size_t min_nodes = 8;

    static std::shared_ptr<const Grid> interval(double a, double b, std::size_t n);
    static std::shared_ptr<const Grid> interval(double length, std::size_t n) {
        return interval(0.0, length, n);
    }
    static std::shared_ptr<const Grid> ball(double radius, int dimension, std::size_t n);

    Kind kind() const { return kind_; }
    bool is_interval() const { return kind_ == Kind::Interval; }
    bool is_radial() const { return kind_ == Kind::RadialBall; }

    std::size_t size() const { return nodes_.size(); }
    double lower() const { return lower_; }
    double upper() const { return upper_; }
    double length() const { return upper_ - lower_; }
    double spacing() const { return spacing_; }
    // Ball radius; for intervals the half length.
    double radius() const { return is_radial() ? upper_ : 0.5 * length(); }
    // Spatial dimension of the domain (1 for intervals).
    int dimension() const { return dimension_; }
    // |Omega|.
    double measure() const { return measure_; }

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    std::span<const double> collocation_weights() const { return collocation_; }

    double node(std::size_t i) const { return nodes_[i]; }

    bool operator==(const Grid& other) const;

private:
    Grid(Kind kind, double lower, double upper, int dimension, std::size_t n);

    Kind kind_;
    double lower_;
    double upper_;
    int dimension_;
    double spacing_;
    double measure_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> collocation_;
};

using GridPtr = std::shared_ptr<const Grid>;

// Surface area of the unit sphere S^{n-1} in R^n.
double unit_sphere_area(int n);

/// Real samples on a grid. Values are always finite; constructing a
/// field from NaN/Inf raises OverflowError.
class Field {
public:
    Field(GridPtr grid, std::vector<double> values);
    static Field zeros(GridPtr grid);
    static Field constant(GridPtr grid, double c);
    static Field from_function(GridPtr grid, const std::function<double(double)>& f);

    const GridPtr& grid_ptr() const { return grid_; }
    const Grid& grid() const { return *grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& data() const { return values_; }

    Field operator+(const Field& other) const;
    Field operator-(const Field& other) const;
    Field operator-() const;
    Field operator*(double c) const;
    friend Field operator*(double c, const Field& f) { return f * c; }
    // Pointwise product.
    Field operator*(const Field& other) const;

    Field map(const std::function<double(double)>& f) const;
    double max_abs() const;

private:
    void check_same_grid(const Field& other) const;

    GridPtr grid_;
    std::vector<double> values_;
};

// Sum of w_i f_i with the corrected-trapezoid weights.
double integrate(const Field& f);

// (int |f|^q)^{1/q}; q = +infinity gives max |f_i|. Throws for q < 1.
double lq_norm(const Field& f, double q);

// |f|_q^q without the root, the quantity that appears in energies.
double lq_power(const Field& f, double q);

// Derivative along the grid coordinate: centred differences inside,
// second-order one-sided stencils at both ends.
Field gradient_fd(const Field& f);

// sqrt(int |grad f|^2 + f^2) with the finite-difference gradient.
double h1_norm(const Field& f);

// Number of strict sign alternations along the coordinate, ignoring samples
// with |f| <= threshold. Default threshold is 1e-10 * max|f|.
int sign_change_count(const Field& f, std::optional<double> threshold = std::nullopt);

// Four-point Lagrange (cubic) interpolation on the uniform grid. Outside the
// domain the field is zero (Dirichlet extension).
double interpolate(const Field& f, double x);

}  // namespace npl
