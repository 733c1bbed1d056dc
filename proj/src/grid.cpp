#include "npl/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "npl/errors.hpp"

namespace npl {

namespace {

// Gregory end corrections exact for cubics (differences up to third order).
constexpr std::array<double, 4> gregory_end = {251.0 / 720.0, 299.0 / 240.0, 211.0 / 240.0,
                                               739.0 / 720.0};

std::vector<double> gregory_factors(std::size_t n) {
    std::vector<double> g(n, 1.0);
    for (std::size_t j = 0; j < gregory_end.size(); ++j) {
        g[j] = gregory_end[j];
        g[n - 1 - j] = gregory_end[j];
    }
    return g;
}

}  // namespace

double unit_sphere_area(int n) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

Grid::Grid(Kind kind, double lower, double upper, int dimension, std::size_t n)
    : kind_(kind), lower_(lower), upper_(upper), dimension_(dimension) {
    spacing_ = (upper - lower) / static_cast<double>(n - 1);
    nodes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) nodes_[i] = lower + spacing_ * static_cast<double>(i);
    nodes_.back() = upper;

    const auto g = gregory_factors(n);
    weights_.resize(n);
    collocation_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double measure_density = 1.0;
        if (kind == Kind::RadialBall) {
            measure_density = unit_sphere_area(dimension) * std::pow(nodes_[i], dimension - 1);
        }
        weights_[i] = spacing_ * g[i] * measure_density;
        const double trap = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        collocation_[i] = spacing_ * trap * measure_density;
    }
    if (kind == Kind::RadialBall) {
        measure_ = unit_sphere_area(dimension) * std::pow(upper, dimension) / dimension;
    } else {
        measure_ = upper - lower;
    }
}

std::shared_ptr<const Grid> Grid::interval(double a, double b, std::size_t n) {
    if (!(b > a)) throw InvalidArgument("interval grid needs a < b");
    if (n < min_nodes) throw InvalidArgument("grid needs at least 8 nodes");
    return std::shared_ptr<const Grid>(new Grid(Kind::Interval, a, b, 1, n));
}

std::shared_ptr<const Grid> Grid::ball(double radius, int dimension, std::size_t n) {
    if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
    if (dimension < 2) throw InvalidArgument("radial grids need dimension >= 2");
    if (n < min_nodes) throw InvalidArgument("grid needs at least 8 nodes");
    return std::shared_ptr<const Grid>(new Grid(Kind::RadialBall, 0.0, radius, dimension, n));
}

bool Grid::operator==(const Grid& other) const {
    return kind_ == other.kind_ && lower_ == other.lower_ && upper_ == other.upper_ &&
           dimension_ == other.dimension_ && size() == other.size();
}

// ---------------------------------------------------------------------------

Field::Field(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw InvalidArgument("field without grid");
    if (values_.size() != grid_->size()) throw InvalidArgument("field size does not match grid");
    for (double v : values_) {
        if (!std::isfinite(v)) throw OverflowError("non-finite field value");
    }
}

Field Field::zeros(GridPtr grid) {
    const auto n = grid->size();
    return Field(std::move(grid), std::vector<double>(n, 0.0));
}

Field Field::constant(GridPtr grid, double c) {
    const auto n = grid->size();
    return Field(std::move(grid), std::vector<double>(n, c));
}

Field Field::from_function(GridPtr grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->node(i));
    return Field(std::move(grid), std::move(v));
}

void Field::check_same_grid(const Field& other) const {
    if (grid_ != other.grid_ && !(*grid_ == *other.grid_)) {
        throw InvalidArgument("fields live on different grids");
    }
}

Field Field::operator+(const Field& other) const {
    check_same_grid(other);
    std::vector<double> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
    return Field(grid_, std::move(v));
}

Field Field::operator-(const Field& other) const {
    check_same_grid(other);
    std::vector<double> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= other.values_[i];
    return Field(grid_, std::move(v));
}

Field Field::operator-() const { return *this * -1.0; }

Field Field::operator*(double c) const {
    std::vector<double> v(values_);
    for (auto& x : v) x *= c;
    return Field(grid_, std::move(v));
}

Field Field::operator*(const Field& other) const {
    check_same_grid(other);
    std::vector<double> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= other.values_[i];
    return Field(grid_, std::move(v));
}

Field Field::map(const std::function<double(double)>& f) const {
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(values_[i]);
    return Field(grid_, std::move(v));
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

// ---------------------------------------------------------------------------

double integrate(const Field& f) {
    const auto w = f.grid().weights();
    const auto v = f.values();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i];
    return s;
}

double lq_power(const Field& f, double q) {
    if (!(q >= 1.0)) throw InvalidArgument("lq norm needs q >= 1");
    if (std::isinf(q)) throw InvalidArgument("lq_power needs finite q");
    const auto w = f.grid().weights();
    const auto v = f.values();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * std::pow(std::abs(v[i]), q);
    return s;
}

double lq_norm(const Field& f, double q) {
    if (!(q >= 1.0)) throw InvalidArgument("lq norm needs q >= 1");
    if (std::isinf(q)) return f.max_abs();
    const double scale = f.max_abs();
    if (scale == 0.0) return 0.0;
    // Scaling by the maximum keeps |f|^q representable for large q.
    const auto w = f.grid().weights();
    const auto v = f.values();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * std::pow(std::abs(v[i]) / scale, q);
    return scale * std::pow(s, 1.0 / q);
}

Field gradient_fd(const Field& f) {
    const auto v = f.values();
    const auto n = v.size();
    const double h = f.grid().spacing();
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    if (f.grid().is_radial()) d[0] = 0.0;  // smooth radial fields are even in r
    return Field(f.grid_ptr(), std::move(d));
}

double h1_norm(const Field& f) {
    const Field g = gradient_fd(f);
    return std::sqrt(integrate(g * g) + integrate(f * f));
}

int sign_change_count(const Field& f, std::optional<double> threshold) {
    const double thr = threshold.value_or(1e-10 * f.max_abs());
    if (thr < 0.0) throw InvalidArgument("sign threshold must be nonnegative");
    int count = 0;
    int last = 0;
    for (double v : f.values()) {
        if (std::abs(v) <= thr) continue;
        const int s = v > 0.0 ? 1 : -1;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

double interpolate(const Field& f, double x) {
    const Grid& g = f.grid();
    const auto v = f.values();
    const auto n = static_cast<long>(v.size());
    if (g.is_radial()) x = std::abs(x);
    if (x < g.lower() || x > g.upper()) return 0.0;

    const double h = g.spacing();
    const double s = (x - g.lower()) / h;
    long i0 = static_cast<long>(std::floor(s)) - 1;
    // One-sided stencils at interval ends; radial fields are even in r, so
    // the stencil may reach across the centre.
    i0 = std::clamp(i0, g.is_radial() ? -1L : 0L, n - 4);
    auto sample = [&](long j) { return v[static_cast<std::size_t>(j < 0 ? -j : j)]; };

    double result = 0.0;
    for (long a = 0; a < 4; ++a) {
        double basis = 1.0;
        for (long b = 0; b < 4; ++b) {
            if (b == a) continue;
            basis *= (s - static_cast<double>(i0 + b)) / static_cast<double>(a - b);
        }
        result += basis * sample(i0 + a);
    }
    return result;
}

}  // namespace npl
