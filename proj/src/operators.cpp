#include "npl/operators.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "npl/errors.hpp"

namespace npl {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

constexpr double resolution_tolerance = 1e-6;

}  // namespace

SpectralBasis::SpectralBasis(GridPtr grid, std::size_t modes) : grid_(std::move(grid)) {
    const Grid& g = *grid_;
    const double extent = g.is_radial() ? g.radius() : g.length();
    eigenvalues_.resize(modes);
    for (std::size_t k = 0; k < modes; ++k) {
        const double w = static_cast<double>(k + 1) * std::numbers::pi / extent;
        eigenvalues_[k] = w * w;
    }
    transform_size_ = g.size() - 2;
    scale_ = g.is_radial() ? 1.0 / std::sqrt(2.0 * std::numbers::pi * extent)
                           : std::sqrt(2.0 / extent);

    std::vector<double> a(transform_size_), b(transform_size_);
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_r2r_1d(static_cast<int>(transform_size_), a.data(), b.data(), FFTW_RODFT00,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan_ == nullptr) throw std::runtime_error("FFTW could not create a DST-I plan");
}

SpectralBasis::~SpectralBasis() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

std::shared_ptr<const SpectralBasis> SpectralBasis::build(GridPtr grid, std::size_t modes) {
    if (!grid) throw InvalidArgument("basis without grid");
    if (grid->is_radial() && grid->dimension() != 3) {
        throw UnsupportedGrid("radial spectral basis is only available for n = 3, got n = " +
                              std::to_string(grid->dimension()));
    }
    if (modes == 0) throw InvalidArgument("basis needs at least one mode");
    if (modes > grid->size() / 2) {
        throw InvalidArgument("basis size K = " + std::to_string(modes) +
                              " exceeds N/2 = " + std::to_string(grid->size() / 2));
    }
    return std::shared_ptr<const SpectralBasis>(new SpectralBasis(std::move(grid), modes));
}

// out_k = 2 sum_j in_j sin(pi (j+1)(k+1) / (M+1)).
void SpectralBasis::dst(std::span<const double> in, std::span<double> out) const {
    fftw_execute_r2r(static_cast<fftw_plan>(plan_), const_cast<double*>(in.data()), out.data());
}

std::vector<double> SpectralBasis::analyze(const Field& f) const {
    if (!(f.grid() == *grid_)) throw InvalidArgument("field and basis live on different grids");
    const Grid& g = *grid_;
    const double h = g.spacing();
    std::vector<double> in(transform_size_), out(transform_size_);
    for (std::size_t j = 0; j < transform_size_; ++j) {
        in[j] = g.is_radial() ? g.node(j + 1) * f[j + 1] : f[j + 1];
    }
    dst(in, out);
    const double factor = g.is_radial() ? 4.0 * std::numbers::pi * h * scale_ * 0.5 : h * scale_ * 0.5;
    std::vector<double> c(modes());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = factor * out[k];
    return c;
}

Field SpectralBasis::synthesize(std::span<const double> coefficients) const {
    if (coefficients.size() != modes()) throw InvalidArgument("coefficient count does not match basis");
    const Grid& g = *grid_;
    std::vector<double> in(transform_size_, 0.0), out(transform_size_);
    std::copy(coefficients.begin(), coefficients.end(), in.begin());
    dst(in, out);
    std::vector<double> v(g.size(), 0.0);
    for (std::size_t j = 0; j < transform_size_; ++j) v[j + 1] = 0.5 * scale_ * out[j];
    if (g.is_radial()) {
        for (std::size_t j = 1; j + 1 < v.size(); ++j) v[j] /= g.node(j);
        // Limit of sin(k pi r / R) / r at the centre.
        double centre = 0.0;
        for (std::size_t k = 0; k < modes(); ++k) {
            centre += coefficients[k] * std::sqrt(eigenvalues_[k]);
        }
        v[0] = scale_ * centre;
    }
    return Field(grid_, std::move(v));
}

Field SpectralBasis::mode(std::size_t index) const {
    if (index >= modes()) throw InvalidArgument("mode index out of range");
    std::vector<double> c(modes(), 0.0);
    c[index] = 1.0;
    return synthesize(c);
}

double SpectralBasis::tail_fraction(const Field& f) const {
    const auto w = grid_->collocation_weights();
    double total = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) total += w[i] * f[i] * f[i];
    if (total == 0.0) return 0.0;
    double captured = 0.0;
    for (double c : analyze(f)) captured += c * c;
    return std::max(0.0, total - captured) / total;
}

// ---------------------------------------------------------------------------

void OperatorSpec::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("operator order alpha must lie in (0, 1]");
    if (!(mu >= 0.0)) throw InvalidArgument("operator coefficient mu must be nonnegative");
    if (flavor == Flavor::Restricted1D && !(alpha < 1.0)) {
        throw InvalidArgument("restricted fractional Laplacian needs alpha < 1");
    }
}

std::vector<double> operator_symbol(const SpectralBasis& basis, const OperatorSpec& spec) {
    spec.validate();
    std::vector<double> s(basis.modes());
    const auto lam = basis.eigenvalues();
    for (std::size_t k = 0; k < s.size(); ++k) {
        s[k] = (spec.alpha == 1.0 ? lam[k] : std::pow(lam[k], spec.alpha)) + spec.mu;
    }
    return s;
}

Field apply_operator(const SpectralBasis& basis, const OperatorSpec& spec, const Field& f) {
    spec.validate();
    if (spec.flavor == OperatorSpec::Flavor::Restricted1D) {
        return restricted_frac_lap_1d(f, spec.alpha) + f * spec.mu;
    }
    const double tail = basis.tail_fraction(f);
    if (tail > resolution_tolerance) {
        throw ResolutionError("field not resolved by " + std::to_string(basis.modes()) +
                              " modes (tail energy fraction " + std::to_string(tail) + ")");
    }
    auto c = basis.analyze(f);
    const auto sigma = operator_symbol(basis, spec);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= sigma[k];
    return basis.synthesize(c);
}

double h1_norm(const SpectralBasis& basis, const Field& f) {
    const auto c = basis.analyze(f);
    const auto lam = basis.eigenvalues();
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += (lam[k] + 1.0) * c[k] * c[k];
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------

double fractional_laplacian_constant_1d(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("fractional order must lie in (0, 1)");
    return std::pow(4.0, alpha) * std::tgamma(0.5 + alpha) /
           (std::sqrt(std::numbers::pi) * std::abs(std::tgamma(-alpha)));
}

Field restricted_frac_lap_1d(const Field& f, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("fractional order must lie in (0, 1)");
    const Grid& g = f.grid();
    if (!g.is_interval()) throw UnsupportedGrid("restricted fractional Laplacian needs an interval grid");

    const auto n = static_cast<long>(g.size());
    const double h = g.spacing();
    const double beta = 1.0 - 2.0 * alpha;

    // Per-cell weights of linear interpolation of G against y^beta on [mh, (m+1)h].
    std::vector<double> left(static_cast<std::size_t>(n)), right(static_cast<std::size_t>(n));
    for (long m = 0; m + 1 < n; ++m) {
        const double y0 = h * static_cast<double>(m), y1 = y0 + h;
        const double i0 = (std::pow(y1, beta + 1.0) - std::pow(y0, beta + 1.0)) / (beta + 1.0);
        const double i1 = (std::pow(y1, beta + 2.0) - std::pow(y0, beta + 2.0)) / (beta + 2.0);
        left[static_cast<std::size_t>(m)] = (y1 * i0 - i1) / h;
        right[static_cast<std::size_t>(m)] = (i1 - y0 * i0) / h;
    }

    const auto u = [&](long j) { return (j < 0 || j >= n) ? 0.0 : f[static_cast<std::size_t>(j)]; };
    const double c = fractional_laplacian_constant_1d(alpha);
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    std::vector<double> G(static_cast<std::size_t>(n));
    for (long i = 1; i + 1 < n; ++i) {
        const long reach = std::max(i, n - 1 - i);
        const double ui = u(i);
        for (long m = 1; m <= reach; ++m) {
            const double y = h * static_cast<double>(m);
            G[static_cast<std::size_t>(m)] = (2.0 * ui - u(i + m) - u(i - m)) / (y * y);
        }
        G[0] = (4.0 * G[1] - G[2]) / 3.0;
        double s = 0.0;
        for (long m = 0; m < reach; ++m) {
            s += left[static_cast<std::size_t>(m)] * G[static_cast<std::size_t>(m)] +
                 right[static_cast<std::size_t>(m)] * G[static_cast<std::size_t>(m + 1)];
        }
        const double y_far = h * static_cast<double>(reach);
        s += 2.0 * ui * std::pow(y_far, -2.0 * alpha) / (2.0 * alpha);
        out[static_cast<std::size_t>(i)] = c * s;
    }
    return Field(f.grid_ptr(), std::move(out));
}

// ---------------------------------------------------------------------------

Field riesz_potential(const Field& f, int n) {
    if (n < 3) throw InvalidArgument("Riesz potential needs n >= 3");
    const Grid& g = f.grid();
    if (g.is_interval()) {
        throw UnsupportedGrid("kernel |x-y|^-(n-2) with n >= 3 is not integrable on a line; "
                              "use riesz_potential_1d with an exponent below 1");
    }
    if (g.dimension() != 3 || n != 3) throw UnsupportedGrid("Riesz potential is implemented for n = 3 balls");

    const auto w = g.weights();
    const auto r = g.nodes();
    const std::size_t N = g.size();
    std::vector<double> v(N, 0.0);
    // outer[i] = sum_{j > i} w_j f_j / r_j
    double outer = 0.0;
    std::vector<double> outer_sum(N, 0.0);
    for (std::size_t j = N; j-- > 0;) {
        outer_sum[j] = outer;
        if (r[j] > 0.0) outer += w[j] * f[j] / r[j];
    }
    double inner = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        inner += w[i] * f[i];
        v[i] = outer_sum[i] + (r[i] > 0.0 ? inner / r[i] : 0.0);
    }
    return Field(f.grid_ptr(), std::move(v));
}

Field riesz_potential_1d(const Field& f, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("1D kernel exponent must lie in (0, 1)");
    const Grid& g = f.grid();
    if (!g.is_interval()) throw UnsupportedGrid("riesz_potential_1d needs an interval grid");

    const std::size_t N = g.size();
    const double h = g.spacing();
    const auto w = g.weights();
    auto p0 = [gamma](double s) {
        return std::copysign(std::pow(std::abs(s), 1.0 - gamma), s) / (1.0 - gamma);
    };
    auto p1 = [gamma](double s) { return std::pow(std::abs(s), 2.0 - gamma) / (2.0 - gamma); };

    // P(i, j) = int hat_j(y) |x_i - y|^{-gamma} dy, Toeplitz in (j - i) up to the end hats.
    auto cell_pair = [&](long offset) {
        const double s0 = h * static_cast<double>(offset), s1 = s0 + h;
        const double j0 = p0(s1) - p0(s0), j1 = p1(s1) - p1(s0);
        return std::pair{(s1 * j0 - j1) / h, (j1 - s0 * j0) / h};
    };
    std::vector<double> P(N * N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t c = 0; c + 1 < N; ++c) {
            const auto [l, rgt] = cell_pair(static_cast<long>(c) - static_cast<long>(i));
            P[i * N + c] += l;
            P[i * N + c + 1] += rgt;
        }
    }
    std::vector<double> v(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < N; ++j) s += 0.5 * (w[i] * P[i * N + j] + w[j] * P[j * N + i]) * f[j];
        v[i] = s / w[i];
    }
    return Field(f.grid_ptr(), std::move(v));
}

}  // namespace npl
