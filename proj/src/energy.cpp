#include "npl/energy.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>

#include "npl/errors.hpp"
#include "npl/integrate.hpp"

namespace npl {

namespace {

void require_ball3(const Field& u, const char* what) {
    const Grid& g = u.grid();
    if (!g.is_radial() || g.dimension() != 3) {
        throw UnsupportedGrid(std::string(what) + " needs the n = 3 radial ball");
    }
}

double max_magnitude(std::initializer_list<double> terms) {
    double m = 1.0;
    for (double t : terms) m = std::max(m, std::abs(t));
    return m;
}

struct SpsTerms {
    double grad2;   // int |grad u|^2
    double mass;    // int u^2
    double w;       // int |u|^{q+1}
    double inter;   // I(u)
};

SpsTerms sps_terms(const Field& u, double q) {
    const Field du = gradient_fd4(u);
    return {integrate(du * du), integrate(u * u), lq_power(u, q + 1.0), interaction_integral(u)};
}

}  // namespace

EnergyBreakdown energy(const ProblemSpec& problem, const SpectralBasis& basis, const Field& u) {
    const double tail = basis.tail_fraction(u);
    if (tail > 1e-6) throw ResolutionError("energy needs a field resolved by the basis");
    const auto c = basis.analyze(u);
    return energy(problem, basis, c, u);
}

EnergyBreakdown energy(const ProblemSpec& problem, const SpectralBasis& basis,
                       std::span<const double> coefficients, const Field& u) {
    const auto sigma = operator_symbol(basis, problem.op);
    EnergyBreakdown e;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        e.kinetic += 0.5 * sigma[k] * coefficients[k] * coefficients[k];
    }
    const auto& nl = problem.nonlinearity;
    switch (nl.kind) {
        case NonlinearitySpec::Kind::Power:
            e.local_term = lq_power(u, nl.p + 1.0) / (nl.p + 1.0);
            e.potential = e.local_term;
            break;
        case NonlinearitySpec::Kind::Choquard:
            e.potential = eval_potential(nl, u);
            break;
        case NonlinearitySpec::Kind::Sps: {
            e.local_term = lq_power(u, nl.q + 1.0) / (nl.q + 1.0);
            e.interaction = interaction_integral(u);
            const double c = nl.sign == NonlinearitySpec::Sign::Minus ? -nl.lambda : nl.lambda;
            e.potential = e.local_term + 0.25 * c * e.interaction;
            break;
        }
    }
    e.total = e.kinetic - e.potential;
    return e;
}

double dissipation_residual(const Trajectory& traj, std::size_t i) {
    if (i + 1 >= traj.samples.size()) throw InvalidArgument("dissipation residual index out of range");
    const auto& a = traj.samples[i];
    const auto& b = traj.samples[i + 1];
    return std::abs(b.energy.total - a.energy.total + b.dissipation - a.dissipation) /
           (std::abs(a.energy.total) + 1.0);
}

// ---------------------------------------------------------------------------

Field gradient_fd4(const Field& f) {
    const auto v = f.values();
    const auto n = v.size();
    const double h = f.grid().spacing();
    const bool radial = f.grid().is_radial();
    std::vector<double> d(n);
    auto centred = [&](double m2, double m1, double p1, double p2) {
        return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    };
    for (std::size_t i = 2; i + 2 < n; ++i) d[i] = centred(v[i - 2], v[i - 1], v[i + 1], v[i + 2]);
    if (radial) {
        d[0] = 0.0;
        d[1] = centred(v[1], v[0], v[2], v[3]);  // even reflection across r = 0
    } else {
        d[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h);
        d[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / (12.0 * h);
    }
    d[n - 1] = (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] + 3.0 * v[n - 5]) /
               (12.0 * h);
    d[n - 2] = (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] - v[n - 5]) / (12.0 * h);
    return Field(f.grid_ptr(), std::move(d));
}

double boundary_normal_derivative(const Field& f) {
    const auto v = f.values();
    const auto n = v.size();
    const double h = f.grid().spacing();
    return (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] + 3.0 * v[n - 5]) /
           (12.0 * h);
}

double pohozaev_residual(const Field& u, const Field& u_t, double q, double lambda) {
    require_ball3(u, "Pohozaev identity");
    const auto t = sps_terms(u, q);
    const Field du = gradient_fd4(u);
    const Field r = Field::from_function(u.grid_ptr(), [](double x) { return x; });
    const double flux_integral = integrate(u_t * r * du);
    const double R = u.grid().radius();
    const double un = boundary_normal_derivative(u);
    const double boundary = 0.5 * 4.0 * std::numbers::pi * R * R * R * un * un;

    const double a = 0.5 * t.grad2, b = 1.5 * t.mass, c = 3.0 * t.w / (q + 1.0),
                 d = 1.25 * lambda * t.inter;
    const double lhs = a + b - c + d;
    const double rhs = flux_integral - boundary;
    return std::abs(lhs - rhs) / max_magnitude({a, b, c, d, flux_integral, boundary});
}

double multiplier_identity_residual(const Field& u, const Field& u_t, double q, double lambda) {
    require_ball3(u, "multiplier identity");
    const auto t = sps_terms(u, q);
    const double h12 = t.grad2 + t.mass;
    const double lhs = integrate(u * u_t);
    const double li = lambda * t.inter;
    return std::abs(lhs + h12 - t.w + li) / max_magnitude({lhs, h12, t.w, li});
}

double combined_inequality_constant(double q, double radius) {
    const double eps = (q - 2.0) / 12.0;
    return std::max(radius * radius, 1.0) / (4.0 * eps);
}

std::pair<double, double> combined_inequality_check(const Field& u, const Field& u_t, double q,
                                                    double lambda) {
    if (!(q > 2.0 && q <= 3.0)) throw InvalidArgument("combined inequality needs q in (2, 3]");
    require_ball3(u, "combined inequality");
    const auto t = sps_terms(u, q);
    const double h12 = t.grad2 + t.mass;
    const double E = 0.5 * h12 - t.w / (q + 1.0) + 0.25 * lambda * t.inter;
    const double lhs = 0.25 * (q - 2.0) * h12 + (q - 2.0) / (q + 1.0) * t.w + 0.25 * (q - 2.0) * lambda * t.inter;
    const double C = combined_inequality_constant(q, u.grid().radius());
    const double rhs = 3.0 * C * integrate(u_t * u_t) + (q + 1.0) * E;
    return {lhs, rhs};
}

}  // namespace npl
