#include "npl/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "npl/blowup.hpp"
#include "npl/errors.hpp"

namespace npl {

namespace {

struct ShotResult {
    double end_value = 0.0;
    std::vector<double> v, dv;
};

// RK4 for v'' = -|v|^{p-1} v on [0, 1] with v(0) = 0, v'(0) = s.
ShotResult shoot(double p, double s, std::size_t mesh, bool keep) {
    const double h = 1.0 / static_cast<double>(mesh);
    auto acc = [p](double v) { return -std::copysign(std::pow(std::abs(v), p), v); };
    double v = 0.0, w = s;
    ShotResult r;
    if (keep) {
        r.v.reserve(mesh + 1);
        r.dv.reserve(mesh + 1);
        r.v.push_back(v);
        r.dv.push_back(w);
    }
    for (std::size_t i = 0; i < mesh; ++i) {
        const double k1v = w, k1w = acc(v);
        const double k2v = w + 0.5 * h * k1w, k2w = acc(v + 0.5 * h * k1v);
        const double k3v = w + 0.5 * h * k2w, k3w = acc(v + 0.5 * h * k2v);
        const double k4v = w + h * k3w, k4w = acc(v + h * k3v);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        if (keep) {
            r.v.push_back(v);
            r.dv.push_back(w);
        }
    }
    r.end_value = v;
    return r;
}

// First positive zero of the solution with v'(0) = 1.
double first_zero_unit_slope(double p) {
    const double h = 1e-4;
    auto acc = [p](double v) { return -std::copysign(std::pow(std::abs(v), p), v); };
    double x = 0.0, v = 0.0, w = 1.0;
    for (std::size_t i = 0; i < 100'000'000; ++i) {
        const double k1v = w, k1w = acc(v);
        const double k2v = w + 0.5 * h * k1w, k2w = acc(v + 0.5 * h * k1v);
        const double k3v = w + 0.5 * h * k2w, k3w = acc(v + 0.5 * h * k2v);
        const double k4v = w + h * k3w, k4w = acc(v + h * k3v);
        const double vn = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        const double wn = w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        if (vn <= 0.0 && x > 0.0) return x + h * v / (v - vn);
        x += h;
        v = vn;
        w = wn;
    }
    throw std::runtime_error("shooting: no zero found for unit slope");
}

}  // namespace

SteadyState1D steady_state_1d(double p, std::size_t mesh) {
    if (!(p > 1.0)) throw InvalidArgument("steady state needs p > 1");
    if (mesh < 100) throw InvalidArgument("steady state mesh too coarse");
    // v_mu(x) = mu^{2/(p-1)} v(mu x) maps slope s to mu^{(p+1)/(p-1)} s and the zero X to X/mu.
    const double X1 = first_zero_unit_slope(p);
    const double guess = std::pow(X1, (p + 1.0) / (p - 1.0));
    double lo = 0.95 * guess, hi = 1.05 * guess;
    if (!(shoot(p, lo, mesh, false).end_value > 0.0 && shoot(p, hi, mesh, false).end_value < 0.0)) {
        throw std::runtime_error("shooting bracket does not straddle the first zero");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (shoot(p, mid, mesh, false).end_value > 0.0) lo = mid;
        else hi = mid;
    }
    const double s = 0.5 * (lo + hi);
    auto r = shoot(p, s, mesh, true);

    SteadyState1D out;
    out.p_ = p;
    out.slope_ = s;
    out.endpoint_ = std::abs(r.end_value);
    out.v_ = std::move(r.v);
    out.dv_ = std::move(r.dv);
    out.v_.back() = 0.0;
    const double H = 0.5 * s * s;
    for (std::size_t i = 0; i < out.v_.size(); ++i) {
        const double e = 0.5 * out.dv_[i] * out.dv_[i] + std::pow(std::abs(out.v_[i]), p + 1.0) / (p + 1.0);
        out.drift_ = std::max(out.drift_, std::abs(e - H) / H);
    }
    // Maximum where v' changes sign; refine the root of v' with the Hermite derivative.
    std::size_t j = 0;
    while (j + 1 < out.dv_.size() && out.dv_[j + 1] > 0.0) ++j;
    const double h = 1.0 / static_cast<double>(mesh);
    double a = h * static_cast<double>(j), b = a + h;
    for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (a + b);
        if (out.derivative(m) > 0.0) a = m;
        else b = m;
    }
    out.argmax_ = 0.5 * (a + b);
    out.max_value_ = out.value(out.argmax_);
    return out;
}

double SteadyState1D::value(double x) const {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double n = static_cast<double>(v_.size() - 1);
    const double h = 1.0 / n;
    const auto j = std::min(static_cast<std::size_t>(x * n), v_.size() - 2);
    const double t = (x - h * static_cast<double>(j)) / h;
    const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t), h10 = t * (1.0 - t) * (1.0 - t);
    const double h01 = t * t * (3.0 - 2.0 * t), h11 = t * t * (t - 1.0);
    return h00 * v_[j] + h * h10 * dv_[j] + h01 * v_[j + 1] + h * h11 * dv_[j + 1];
}

double SteadyState1D::derivative(double x) const {
    if (x < 0.0 || x > 1.0) return 0.0;
    const double n = static_cast<double>(v_.size() - 1);
    const double h = 1.0 / n;
    const auto j = std::min(static_cast<std::size_t>(x * n), v_.size() - 2);
    const double t = (x - h * static_cast<double>(j)) / h;
    const double d00 = 6.0 * t * t - 6.0 * t, d10 = 3.0 * t * t - 4.0 * t + 1.0;
    const double d01 = -6.0 * t * t + 6.0 * t, d11 = 3.0 * t * t - 2.0 * t;
    return (d00 * v_[j] + d01 * v_[j + 1]) / h + d10 * dv_[j] + d11 * dv_[j + 1];
}

Field SteadyState1D::sample(const GridPtr& grid) const {
    if (!grid->is_interval()) throw UnsupportedGrid("steady state samples need an interval grid");
    return Field::from_function(grid, [this](double x) { return value(x); });
}

Field odd_periodic_extension(const SteadyState1D& v1, const GridPtr& grid) {
    if (!grid->is_interval()) throw UnsupportedGrid("periodic extension needs an interval grid");
    return Field::from_function(grid, [&v1](double x) {
        double m = std::fmod(x, 2.0);
        if (m < 0.0) m += 2.0;
        return m <= 1.0 ? v1.value(m) : -v1.value(2.0 - m);
    });
}

// ---------------------------------------------------------------------------

std::vector<CalibrationRow> calibrate_T_lambda(const SteadyState1D& v1, const std::vector<double>& lambdas,
                                               const CalibrationConfig& config) {
    const auto grid = Grid::interval(0.0, 1.0, config.nodes);
    ProblemSpec problem{grid, {}, NonlinearitySpec::power(v1.p()), config.modes};
    StepperConfig sc;
    sc.dt0 = config.dt0;
    sc.t_end = config.t_budget;
    const Field base = v1.sample(grid);
    std::vector<CalibrationRow> rows;
    for (double lambda : lambdas) {
        if (!(lambda >= 1.0)) throw InvalidArgument("calibration needs lambda >= 1");
        CalibrationRow row;
        row.lambda = lambda;
        const auto traj = evolve(problem, sc, base * lambda);
        if (traj.outcome.kind == Outcome::Kind::BlowupSuspected) {
            row.blew_up = true;
            try {
                row.T = estimate_blowup(traj, v1.p()).T_est;
            } catch (const FitError& e) {
                row.T = traj.outcome.T_est;
                row.note = std::string("extrapolated: ") + e.what();
            }
        } else {
            row.note = "no blow-up within budget (" + traj.outcome.name() + ")";
        }
        rows.push_back(row);
    }
    return rows;
}

RescaledData rescaled_blowup_data(const SteadyState1D& v1, double lambda, double T_target, double T_lambda,
                                  std::size_t nodes) {
    if (!(T_target > 0.0 && T_lambda > 0.0)) throw InvalidArgument("blow-up times must be positive");
    const double a = std::sqrt(T_lambda / T_target);
    const double amp = std::pow(a, 2.0 / (v1.p() - 1.0)) * lambda;
    const auto grid = Grid::interval(0.0, 1.0 / a, nodes);
    return {a, Field::from_function(grid, [&](double x) { return amp * v1.value(a * x); })};
}

// ---------------------------------------------------------------------------

BumpFamily bump_family(int k, double M, double q, std::optional<double> delta) {
    if (k < 1) throw InvalidArgument("bump family needs k >= 1");
    if (!(q > 2.0 && q < 5.0)) throw InvalidArgument("bump family needs q in (2, 5)");
    if (!(M >= 1.0)) throw InvalidArgument("bump family needs M >= 1");
    const double d = delta.value_or((q - 2.0) / (4.0 * k));
    if (!(d > 0.0 && d < (q - 2.0) / (2.0 * k))) throw InvalidArgument("delta must lie in (0, (q-2)/(2k))");
    BumpFamily f;
    f.k = k;
    f.delta = d;
    f.M = M;
    f.q = q;
    for (int i = 1; i <= k; ++i) f.M_i.push_back(std::pow(M, 1.0 + (i - 1) * d));
    return f;
}

double BumpFamily::value(int i, double r) const {
    const double m = M_i.at(static_cast<std::size_t>(i - 1));
    return m * m * std::max(0.0, 1.0 - m * std::abs(r));
}

Field BumpFamily::member(int i, const GridPtr& grid) const {
    return Field::from_function(grid, [this, i](double r) { return value(i, r); });
}

Field BumpFamily::combination(const std::vector<double>& coefficients, const GridPtr& grid) const {
    if (coefficients.size() != static_cast<std::size_t>(k)) throw InvalidArgument("one coefficient per bump");
    return Field::from_function(grid, [&](double r) {
        double s = 0.0;
        for (int i = 1; i <= k; ++i) s += coefficients[static_cast<std::size_t>(i - 1)] * value(i, r);
        return s;
    });
}

std::size_t BumpFamily::required_nodes(double radius) const {
    const double need = std::ceil(32.0 * radius * M_i.back()) + 1.0;
    return std::max<std::size_t>(513, static_cast<std::size_t>(need));
}

SpsEnergyParts sps_energy_direct(const Field& v, double q, double lambda) {
    const Grid& g = v.grid();
    if (!g.is_radial() || g.dimension() != 3) throw UnsupportedGrid("SPS energy needs the n = 3 ball");
    SpsEnergyParts e;
    const auto r = g.nodes();
    const double h = g.spacing();
    for (std::size_t j = 0; j + 1 < v.size(); ++j) {
        const double slope = (v[j + 1] - v[j]) / h;
        const double shell = 4.0 * std::numbers::pi / 3.0 * (r[j + 1] * r[j + 1] * r[j + 1] - r[j] * r[j] * r[j]);
        e.dirichlet += slope * slope * shell;
    }
    e.mass = integrate(v * v);
    e.w = lq_power(v, q + 1.0);
    e.interaction = interaction_integral(v);
    e.energy = 0.5 * (e.dirichlet + e.mass) - e.w / (q + 1.0) + 0.25 * lambda * e.interaction;
    return e;
}

std::vector<BumpScalingRow> bump_scaling(int k, double q, double lambda, const std::vector<double>& Ms,
                                         std::optional<double> delta, double radius) {
    std::vector<BumpScalingRow> rows;
    for (double M : Ms) {
        const auto fam = bump_family(k, M, q, delta);
        if (1.0 / M > radius) throw InvalidArgument("bump support exceeds the ball");
        const auto grid = Grid::ball(radius, 3, fam.required_nodes(radius));
        for (int i = 1; i <= k; ++i) {
            const Field v = fam.member(i, grid);
            const auto parts = sps_energy_direct(v, q, lambda);
            const double Mi = fam.M_i[static_cast<std::size_t>(i - 1)];
            rows.push_back({M, i, parts.w / std::pow(Mi, 2.0 * q - 1.0),
                            (parts.dirichlet + parts.mass + lambda * parts.interaction) / std::pow(Mi, 3.0)});
        }
    }
    return rows;
}

WitnessResult negative_energy_witness(double q, double lambda, int k, double radius, std::size_t max_nodes) {
    if (!(lambda > 0.0)) throw InvalidArgument("witness needs lambda > 0");
    for (double M = std::max(2.0, 2.0 / radius);; M *= 2.0) {
        const auto fam = bump_family(k, M, q);
        const std::size_t N = fam.required_nodes(radius);
        if (N > max_nodes) {
            throw ResolutionError("witness search needs " + std::to_string(N) + " radial nodes at M = " +
                                  std::to_string(M) + ", above the cap " + std::to_string(max_nodes));
        }
        const auto grid = Grid::ball(radius, 3, N);
        std::vector<std::pair<std::string, std::vector<double>>> patterns;
        const double e = 1.0 / k;
        patterns.push_back({"equal", std::vector<double>(static_cast<std::size_t>(k), e)});
        if (k > 1) {
            std::vector<double> alt(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) alt[static_cast<std::size_t>(i)] = (i % 2 == 0 ? e : -e);
            patterns.push_back({"alternating", alt});
            for (int i = 0; i < k; ++i) {
                std::vector<double> single(static_cast<std::size_t>(k), 0.0);
                single[static_cast<std::size_t>(i)] = 1.0;
                patterns.push_back({"single_" + std::to_string(i + 1), single});
            }
        }
        for (const auto& [name, coeffs] : patterns) {
            const double E = sps_energy_direct(fam.combination(coeffs, grid), q, lambda).energy;
            if (E < 0.0) {
                WitnessResult res;
                res.M = M;
                res.coefficients = coeffs;
                res.pattern = name;
                res.energy = E;
                res.nodes = N;
                const auto fine = Grid::ball(radius, 3, 2 * N - 1);
                res.energy_refined = sps_energy_direct(fam.combination(coeffs, fine), q, lambda).energy;
                return res;
            }
        }
    }
}

}  // namespace npl
