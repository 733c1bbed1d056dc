#include "npl/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "npl/errors.hpp"

namespace npl {

namespace {

double phi1(double z) { return z < 1e-8 ? 1.0 - 0.5 * z : -std::expm1(-z) / z; }

double phi2(double z) {
    if (z < 1e-3) return 0.5 - z / 6.0 + z * z / 24.0 - z * z * z / 120.0;
    return (std::exp(-z) - 1.0 + z) / (z * z);
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

constexpr double decay_threshold = 1e-10;

}  // namespace

void StepperConfig::validate() const {
    if (!(dt0 > 0.0)) throw InvalidArgument("dt0 must be positive");
    if (!(t_end > 0.0)) throw InvalidArgument("t_end must be positive");
    if (!(blowup_cap > 1.0)) throw InvalidArgument("blowup_cap must exceed 1");
    if (!(safety > 0.0)) throw InvalidArgument("safety factor must be positive");
    if (record_every == 0) throw InvalidArgument("record_every must be at least 1");
}

std::string Outcome::name() const {
    switch (kind) {
        case Kind::GlobalToTend: return "GlobalToTend";
        case Kind::BlowupSuspected: return "BlowupSuspected";
        case Kind::DecayedToZero: return "DecayedToZero";
    }
    return "unknown";
}

std::vector<double> Trajectory::times() const {
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& s : samples) v.push_back(s.t);
    return v;
}

std::vector<double> Trajectory::linf() const {
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& s : samples) v.push_back(s.linf);
    return v;
}

std::vector<double> Trajectory::energies() const {
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& s : samples) v.push_back(s.energy.total);
    return v;
}

// ---------------------------------------------------------------------------

Galerkin::Galerkin(ProblemSpec problem) : problem_(std::move(problem)) {
    basis_ = problem_.make_basis();
    sigma_ = operator_symbol(*basis_, problem_.op);
}

std::vector<double> Galerkin::nonlinear(std::span<const double> c) const {
    return basis_->analyze(eval_F(problem_.nonlinearity, field(c)));
}

std::vector<double> Galerkin::rhs(std::span<const double> c) const {
    auto r = nonlinear(c);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= sigma_[k] * c[k];
    return r;
}

std::vector<double> Galerkin::step(std::span<const double> c, double dt, StepperConfig::Scheme scheme,
                                   const std::vector<double>* n_c) const {
    if (dt < 0.0) throw InvalidArgument("negative time step");
    std::vector<double> out(c.begin(), c.end());
    if (dt == 0.0) return out;
    const std::vector<double> nc = n_c ? *n_c : nonlinear(c);
    const std::size_t K = c.size();
    for (std::size_t k = 0; k < K; ++k) {
        const double z = sigma_[k] * dt;
        out[k] = std::exp(-z) * c[k] + dt * phi1(z) * nc[k];
    }
    if (scheme == StepperConfig::Scheme::Etd1) return out;
    const auto na = nonlinear(out);
    for (std::size_t k = 0; k < K; ++k) {
        const double z = sigma_[k] * dt;
        out[k] += dt * phi2(z) * (na[k] - nc[k]);
    }
    return out;
}

Field step(const ProblemSpec& problem, const StepperConfig& config, const Field& u, double dt) {
    const Galerkin g(problem);
    const auto c = g.step(g.project(u), dt, config.scheme);
    return g.field(c);
}

// ---------------------------------------------------------------------------

namespace {

class Recorder {
public:
    Recorder(const Galerkin& g, const StepperConfig& config, Trajectory& traj)
        : g_(g), config_(config), traj_(traj) {}

    void record(double t, std::span<const double> c, const Field& u, std::span<const double> nc,
                double dissipation) {
        const auto& nl = g_.problem().nonlinearity;
        const auto sigma = g_.symbol();
        const auto lam = g_.basis().eigenvalues();
        const double alpha = g_.problem().op.alpha;
        std::vector<double> ut(c.size());
        double h1 = 0.0, ha = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            ut[k] = nc[k] - sigma[k] * c[k];
            h1 += (lam[k] + 1.0) * c[k] * c[k];
            ha += (1.0 + std::pow(lam[k], alpha)) * c[k] * c[k];
        }
        Sample s;
        s.t = t;
        s.l2 = lq_norm(u, 2.0);
        s.lq1 = lq_norm(u, nl.tracked_lebesgue_exponent());
        s.linf = u.max_abs();
        s.h1 = std::sqrt(h1);
        s.halpha = std::sqrt(ha);
        s.energy = energy(g_.problem(), g_.basis(), c, u);
        s.dissipation = dissipation;
        s.ut_norm2 = norm2(ut);
        traj_.samples.push_back(s);
        if (config_.store_fields) {
            traj_.fields.push_back(u);
            traj_.rates.push_back(g_.field(ut));
        }
    }

private:
    const Galerkin& g_;
    const StepperConfig& config_;
    Trajectory& traj_;
};

double extrapolated_blowup_time(double t, double linf, double degree) {
    const double e = degree - 1.0;
    return t + std::pow(linf, -e) / e;
}

}  // namespace

Trajectory evolve(const ProblemSpec& problem, const StepperConfig& config, const Field& u0) {
    config.validate();
    const Galerkin g(problem);
    Trajectory traj;
    traj.growth_degree = problem.nonlinearity.growth_degree();
    traj.initial_tail = g.basis().tail_fraction(u0);
    Recorder rec(g, config, traj);
    const double e = traj.growth_degree - 1.0;

    std::vector<double> c = g.project(u0);
    Field u = g.field(c);
    double t = 0.0;
    double D = 0.0;

    auto blowup = [&](double time, double linf) {
        traj.outcome = {Outcome::Kind::BlowupSuspected, extrapolated_blowup_time(time, linf, traj.growth_degree)};
    };

    std::vector<double> nc;
    try {
        nc = g.nonlinear(c);
    } catch (const OverflowError&) {
        blowup(0.0, u.max_abs());
        return traj;
    }
    rec.record(t, c, u, nc, D);
    double ut2 = traj.samples.back().ut_norm2;
    bool recorded_last = true;
    const double t_tol = 1e-12 * std::max(1.0, config.t_end);

    while (true) {
        const double linf = u.max_abs();
        if (linf < decay_threshold) {
            traj.outcome = {Outcome::Kind::DecayedToZero, 0.0};
            break;
        }
        if (linf >= config.blowup_cap) {
            blowup(t, linf);
            break;
        }
        if (t >= config.t_end - t_tol) {
            traj.outcome = {Outcome::Kind::GlobalToTend, 0.0};
            break;
        }
        if (traj.steps >= config.max_steps) {
            traj.outcome = {Outcome::Kind::GlobalToTend, 0.0};
            break;
        }
        double dt = config.safety * config.dt0 / (1.0 + std::pow(linf, e));
        dt = std::min(dt, config.t_end - t);

        std::vector<double> c_new, n_new;
        Field u_new = u;
        try {
            c_new = g.step(c, dt, config.scheme, &nc);
            u_new = g.field(c_new);
            n_new = g.nonlinear(c_new);
        } catch (const OverflowError&) {
            if (!recorded_last) rec.record(t, c, u, nc, D);
            blowup(t, linf);
            return traj;
        }
        double ut2_new = 0.0;
        const auto sigma = g.symbol();
        for (std::size_t k = 0; k < c_new.size(); ++k) {
            const double r = n_new[k] - sigma[k] * c_new[k];
            ut2_new += r * r;
        }
        D += 0.5 * dt * (ut2 + ut2_new);
        t += dt;
        ++traj.steps;
        c = std::move(c_new);
        nc = std::move(n_new);
        u = std::move(u_new);
        ut2 = ut2_new;

        const double lnew = u.max_abs();
        const bool terminal = lnew < decay_threshold || lnew >= config.blowup_cap ||
                              t >= config.t_end - t_tol || traj.steps >= config.max_steps;
        recorded_last = false;
        if (terminal || traj.steps % config.record_every == 0) {
            rec.record(t, c, u, nc, D);
            recorded_last = true;
        }
    }
    return traj;
}

// ---------------------------------------------------------------------------

ContinuityReport continuity_probe(const ProblemSpec& problem, const StepperConfig& config,
                                  const Field& u0, const Field& v0) {
    config.validate();
    const Galerkin g(problem);
    auto cu = g.project(u0);
    auto cv = g.project(v0);
    ContinuityReport rep;
    rep.initial_distance = lq_norm(u0 - v0, 2.0);
    const double e = problem.nonlinearity.growth_degree() - 1.0;

    auto ratio = [&](const Field& a, const Field& b) {
        return rep.initial_distance == 0.0 ? 0.0 : lq_norm(a - b, 2.0) / rep.initial_distance;
    };
    Field u = g.field(cu), v = g.field(cv);
    double t = 0.0;
    bool window_open = true;
    rep.times.push_back(0.0);
    rep.ratios.push_back(ratio(u, v));
    std::size_t steps = 0;
    while (t < config.t_end * (1.0 - 1e-12) && steps < config.max_steps) {
        const double linf = std::max(u.max_abs(), v.max_abs());
        if (linf >= config.blowup_cap) break;
        double dt = config.safety * config.dt0 / (1.0 + std::pow(linf, e));
        dt = std::min(dt, config.t_end - t);
        try {
            cu = g.step(cu, dt, config.scheme);
            cv = g.step(cv, dt, config.scheme);
            u = g.field(cu);
            v = g.field(cv);
        } catch (const OverflowError&) {
            break;
        }
        t += dt;
        ++steps;
        const double r = ratio(u, v);
        if (steps % config.record_every == 0) {
            rep.times.push_back(t);
            rep.ratios.push_back(r);
        }
        rep.sup_ratio = std::max(rep.sup_ratio, r);
        if (window_open) {
            if (r > 2.0) {
                window_open = false;
            } else {
                rep.window = t;
            }
        }
    }
    return rep;
}

SmoothingReport smoothing_probe(const ProblemSpec& problem, const Field& u0, double delta) {
    if (!(delta > 0.0)) throw InvalidArgument("smoothing probe needs delta > 0");
    StepperConfig cfg;
    cfg.t_end = delta;
    cfg.dt0 = delta / 200.0;
    cfg.record_every = 1'000'000'000;
    const auto traj = evolve(problem, cfg, u0);
    SmoothingReport rep;
    rep.blew_up = traj.outcome.kind == Outcome::Kind::BlowupSuspected;
    const auto& last = traj.samples.back();
    rep.linf = last.linf;
    rep.h1 = last.h1;
    return rep;
}

}  // namespace npl
