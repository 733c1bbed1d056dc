#include "npl/steady.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "npl/errors.hpp"

namespace npl {

namespace {

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

SteadyState newton_steady_state(const ProblemSpec& problem, const Field& guess, double tol,
                                int max_iterations) {
    const Galerkin g(problem);
    const std::size_t K = g.basis().modes();
    std::vector<double> c = g.project(guess);
    std::vector<double> r = g.rhs(c);
    double rn = norm(r);

    SteadyState out{g.field(c), c, rn, 0, rn < tol};
    Eigen::MatrixXd J(K, K);
    for (int it = 0; it < max_iterations && rn >= tol; ++it) {
        for (std::size_t j = 0; j < K; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(c[j]));
            auto cp = c, cm = c;
            cp[j] += h;
            cm[j] -= h;
            const auto rp = g.rhs(cp), rm = g.rhs(cm);
            for (std::size_t i = 0; i < K; ++i) J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (rp[i] - rm[i]) / (2.0 * h);
        }
        Eigen::VectorXd b(K);
        for (std::size_t i = 0; i < K; ++i) b(static_cast<Eigen::Index>(i)) = -r[i];
        const Eigen::VectorXd d = J.partialPivLu().solve(b);

        double damping = 1.0;
        bool accepted = false;
        for (int half = 0; half < 12; ++half, damping *= 0.5) {
            auto trial = c;
            for (std::size_t i = 0; i < K; ++i) trial[i] += damping * d(static_cast<Eigen::Index>(i));
            std::vector<double> rt;
            try {
                rt = g.rhs(trial);
            } catch (const OverflowError&) {
                continue;
            }
            const double tn = norm(rt);
            if (tn < rn) {
                c = std::move(trial);
                r = std::move(rt);
                rn = tn;
                accepted = true;
                break;
            }
        }
        out.iterations = it + 1;
        if (!accepted) break;
    }
    out.u = g.field(c);
    out.coefficients = c;
    out.residual = rn;
    out.converged = rn < tol;
    return out;
}

SteadyState threshold_steady_state(const ProblemSpec& problem, const Field& shape, double lo, double hi,
                                   const StepperConfig& config, int bisections) {
    auto run = [&](double a) { return evolve(problem, config, shape * a); };
    auto blows = [](const Trajectory& t) { return t.outcome.kind == Outcome::Kind::BlowupSuspected; };

    Trajectory below = run(lo);
    if (blows(below) || blows(run(hi)) == false) {
        throw InvalidArgument("threshold search needs lo decaying and hi blowing up");
    }
    for (int i = 0; i < bisections; ++i) {
        const double mid = 0.5 * (lo + hi);
        Trajectory t = run(mid);
        if (blows(t)) {
            hi = mid;
        } else {
            lo = mid;
            below = std::move(t);
        }
    }
    // The subthreshold run lingers near the steady state; pick its slowest
    // sample relative to its size (the final decay has |u_t| ~ lambda_1 |u|).
    std::size_t best = 0;
    double best_rate = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < below.samples.size(); ++i) {
        const auto& s = below.samples[i];
        if (s.l2 == 0.0) continue;
        const double rate = s.ut_norm2 / (s.l2 * s.l2);
        if (rate < best_rate) {
            best_rate = rate;
            best = i;
        }
    }
    if (below.fields.empty()) throw InvalidArgument("threshold search needs store_fields in the stepper config");
    return newton_steady_state(problem, below.fields[best]);
}

}  // namespace npl
