#include "npl/exponents.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>

#include "npl/errors.hpp"
#include "npl/grid.hpp"
#include "npl/nonlinear.hpp"

namespace npl {

ExtReal::ExtReal(double v) : value_(v) {
    if (std::isnan(v)) throw InvalidArgument("ExtReal from NaN");
    if (std::isinf(v)) {
        if (v < 0.0) throw InvalidArgument("ExtReal does not represent -infinity");
        infinite_ = true;
        value_ = 0.0;
    }
}

ExtReal ExtReal::infinity() {
    ExtReal r;
    r.infinite_ = true;
    return r;
}

double ExtReal::value() const {
    if (infinite_) throw InvalidArgument("value() of an infinite ExtReal");
    return value_;
}

std::string ExtReal::to_string(int precision) const {
    if (infinite_) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, value_);
    return buf;
}

bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
}

bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
}

// ---------------------------------------------------------------------------

ExtReal sobolev_exponent(int n) {
    if (n < 1) throw InvalidArgument("dimension must be positive");
    if (n <= 2) return ExtReal::infinity();
    return (n + 2.0) / (n - 2.0);
}

ExtReal cazenave_lions_exponent(int n) {
    if (n < 1) throw InvalidArgument("dimension must be positive");
    if (n == 1) return ExtReal::infinity();
    return (3.0 * n + 8.0) / (3.0 * n - 4.0);
}

double fujita_exponent(int n) {
    if (n < 1) throw InvalidArgument("dimension must be positive");
    return (n + 2.0) / n;
}

ExtReal fractional_sobolev_exponent(int n, double alpha) {
    if (n < 1) throw InvalidArgument("dimension must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
    if (n <= 2.0 * alpha) return ExtReal::infinity();
    return (n + 2.0 * alpha) / (n - 2.0 * alpha);
}

ExtReal choquard_threshold(int n) {
    if (n < 1) throw InvalidArgument("dimension must be positive");
    if (n <= 2) return ExtReal::infinity();
    const double d = n - 2.0;
    const double tail = 8.0 / (2.0 * d * std::sqrt(n * (n + 3.0)) + 2.0 * n * n - n - 4.0);
    return sobolev_exponent(n).value() - tail / d;
}

ExponentTable exponent_table(int n, std::optional<double> p, std::optional<double> q, double alpha) {
    if (n < 1) throw InvalidArgument("dimension must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
    ExponentTable t;
    t.n = n;
    t.alpha = alpha;
    t.p_S = sobolev_exponent(n);
    t.p_CL = cazenave_lions_exponent(n);
    t.p_F = fujita_exponent(n);
    t.p_S_alpha = fractional_sobolev_exponent(n, alpha);
    t.p_star = choquard_threshold(n);
    t.p = p;
    t.q = q;
    if (p) {
        if (!(*p > 1.0)) throw InvalidArgument("p must exceed 1");
        t.q_star = ExtReal(n * (*p - 1.0) / (2.0 * alpha));
    }
    if (q) {
        if (!(*q > 1.0)) throw InvalidArgument("q must exceed 1");
        t.R_star = 1.5 * (*q - 1.0) * std::max(1.0, 3.0 / *q);
    }
    return t;
}

// ---------------------------------------------------------------------------

double bootstrap_sq(double p, double Q) {
    if (!(p > 1.0)) throw InvalidArgument("bootstrap_sq needs p > 1");
    if (!(Q >= 2.0)) throw InvalidArgument("bootstrap_sq needs Q >= 2");
    return p + 1.0 - (p - 1.0) / (Q + 1.0);
}

double bootstrap_B(int n, double Q) { return n * Q - (Q - 2.0) * (2.0 * n + Q * (n - 2.0)); }

double bootstrap_rhs(int n, double Q) {
    return (Q * Q * (n + 2.0) - n * Q - 4.0 * (n + 2.0)) / (Q * Q * (n - 2.0) - (n - 4.0) * Q - 4.0 * n);
}

bool bootstrap_admissible(int n, double p, double Q) {
    if (n < 3) throw InvalidArgument("bootstrap needs n >= 3");
    if (!(Q >= 2.0)) throw InvalidArgument("bootstrap needs Q >= 2");
    if (Q == 2.0 || bootstrap_B(n, Q) >= 0.0) return true;
    return p < bootstrap_rhs(n, Q);
}

double bootstrap_rhs_argmin(int n) { return n + 2.0 + std::sqrt(n * n + 3.0 * n); }

NumericMinimum bootstrap_rhs_numeric_min(int n) {
    if (n < 3) throw InvalidArgument("bootstrap needs n >= 3");
    // B < 0 beyond the positive root of B(Q) = 0, where the RHS has its pole.
    const double a = n - 2.0, b = -(n - 4.0), c = -4.0 * n;
    const double root = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
    const auto f = [n](double Q) { return bootstrap_rhs(n, Q); };
    const auto r = boost::math::tools::brent_find_minima(f, root * (1.0 + 1e-9), 1e4,
                                                         std::numeric_limits<double>::digits);
    // Brent locates a flat minimum only to ~sqrt(eps); polish the argmin as
    // the root of the derivative numerator N'D - ND'.
    const auto dnum = [n](double Q) {
        const double N = Q * Q * (n + 2.0) - n * Q - 4.0 * (n + 2.0);
        const double D = Q * Q * (n - 2.0) - (n - 4.0) * Q - 4.0 * n;
        const double dN = 2.0 * Q * (n + 2.0) - n;
        const double dD = 2.0 * Q * (n - 2.0) - (n - 4.0);
        return dN * D - N * dD;
    };
    double lo = r.first * (1.0 - 1e-3), hi = r.first * (1.0 + 1e-3);
    if (dnum(lo) * dnum(hi) > 0.0) return {r.first, r.second};
    std::uintmax_t iters = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        dnum, lo, hi, boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 2), iters);
    const double q = 0.5 * (bracket.first + bracket.second);
    return {q, f(q)};
}

BootstrapStep bootstrap_step(int n, double p, double Q) {
    const double xi = 1.0 / (2.0 * p);
    const double r = fphi_exponent(n, p);
    const double s = bootstrap_sq(p, Q);
    BootstrapStep st;
    st.Q = Q;
    st.s_Q = s;
    st.theta = r * (s - 2.0) / (s * (2.0 - r));
    st.Q_next_max = 2.0 * (1.0 - (1.0 - xi) * st.theta) / (1.0 - st.theta);
    return st;
}

bool bootstrap_condition_direct(int n, double p, double Q) {
    const double xi = 1.0 / (2.0 * p);
    const double r = fphi_exponent(n, p);
    const double s = bootstrap_sq(p, Q);
    return 2.0 * xi > (Q - 2.0) * ((2.0 / r - 1.0) * s / (s - 2.0) - 1.0);
}

BootstrapLedger bootstrap_ledger(int n, double p, std::size_t max_iterations) {
    if (n < 3) throw InvalidArgument("bootstrap needs n >= 3");
    if (!(p >= 2.0)) throw InvalidArgument("bootstrap needs p >= 2");
    if (!(sobolev_exponent(n) > ExtReal(p))) throw InvalidArgument("bootstrap needs p < p_S");
    BootstrapLedger L;
    L.target = n * (p - 1.0) / 2.0;
    L.note =
        "r_3 bookkeeping (1/r_3 = (p-1)/s + 1/2^*, xi = 1/2) is not iterated separately; "
        "it leads to the same restriction p < p*";
    double Q = 2.0;
    L.Q.push_back(Q);
    for (std::size_t it = 0; it <= max_iterations; ++it) {
        if (bootstrap_sq(p, Q) > L.target) {
            L.terminated = true;
            return L;
        }
        if (it == max_iterations) break;
        const auto st = bootstrap_step(n, p, Q);
        const double next = std::min(st.Q_next_max - 1e-6, 4.0 * Q);
        if (!(next > Q + 1e-9)) break;
        Q = next;
        L.Q.push_back(Q);
    }
    L.stuck = true;
    return L;
}

// ---------------------------------------------------------------------------

bool Lemma1Tuple::satisfies_constraints(double p, double r) const {
    const bool m_ok = m > 1.0;
    const bool R_ok = R >= std::max(p * m, (p - 1.0) * r * alpha_dual);
    const bool beta_ok = beta < 1.0 / (2.0 * p - 1.0);
    return m_ok && R_ok && beta_ok && alpha > 1.0 && R > r;
}

Lemma1Tuple lemma1_feasibility(double p, double r) {
    constexpr double n = 3.0;
    if (!(p >= 2.0 && p < 3.0)) throw InvalidArgument("lemma needs p in [2, 3)");
    if (!(r > 0.5 * n * (p - 1.0))) throw InvalidArgument("lemma needs r > (3/2)(p-1)");

    const double hi_a = std::min(2.0 - p + (2.0 * r / n) * (p - 1.0) / (2.0 * p - 1.0), 1.0);
    const double lo_a = std::max(p - (r / n) * (6.0 * p - 2.0) / (2.0 * p - 1.0), 0.0);
    if (!(hi_a > lo_a)) throw InvalidArgument("lemma: empty interval for 1/alpha");
    const double inv_alpha = lo_a + 0.25 * (hi_a - lo_a);

    Lemma1Tuple t;
    t.alpha = 1.0 / inv_alpha;
    t.alpha_dual = t.alpha / (t.alpha - 1.0);
    const double hi_z =
        std::min({1.0 / ((p - 1.0) * t.alpha_dual), (inv_alpha + 2.0 * r / n) / p, 1.0});
    const double lo_z = std::max(1.0 - 2.0 * r / (n * (2.0 * p - 1.0)), 0.0);
    if (!(hi_z > lo_z)) throw InvalidArgument("lemma: empty interval for 1/z");
    const double inv_z = lo_z + 0.75 * (hi_z - lo_z);
    t.z = 1.0 / inv_z;
    t.R = t.z * r;
    t.m = 1.0 / (1.0 / (r * t.alpha) + 2.0 / n);
    t.beta = 0.5 * n * (1.0 / r - 1.0 / t.R);
    return t;
}

double fphi_exponent(int n, double p) {
    return 2.0 * n * p / (2.0 * n * p - n - 2.0);
}

FphiCheck fphi_exponent_check(int n, double p, std::size_t nodes) {
    if (n != 3) throw UnsupportedGrid("F_3 evaluation is implemented on the n = 3 ball");
    if (!(p >= 2.0)) throw InvalidArgument("fphi check needs p >= 2");
    FphiCheck out;
    out.r2 = fphi_exponent(n, p);
    out.xi = 1.0 / (2.0 * p);
    const auto grid = Grid::ball(1.0, 3, nodes);
    const auto spec = NonlinearitySpec::choquard(p, 3);
    const double pi = std::numbers::pi;
    const std::vector<std::pair<std::string, std::function<double(double)>>> profiles = {
        {"gaussian", [](double r) { return std::exp(-8.0 * r * r) * (1.0 - r * r); }},
        {"first_mode", [pi](double r) { return r == 0.0 ? pi : std::sin(pi * r) / r; }},
        {"two_bump",
         [](double r) { return std::exp(-60.0 * (r - 0.3) * (r - 0.3)) - 0.7 * std::exp(-60.0 * (r - 0.7) * (r - 0.7)); }},
    };
    for (const auto& [name, f] : profiles) {
        const Field base = Field::from_function(grid, f);
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (double c : {0.1, 1.0, 10.0}) {
            const Field u = base * c;
            const double num = lq_norm(eval_F(spec, u), out.r2);
            const double den = std::pow(eval_potential(spec, u), (2.0 * p - 1.0) / (2.0 * p));
            const double ratio = num / den;
            out.samples.push_back({name, c, ratio});
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        out.homogeneity_spread = std::max(out.homogeneity_spread, (hi - lo) / hi);
    }
    return out;
}

}  // namespace npl
