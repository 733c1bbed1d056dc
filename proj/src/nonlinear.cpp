#include "npl/nonlinear.hpp"

#include <algorithm>
#include <cmath>

#include "npl/errors.hpp"
#include "npl/operators.hpp"

namespace npl {

namespace {

void guard_overflow(const Field& u) {
    if (u.max_abs() > overflow_threshold) throw OverflowError("field magnitude exceeds overflow threshold");
}

// |s|^{e-1} s, continuous at 0 for e > 1.
double signed_power(double s, double e) {
    if (s == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(s), e), s);
}

Field abs_power(const Field& u, double e) {
    return u.map([e](double s) { return std::pow(std::abs(s), e); });
}

}  // namespace

NonlinearitySpec NonlinearitySpec::power(double p) {
    NonlinearitySpec s;
    s.kind = Kind::Power;
    s.p = p;
    s.validate();
    return s;
}

NonlinearitySpec NonlinearitySpec::choquard(double p, int n) {
    NonlinearitySpec s;
    s.kind = Kind::Choquard;
    s.p = p;
    s.n = n;
    s.validate();
    return s;
}

NonlinearitySpec NonlinearitySpec::sps(double q, double lambda, Sign sign) {
    NonlinearitySpec s;
    s.kind = Kind::Sps;
    s.q = q;
    s.lambda = lambda;
    s.sign = sign;
    s.p = 2.0;
    s.n = 3;
    s.validate();
    return s;
}

void NonlinearitySpec::validate() const {
    switch (kind) {
        case Kind::Power:
            if (!(p > 1.0)) throw InvalidArgument("power nonlinearity needs p > 1");
            break;
        case Kind::Choquard:
            if (!(p >= 2.0)) throw InvalidArgument("Choquard nonlinearity needs p >= 2");
            if (n < 3 || n > 5) throw InvalidArgument("Choquard nonlinearity needs 3 <= n <= 5");
            break;
        case Kind::Sps:
            if (!(q > 1.0 && q <= 5.0)) throw InvalidArgument("SPS nonlinearity needs q in (1, 5]");
            if (!(lambda > 0.0)) throw InvalidArgument("SPS nonlinearity needs lambda > 0");
            break;
    }
}

double NonlinearitySpec::growth_degree() const {
    switch (kind) {
        case Kind::Power: return p;
        case Kind::Choquard: return p;
        case Kind::Sps: return sign == Sign::Plus ? std::max(q, 2.0) : q;
    }
    return p;
}

double NonlinearitySpec::tracked_lebesgue_exponent() const {
    return (kind == Kind::Sps ? q : p) + 1.0;
}

Field eval_F(const NonlinearitySpec& spec, const Field& u) {
    spec.validate();
    guard_overflow(u);
    switch (spec.kind) {
        case NonlinearitySpec::Kind::Power: {
            const double p = spec.p;
            return u.map([p](double s) { return signed_power(s, p); });
        }
        case NonlinearitySpec::Kind::Choquard: {
            const Field v = riesz_potential(abs_power(u, spec.p), spec.n);
            const double e = spec.p - 1.0;
            return v * u.map([e](double s) { return signed_power(s, e); });
        }
        case NonlinearitySpec::Kind::Sps: {
            const double q = spec.q;
            const Field local = u.map([q](double s) { return signed_power(s, q); });
            const Field v = riesz_potential(u * u, 3);
            const double c = spec.sign == NonlinearitySpec::Sign::Minus ? -spec.lambda : spec.lambda;
            return local + (v * u) * c;
        }
    }
    throw InvalidArgument("unknown nonlinearity");
}

double eval_potential(const NonlinearitySpec& spec, const Field& u) {
    spec.validate();
    guard_overflow(u);
    switch (spec.kind) {
        case NonlinearitySpec::Kind::Power:
            return lq_power(u, spec.p + 1.0) / (spec.p + 1.0);
        case NonlinearitySpec::Kind::Choquard: {
            const Field up = abs_power(u, spec.p);
            return integrate(riesz_potential(up, spec.n) * up) / (2.0 * spec.p);
        }
        case NonlinearitySpec::Kind::Sps: {
            const double local = lq_power(u, spec.q + 1.0) / (spec.q + 1.0);
            const double c = spec.sign == NonlinearitySpec::Sign::Minus ? -spec.lambda : spec.lambda;
            return local + 0.25 * c * interaction_integral(u);
        }
    }
    throw InvalidArgument("unknown nonlinearity");
}

double interaction_integral(const Field& u) {
    const Grid& g = u.grid();
    if (!g.is_radial() || g.dimension() != 3) {
        throw UnsupportedGrid("interaction integral needs the n = 3 radial ball");
    }
    guard_overflow(u);
    const Field u2 = u * u;
    return integrate(riesz_potential(u2, 3) * u2);
}

double gradient_check(const NonlinearitySpec& spec, const Field& u, const Field& h, double eps) {
    if (!(eps >= 1e-7 && eps <= 1e-3)) throw InvalidArgument("gradient check needs eps in [1e-7, 1e-3]");
    const double directional = integrate(eval_F(spec, u) * h);
    if (h.max_abs() == 0.0) return 0.0;
    const double fd = (eval_potential(spec, u + h * eps) - eval_potential(spec, u - h * eps)) / (2.0 * eps);
    return std::abs(fd - directional) / std::max(1.0, std::abs(directional));
}

}  // namespace npl
