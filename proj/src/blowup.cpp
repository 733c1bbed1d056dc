#include "npl/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "npl/errors.hpp"

namespace npl {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw InvalidArgument("fit_line: size mismatch");
    if (n < 3) throw FitError("fit_line needs at least 3 points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw FitError("fit_line: degenerate abscissae");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - f.intercept - f.slope * x[i];
        sse += r * r;
    }
    f.slope_stderr = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
    f.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    f.samples = n;
    return f;
}

// ---------------------------------------------------------------------------

std::size_t resolved_prefix(std::span<const double> t, std::span<const double> linf, double p) {
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 0; i < t.size() && i < linf.size(); ++i) {
        const double tau = std::pow(linf[i], -(p - 1.0)) / (p - 1.0);
        if (linf[i] > 0.0 && tau < 1e4 * eps * std::max(std::abs(t[i]), 1.0)) return i;
    }
    return std::min(t.size(), linf.size());
}

BlowupReport estimate_blowup(std::span<const double> t, std::span<const double> linf, double p) {
    if (!(p > 1.0)) throw InvalidArgument("estimate_blowup needs p > 1");
    if (t.size() != linf.size()) throw InvalidArgument("estimate_blowup: size mismatch");
    constexpr std::size_t trim = 3, min_samples = 20;
    if (t.size() <= trim) throw FitError("too few samples for a blow-up fit");
    const std::size_t end = std::min(t.size() - trim, resolved_prefix(t, linf, p));
    if (end == 0) throw FitError("too few samples for a blow-up fit");
    const double top = *std::max_element(linf.begin(), linf.begin() + static_cast<long>(end));
    std::size_t begin = end;
    while (begin > 0 && linf[begin - 1] >= top / 10.0) --begin;
    if (end - begin < min_samples) {
        throw FitError("blow-up fit window has " + std::to_string(end - begin) +
                       " samples, needs at least 20");
    }
    std::vector<double> x(t.begin() + static_cast<long>(begin), t.begin() + static_cast<long>(end));
    std::vector<double> y;
    for (std::size_t i = begin; i < end; ++i) y.push_back(std::pow(linf[i], -(p - 1.0)));
    const auto lin = fit_line(x, y);
    if (!(lin.slope < 0.0)) throw FitError("L_inf history is not growing like a blow-up");

    BlowupReport rep;
    rep.T_est = -lin.intercept / lin.slope;
    rep.fit_t0 = x.front();
    rep.fit_t1 = x.back();
    rep.fit_samples = x.size();
    // T_est lies beyond every fitted time for exact data; for noisy data drop
    // samples at or past it from the log fit.
    std::vector<double> lx, ly;
    for (std::size_t i = begin; i < end; ++i) {
        if (t[i] < rep.T_est) {
            lx.push_back(std::log(rep.T_est - t[i]));
            ly.push_back(std::log(linf[i]));
        }
    }
    const auto rate = fit_line(lx, ly);
    rep.rate_exponent = rate.slope;
    rep.rate_stderr = rate.slope_stderr;
    rep.r_squared = rate.r_squared;
    return rep;
}

BlowupReport estimate_blowup(const Trajectory& traj, double p) {
    if (traj.outcome.kind != Outcome::Kind::BlowupSuspected) {
        throw InvalidArgument("estimate_blowup needs a BlowupSuspected trajectory");
    }
    const auto t = traj.times();
    const auto l = traj.linf();
    auto rep = estimate_blowup(t, l, p);
    rep.energy_at_last_sample = traj.samples.back().energy.total;
    return rep;
}

// ---------------------------------------------------------------------------

DecayFit decay_fit(std::span<const double> t, std::span<const double> linf, double t0, std::optional<double> t1) {
    if (t.size() != linf.size()) throw InvalidArgument("decay_fit: size mismatch");
    if (t.empty()) throw FitError("decay fit on empty history");
    const double hi = t1.value_or(t.back());
    std::vector<double> x, y;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= t0 && t[i] <= hi && t[i] > 0.0 && linf[i] > 0.0) {
            x.push_back(std::log(t[i]));
            y.push_back(std::log(linf[i]));
        }
    }
    if (x.size() < 5) throw FitError("decay fit needs at least 5 samples in the window");
    const auto f = fit_line(x, y);
    return {f.slope, f.slope_stderr, f.samples};
}

DecayFit decay_fit(const Trajectory& traj, double p, double t0, std::optional<double> t1) {
    if (!(p > 1.0)) throw InvalidArgument("decay_fit needs p > 1");
    const auto t = traj.times();
    const auto l = traj.linf();
    return decay_fit(t, l, t0, t1);
}

double universal_profile(std::span<const double> t, std::span<const double> linf, double p, double T) {
    const double e = -1.0 / (p - 1.0);
    double m = 0.0;
    const std::size_t end = resolved_prefix(t, linf, p);
    for (std::size_t i = 0; i < end; ++i) {
        if (t[i] <= 0.0 || t[i] >= T) continue;
        m = std::max(m, linf[i] / (std::pow(t[i], e) + std::pow(T - t[i], e)));
    }
    return m;
}

double universal_profile(const Trajectory& traj, double p, double T) {
    const auto t = traj.times();
    const auto l = traj.linf();
    return universal_profile(t, l, p, T);
}

// ---------------------------------------------------------------------------

double SimilaritySequence::s_variation() const {
    double v = 0.0;
    if (w.empty()) return v;
    for (const auto& row : w) {
        for (std::size_t j = 0; j < row.size(); ++j) v = std::max(v, std::abs(row[j] - w.front()[j]));
    }
    return v;
}

namespace {

std::vector<double> y_grid(double y_max, std::size_t ny, bool radial) {
    if (ny < 3) throw InvalidArgument("similarity grid needs at least 3 points");
    std::vector<double> y(ny);
    const double lo = radial ? 0.0 : -y_max;
    for (std::size_t j = 0; j < ny; ++j) {
        y[j] = lo + (y_max - lo) * static_cast<double>(j) / static_cast<double>(ny - 1);
    }
    return y;
}

}  // namespace

SimilaritySequence backward_similarity(std::span<const double> times, std::span<const Field> fields, double a,
                                       double T, double p, double y_max, std::size_t ny) {
    if (times.size() != fields.size()) throw InvalidArgument("backward_similarity: size mismatch");
    if (fields.empty()) throw InvalidArgument("backward_similarity needs stored snapshots");
    if (!(T > times.back())) throw InvalidArgument("backward_similarity needs T beyond the last snapshot");
    const bool radial = fields.front().grid().is_radial();
    if (radial && a != 0.0) throw InvalidArgument("radial similarity variables are centred at 0");
    SimilaritySequence seq;
    seq.y = y_grid(y_max, ny, radial);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const double tau = T - times[i];
        const double scale = std::pow(tau, 1.0 / (p - 1.0));
        const double root = std::sqrt(tau);
        std::vector<double> row(ny);
        for (std::size_t j = 0; j < ny; ++j) {
            row[j] = scale * interpolate(fields[i], a + seq.y[j] * root);
            seq.sup_w = std::max(seq.sup_w, std::abs(row[j]));
        }
        seq.s.push_back(-std::log(tau));
        seq.w.push_back(std::move(row));
    }
    return seq;
}

SimilaritySequence backward_similarity(const Trajectory& traj, double a, double T, double p, double y_max,
                                       std::size_t ny) {
    if (traj.fields.empty()) throw InvalidArgument("backward_similarity needs a trajectory with stored fields");
    std::vector<double> t;
    std::vector<Field> f;
    for (std::size_t i = 0; i < traj.fields.size(); ++i) {
        if (traj.samples[i].t < T) {
            t.push_back(traj.samples[i].t);
            f.push_back(traj.fields[i]);
        }
    }
    return backward_similarity(t, f, a, T, p, y_max, ny);
}

SimilaritySequence forward_similarity(std::span<const double> times, std::span<const Field> fields, double p,
                                      double y_max, std::size_t ny) {
    if (times.size() != fields.size()) throw InvalidArgument("forward_similarity: size mismatch");
    if (fields.empty()) throw InvalidArgument("forward_similarity needs stored snapshots");
    const bool radial = fields.front().grid().is_radial();
    SimilaritySequence seq;
    seq.y = y_grid(y_max, ny, radial);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const double tp = times[i] + 1.0;
        const double scale = std::pow(tp, 1.0 / (p - 1.0));
        const double root = std::sqrt(tp);
        std::vector<double> row(ny);
        for (std::size_t j = 0; j < ny; ++j) {
            row[j] = scale * interpolate(fields[i], seq.y[j] * root);
            seq.sup_w = std::max(seq.sup_w, std::abs(row[j]));
        }
        seq.s.push_back(std::log(tp));
        seq.w.push_back(std::move(row));
    }
    return seq;
}

SimilaritySequence forward_similarity(const Trajectory& traj, double p, double y_max, std::size_t ny) {
    if (traj.fields.empty()) throw InvalidArgument("forward_similarity needs a trajectory with stored fields");
    return forward_similarity(traj.times(), traj.fields, p, y_max, ny);
}

double backward_similarity_residual(const SimilaritySequence& seq, double p) {
    const std::size_t ns = seq.s.size(), ny = seq.y.size();
    if (ns < 3) throw InvalidArgument("similarity residual needs at least 3 snapshots");
    const double hy = seq.y[1] - seq.y[0];
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < ns; ++i) {
        const double ds = seq.s[i + 1] - seq.s[i - 1];
        if (!(ds > 0.0)) continue;
        for (std::size_t j = 1; j + 1 < ny; ++j) {
            const double ws = (seq.w[i + 1][j] - seq.w[i - 1][j]) / ds;
            const double wy = (seq.w[i][j + 1] - seq.w[i][j - 1]) / (2.0 * hy);
            const double wyy = (seq.w[i][j + 1] - 2.0 * seq.w[i][j] + seq.w[i][j - 1]) / (hy * hy);
            const double w = seq.w[i][j];
            const double r = ws - (wyy - 0.5 * seq.y[j] * wy - w / (p - 1.0) + std::pow(std::abs(w), p - 1.0) * w);
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------

const char* EnergyMonitorReport::name(Verdict v) {
    switch (v) {
        case Verdict::EnergyStaysNonneg: return "EnergyStaysNonneg";
        case Verdict::EnergyDiverging: return "EnergyDiverging";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "unknown";
}

EnergyMonitorReport energy_blowup_monitor(const Trajectory& traj) {
    EnergyMonitorReport rep;
    const auto& s = traj.samples;
    if (s.empty()) return rep;
    rep.initial_energy = s.front().energy.total;
    rep.final_energy = s.back().energy.total;
    double min_e = rep.initial_energy;
    for (const auto& x : s) {
        if (x.energy.total < 0.0 && !rep.first_negative_time) rep.first_negative_time = x.t;
        min_e = std::min(min_e, x.energy.total);
    }

    const std::size_t n = s.size();
    const std::size_t tail = std::max<std::size_t>(2, n / 10);
    const std::size_t begin = n > tail ? n - tail : 0;
    rep.energy_monotone_final = true;
    rep.norm_increasing_final = true;
    for (std::size_t i = begin; i + 1 < n; ++i) {
        const double e0 = s[i].energy.total, e1 = s[i + 1].energy.total;
        if (e1 > e0 + 1e-12 * (1.0 + std::abs(e0))) rep.energy_monotone_final = false;
        if (s[i + 1].linf < s[i].linf) rep.norm_increasing_final = false;
    }
    if (n - begin >= 3) {
        std::vector<double> t, e, l;
        for (std::size_t i = begin; i < n; ++i) {
            t.push_back(s[i].t);
            e.push_back(s[i].energy.total);
            l.push_back(s[i].linf);
        }
        try {
            rep.energy_slope_final = fit_line(t, e).slope;
            rep.norm_slope_final = fit_line(t, l).slope;
        } catch (const FitError&) {
        }
    }

    using V = EnergyMonitorReport::Verdict;
    if (rep.final_energy < -10.0 * std::abs(rep.initial_energy) && rep.energy_monotone_final) {
        rep.verdict = V::EnergyDiverging;
    } else if (min_e >= -1e-12 * (1.0 + std::abs(rep.initial_energy))) {
        rep.verdict = V::EnergyStaysNonneg;
    } else {
        rep.verdict = V::Inconclusive;
    }
    return rep;
}

}  // namespace npl
