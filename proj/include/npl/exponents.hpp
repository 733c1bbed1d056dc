#pragma once

#include <optional>
#include <string>
#include <vector>

namespace npl {

// Real number or +infinity, kept symbolic so comparisons stay exact.
class ExtReal {
public:
    ExtReal() = default;
    ExtReal(double v);  // NOLINT: implicit from finite reals
    static ExtReal infinity();

    bool is_infinite() const { return infinite_; }
    // Throws for +infinity.
    double value() const;

    std::string to_string(int precision = 10) const;

    friend bool operator==(const ExtReal& a, const ExtReal& b);
    friend bool operator<(const ExtReal& a, const ExtReal& b);
    friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
    friend bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
    friend bool operator>=(const ExtReal& a, const ExtReal& b) { return !(a < b); }

private:
    double value_ = 0.0;
    bool infinite_ = false;
};

ExtReal sobolev_exponent(int n);                   // (n+2)/(n-2), inf for n <= 2
ExtReal cazenave_lions_exponent(int n);            // (3n+8)/(3n-4), inf for n = 1
double fujita_exponent(int n);                     // (n+2)/n
ExtReal fractional_sobolev_exponent(int n, double alpha);  // (n+2a)/(n-2a), inf for n <= 2a
ExtReal choquard_threshold(int n);                 // p*, inf for n <= 2

struct ExponentTable {
    int n = 3;
    double alpha = 1.0;
    ExtReal p_S, p_CL, p_S_alpha, p_star;
    double p_F = 0.0;
    std::optional<double> p;
    std::optional<double> q;
    std::optional<ExtReal> q_star;  // n(p-1)/(2 alpha), needs p
    std::optional<double> R_star;   // (3/2)(q-1) max(1, 3/q), needs q
};

ExponentTable exponent_table(int n, std::optional<double> p = std::nullopt,
                             std::optional<double> q = std::nullopt, double alpha = 1.0);

// s_Q = p + 1 - (p-1)/(Q+1).
double bootstrap_sq(double p, double Q);

// B = nQ - (Q-2)(2n + Q(n-2)).
double bootstrap_B(int n, double Q);
// (Q^2(n+2) - nQ - 4(n+2)) / (Q^2(n-2) - (n-4)Q - 4n).
double bootstrap_rhs(int n, double Q);
bool bootstrap_admissible(int n, double p, double Q);

// Minimiser n+2+sqrt(n^2+3n) of bootstrap_rhs on the branch B < 0.
double bootstrap_rhs_argmin(int n);

struct NumericMinimum {
    double argmin = 0.0;
    double value = 0.0;
};
// Brent minimisation of bootstrap_rhs over the B < 0 branch.
NumericMinimum bootstrap_rhs_numeric_min(int n);

// Quantities of the bootstrap condition at exponent Q (alpha = 1).
struct BootstrapStep {
    double Q = 0.0;
    double s_Q = 0.0;
    double theta = 0.0;
    double Q_next_max = 0.0;  // supremum of admissible Q~
};

BootstrapStep bootstrap_step(int n, double p, double Q);

// Direct form: 2 xi > (Q-2)((2/r - 1) s/(s-2) - 1), xi = 1/(2p), r = r_2, s = s_Q.
bool bootstrap_condition_direct(int n, double p, double Q);

struct BootstrapLedger {
    bool terminated = false;  // reached s_Q > n(p-1)/2
    bool stuck = false;
    std::vector<double> Q;    // Q_0 = 2, Q_1, ...
    double target = 0.0;      // n(p-1)/2
    std::string note;

    std::size_t steps() const { return Q.empty() ? 0 : Q.size() - 1; }
};

BootstrapLedger bootstrap_ledger(int n, double p, std::size_t max_iterations = 10000);

struct Lemma1Tuple {
    double alpha = 0.0;
    double z = 0.0;
    double R = 0.0;
    double m = 0.0;
    double beta = 0.0;
    double alpha_dual = 0.0;

    bool satisfies_constraints(double p, double r) const;
};

// Throws InvalidArgument when p is outside [2, 3) or r <= (3/2)(p-1).
Lemma1Tuple lemma1_feasibility(double p, double r);

// r_2 = 2np / (2np - n - 2).
double fphi_exponent(int n, double p);

struct FphiSample {
    std::string profile;
    double amplitude = 0.0;
    double ratio = 0.0;  // |F_3(u)|_{r_2} / Phi_3(u)^{(2p-1)/(2p)}
};

struct FphiCheck {
    double r2 = 0.0;
    double xi = 0.0;
    std::vector<FphiSample> samples;
    double homogeneity_spread = 0.0;  // max relative ratio change across amplitudes
};

// Evaluates the ratio for Gaussian, first-mode and two-bump radial profiles on
// the unit ball at amplitudes 0.1, 1, 10. Needs n = 3 and p >= 2.
FphiCheck fphi_exponent_check(int n, double p, std::size_t nodes = 513);

}  // namespace npl
