#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lagcesaro/conditions.hpp"
#include "lagcesaro/expansion.hpp"

namespace lagcesaro::ratelab {

/// Two-term deviation bound with all constants set to 1:
///   n^p sum_{k=1..n} omega(1/k) / k^{p+1} + omega(1/n^eta),
/// where p = eta + (2 (alpha - gamma) + 1) / 4. Requires params.eta.
double pointwise_rate_bound(const conditions::ModulusFunction& omega,
                            const expansion::ExpansionParams& params, int n);

/// Refined bound n^{(2(alpha-gamma)+1)/4} omega(n^eta) + omega(1/n^eta) + omega(1/n)
/// and its special case omega(1/n^eta_special) with eta_special = -(2(alpha-gamma)+1)/8.
/// The hypothesis flags record whether the exponent window of each form holds
/// ((2(alpha-gamma)+1)/4 + 1 < 0 for refined; eta == eta_special <= 1 for special);
/// values are reported either way.
struct CorollaryBound {
    double refined = 0.0;
    double special = 0.0;
    double eta_special = 0.0;
    bool refined_hypothesis_ok = false;
    bool special_hypothesis_ok = false;
};

CorollaryBound refined_rate_bound(const conditions::ModulusFunction& omega,
                                  const expansion::ExpansionParams& params, int n);

/// Least-squares slope of log(values) against log(n).
double fit_loglog_slope(const std::vector<int>& n_values, const std::vector<double>& values);

/// One deviation-vs-n experiment. Bound columns are filled only when an omega
/// was supplied and params carries eta. fitted_slope is the log-log
/// least-squares slope over the upper half (by count) of n_values, computed
/// on the primary sequence (direct when available, else kernel); it is
/// undefined when any of those deviations sits at the noise floor.
/// max_method_gap is the largest elementwise mixed difference between the two
/// methods when both were run.
struct SweepResult {
    double alpha = 0.0;
    double gamma = 0.0;
    bool has_eta = false;
    double eta = 0.0;
    std::string method;
    std::vector<int> n_values;
    std::vector<double> deviation_direct;
    std::vector<double> deviation_kernel;
    std::vector<double> bound_theorem;
    std::vector<double> bound_corollary_refined;
    std::vector<double> bound_corollary_special;
    std::vector<double> ratios;
    double fitted_slope = 0.0;
    bool slope_defined = false;
    double max_method_gap = 0.0;
    double eta_special = 0.0;
    bool corollary_refined_ok = false;
    bool corollary_special_ok = false;
};

/// Runs deviation_at_zero over an increasing schedule of n (each <= 512).
/// threads = 0 picks the hardware concurrency; the kernel evaluations fan
/// out across at most `threads` workers, results are ordering-independent.
SweepResult deviation_sweep(const std::function<double(double)>& f, double f0,
                            const expansion::ExpansionParams& params,
                            const std::vector<int>& n_values, expansion::MeanMethod method,
                            const conditions::ModulusFunction* omega = nullptr,
                            double rtol = 1e-10, int threads = 1);

/// Scan outcome for one growth-envelope regime. stable means doubling the
/// x-grid moved the sup by less than 10%.
struct RegimeEnvelope {
    double sup = 0.0;
    double argmax_x = 0.0;
    int argmax_n = 0;
    bool stable = false;
    bool evaluated = false;
};

struct EnvelopeReport {
    RegimeEnvelope regime_a;
    RegimeEnvelope regime_b;
    std::string grid;
};

/// Pointwise growth envelope of the bare polynomials:
///   regime A: sup |L_n(x)| / n^order over x in [0, c/n],
///   regime B: sup |L_n(x)| x^{(2 order + 1)/4} / n^{(2 order - 1)/4}
///             over x in [c/n, delta].
/// Grids are log-spaced (plus x = 0 in regime A), points per regime per n.
EnvelopeReport laguerre_growth_envelope(double order, double c, double delta,
                                        const std::vector<int>& n_values, int points = 400);

/// Exponents of the weighted envelope regimes, max(power - 1/2, order/2 - 1/4)
/// inside [delta, (4 - theta) n] and max(power - 1/3, order/2 - 1/4) on
/// [delta, 4n + 80].
double weighted_envelope_exponent_a(double order, double power);
double weighted_envelope_exponent_b(double order, double power);

/// Weighted growth envelope of e^{-x/2} x^power |L_n^(order)(x)| divided by
/// n^exponent for the two regimes above. Requires 0 < theta < 4.
EnvelopeReport weighted_laguerre_envelope(double order, double power, double delta, double theta,
                                          const std::vector<int>& n_values, int points = 400);

} // namespace lagcesaro::ratelab
