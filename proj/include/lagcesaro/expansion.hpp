#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lagcesaro::expansion {

/// Parameters of a weighted Laguerre expansion experiment.
/// alpha is the weight exponent (alpha > -1), gamma the Cesaro order
/// (gamma > -1). eta, when present, is the rate exponent and must satisfy
/// 0 < eta < -(2 (alpha - gamma) + 1) / 4, which forces gamma > alpha + 1/2.
struct ExpansionParams {
    double alpha;
    double gamma;
    std::optional<double> eta;

    ExpansionParams(double alpha, double gamma, std::optional<double> eta = std::nullopt);

    /// Upper end of the admissible eta window, -(2 (alpha - gamma) + 1) / 4.
    double eta_upper_bound() const { return 0.25 * (2.0 * (gamma - alpha) - 1.0); }
};

/// Expansion coefficients a_0..a_N of f against the weight e^{-y} y^alpha:
///   a_nu = (1 / (Gamma(alpha+1) C(nu+alpha, nu))) int e^{-y} y^alpha L_nu(y) f(y) dy.
/// converged[nu] records whether the refinement ladder met the requested rtol
/// for that coefficient; achieved_rtols[nu] is the measured agreement of the
/// last two rules and achieved_rtol their maximum.
struct CoefficientTable {
    double alpha = 0.0;
    std::vector<double> values;
    std::vector<char> converged;
    std::vector<double> achieved_rtols;
    double achieved_rtol = 0.0;
    std::string source;

    int max_index() const { return static_cast<int>(values.size()) - 1; }
};

/// Computes the coefficient table with one shared Laguerre-sequence pass per
/// quadrature node. Rule sizes start at max(64, 2 n_max + 16) (capped at 256
/// so at least one doubling to 512 remains) and double until every
/// coefficient meets rtol in the mixed sense |diff| <= rtol (1 + |a_nu|).
CoefficientTable fourier_laguerre_coeffs(const std::function<double(double)>& f, double alpha,
                                         int n_max, double rtol, std::string source = "");

/// sum_{nu=0..k} a_nu L_nu^{(alpha)}(x).
double partial_sum(const CoefficientTable& table, double x, int k);

/// (C, gamma) mean of the partial sums at x:
///   (1 / C(n+gamma, n)) sum_{k=0..n} C(n-k+gamma-1, n-k) S_k(x).
/// gamma = 0 reduces to the plain partial sum.
double cesaro_mean_direct(const CoefficientTable& table, const ExpansionParams& params, int n,
                          double x);

/// Same mean at x = 0 through the collapsed kernel
///   (1 / (Gamma(alpha+1) C(n+gamma, n))) int e^{-y} y^alpha L_n^{(alpha+gamma+1)}(y) f(y) dy,
/// evaluated with integrate_refined. Requires n <= 512.
double cesaro_mean_kernel_at_zero(const std::function<double(double)>& f,
                                  const ExpansionParams& params, int n, double rtol);

enum class MeanMethod { direct, kernel, both };

/// |S_n^{(gamma)} f(0) - f0|. With MeanMethod::direct (or both) a coefficient
/// table of size n is built internally unless one is supplied.
double deviation_at_zero(const std::function<double(double)>& f, double f0,
                         const ExpansionParams& params, int n, MeanMethod method,
                         const CoefficientTable* table = nullptr, double rtol = 1e-10);

} // namespace lagcesaro::expansion
