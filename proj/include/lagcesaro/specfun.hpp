#pragma once

#include <vector>

namespace lagcesaro::specfun {

/// Natural log of the gamma function for x > 0.
/// Lanczos approximation; mixed (absolute + relative) error below 1e-13
/// across [1e-3, 1e6]. Throws std::domain_error for x <= 0 or NaN.
double log_gamma(double x);

/// Generalized binomial coefficient C(n + order, n) with its logarithm.
/// value and log_value are kept consistent to ~1e-13 relative.
struct GenBinom {
    int n;
    double order;
    double value;
    double log_value;
};

/// C(n + order, n) = prod_{k=1..n} (order + k) / k for order > -1.
/// The product is evaluated directly for n <= 64 and reconstructed from the
/// log-domain sum for larger n. Throws std::domain_error for order <= -1 or n < 0.
GenBinom gen_binom(int n, double order);

/// All coefficients C(k + order, k) for k = 0..n_max by the running product.
std::vector<double> gen_binom_sequence(int n_max, double order);

/// Result of a single generalized Laguerre evaluation L_degree^(order)(x).
struct LaguerreValue {
    int degree;
    double order;
    double x;
    double value;
};

/// L_degree^(order)(x) by the three-term recurrence
///   (k+1) L_{k+1} = (2k + 1 + order - x) L_k - (k + order) L_{k-1},
/// with L_0 = 1 and L_1 = 1 + order - x.
/// Requires order > -1 and x >= 0; overflow raises NumericalError instead of
/// being rescaled silently.
LaguerreValue laguerre_eval(int degree, double order, double x);

/// L_0..L_{n_max} at a fixed x by the same recurrence (one pass).
/// Entry k is bit-identical to laguerre_eval(k, order, x).value.
std::vector<double> laguerre_sequence(int n_max, double order, double x);

/// e^{-x/2} x^power L_degree^(order)(x), evaluated with an internally rescaled
/// recurrence so the result is finite whenever the weighted value itself is
/// representable (the bare polynomial may overflow for x beyond ~1.4e3).
/// Requires x > 0, or x == 0 with power == 0.
double laguerre_weighted(int degree, double order, double x, double power);

} // namespace lagcesaro::specfun
