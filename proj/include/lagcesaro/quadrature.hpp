#pragma once

#include <functional>
#include <vector>

namespace lagcesaro::quadrature {

/// Nodes and weights of a Gauss rule. For the Laguerre family the rule
/// integrates g against e^{-y} y^alpha on [0, inf); for the Legendre rule
/// alpha is meaningless (set to 0) and the interval is [-1, 1] with weight 1.
///
/// Nodes are strictly increasing. Weights are nonnegative; for Laguerre rules
/// beyond ~250 nodes the outermost weights underflow to exact zero at double
/// precision (they are below e^{-745}), which integration treats as "skip".
struct QuadratureRule {
    double alpha = 0.0;
    int size = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// m-node generalized Gauss-Laguerre rule built by the Golub-Welsch method:
/// eigenvalues of the symmetric tridiagonal Jacobi matrix give the nodes and
/// the squared first eigenvector components give the weights. 1 <= m <= 512.
QuadratureRule gauss_laguerre_rule(int m, double alpha);

/// m-node Gauss-Legendre rule on [-1, 1], from the same eigensolver.
QuadratureRule gauss_legendre_rule(int m);

/// Memoized gauss_laguerre_rule; safe for concurrent callers. The returned
/// reference stays valid for the program lifetime.
const QuadratureRule& cached_laguerre_rule(int m, double alpha);

/// Memoized gauss_legendre_rule.
const QuadratureRule& cached_legendre_rule(int m);

/// sum_i w_i g(x_i). Nodes whose weight underflowed to zero are skipped;
/// a non-finite g at any contributing node raises NumericalError naming it.
double integrate_weighted(const QuadratureRule& rule, const std::function<double(double)>& g);

/// Result of adaptive refinement: the last value together with the measured
/// agreement between the final two rules. converged means the mixed
/// difference |I_m - I_{m/2}| / (1 + |I_m|) dropped below the requested rtol.
struct RefinedIntegral {
    double value = 0.0;
    double achieved_rtol = 0.0;
    bool converged = false;
    int nodes_used = 0;
};

/// Integrates g against e^{-y} y^alpha with rule sizes m_start, 2 m_start, ...
/// capped at 512 nodes, until two successive values agree to rtol.
/// Non-convergence at the cap is reported through the flag, not an error.
RefinedIntegral integrate_refined(double alpha, const std::function<double(double)>& g,
                                  double rtol, int m_start = 32);

/// int_u^inf phi(t) dt for phi of the form e^{-t/2} psi(t) with psi of at
/// most polynomial growth. Substituting t = u + 2s turns the tail into
/// 2 int_0^inf e^{-s} [e^s phi(u + 2s)] ds, handled by integrate_refined with
/// alpha = 0; the bracket is evaluated in log form where e^s alone would
/// overflow. Requires u >= 0.
RefinedIntegral integrate_tail(double u, const std::function<double(double)>& phi, double rtol);

} // namespace lagcesaro::quadrature
