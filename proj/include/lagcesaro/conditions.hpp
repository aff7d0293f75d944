#pragma once

#include <functional>
#include <string>

namespace lagcesaro::conditions {

/// A modulus-of-continuity-type gauge: omega(0) = 0, nondecreasing,
/// subadditive on [0, inf). Factories below produce the standard gauges;
/// validate_modulus spot-checks the axioms on sample grids.
struct ModulusFunction {
    std::function<double(double)> eval;
    std::string label;
};

ModulusFunction modulus_linear();                // t
ModulusFunction modulus_power(double exponent);  // t^exponent, 0 < exponent <= 1
ModulusFunction modulus_zero();                  // identically 0

/// Axiom spot-check: omega(0) = 0, nondecreasing on a 200-point log grid over
/// [1e-6, 10], subadditive on a 50 x 50 grid (tolerance 1e-12).
struct ModulusCheck {
    bool zero_at_zero = false;
    bool nondecreasing = false;
    bool subadditive = false;
    bool ok() const { return zero_at_zero && nondecreasing && subadditive; }
};

ModulusCheck validate_modulus(const ModulusFunction& omega);

/// Centered deviation f(t) - f0.
double delta0(const std::function<double(double)>& f, double f0, double t);

/// Averaged local deviation
///   F_alpha(y) = y^{-(alpha+1)} / Gamma(alpha+1) * int_0^y e^{-u/2} u^alpha |f(u) - f0| du,
/// computed by a mapped Gauss-Legendre rule (64-node base with refinement
/// doubling up to 256 nodes guarding accuracy). Requires y > 0, alpha > -1.
double averaged_modulus(const std::function<double(double)>& f, double f0, double alpha,
                        double y);

/// Outcome of a condition scan over a log-spaced grid. sup_ratio and argmax_u
/// come from the refined (2x) grid; passed means the sup is finite, no point
/// divided a nonzero numerator by omega = 0, and refining the grid moved the
/// sup by less than 20%.
struct ConditionReport {
    double sup_ratio = 0.0;
    double argmax_u = 0.0;
    std::string grid;
    bool passed = false;
    bool stable = false;
};

/// sup over u in [u_min, u_max] of F_alpha(u) / omega(u).
/// Ratios with numerator below 1e-14 count as 0 (the 0/0 convention).
ConditionReport check_condition_growth(const std::function<double(double)>& f, double f0,
                                       double alpha, const ModulusFunction& omega,
                                       double u_min = 1e-6, double u_max = 10.0,
                                       int points = 200);

/// sup over u in [u_min, u_max] of
///   [ (1 / Gamma(alpha+1)) int_u^inf e^{-t/2} t^{alpha-gamma-1/3} |f(t) - f0| dt ] / omega(1/u).
ConditionReport check_condition_tail(const std::function<double(double)>& f, double f0,
                                     double alpha, double gamma, const ModulusFunction& omega,
                                     double u_min = 1.0, double u_max = 32.0, int points = 50);

} // namespace lagcesaro::conditions
