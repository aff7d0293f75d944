#include "lagcesaro/conditions.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "lagcesaro/errors.hpp"
#include "lagcesaro/quadrature.hpp"
#include "lagcesaro/specfun.hpp"

namespace lagcesaro::conditions {

namespace {

constexpr double kNumeratorFloor = 1e-14; // below this the 0/0 convention applies

std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> g(points);
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (int i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        g[i] = std::exp(llo + t * (lhi - llo));
    }
    return g;
}

struct GridScan {
    double sup = 0.0;
    double argmax = 0.0;
    bool violated = false; // nonzero numerator against omega == 0
};

GridScan scan_ratios(const std::vector<double>& grid,
                     const std::function<double(double)>& numerator,
                     const std::function<double(double)>& denominator) {
    GridScan out;
    for (const double u : grid) {
        const double num = numerator(u);
        if (num < kNumeratorFloor) {
            continue;
        }
        const double den = denominator(u);
        if (den <= 0.0) {
            out.violated = true;
            continue;
        }
        const double ratio = num / den;
        if (ratio > out.sup) {
            out.sup = ratio;
            out.argmax = u;
        }
    }
    return out;
}

ConditionReport report_from_scans(double u_min, double u_max, int points, const GridScan& coarse,
                                  const GridScan& fine) {
    ConditionReport rep;
    rep.sup_ratio = fine.sup;
    rep.argmax_u = fine.argmax;
    std::ostringstream os;
    os << points << " log-spaced points on [" << u_min << ", " << u_max << "]";
    rep.grid = os.str();
    const double scale = std::max(std::max(coarse.sup, fine.sup), 1e-300);
    rep.stable = std::abs(fine.sup - coarse.sup) <= 0.2 * scale;
    rep.passed = std::isfinite(fine.sup) && !coarse.violated && !fine.violated && rep.stable;
    return rep;
}

} // namespace

ModulusFunction modulus_linear() {
    return ModulusFunction{[](double t) { return t; }, "t"};
}

ModulusFunction modulus_power(double exponent) {
    if (!(exponent > 0.0 && exponent <= 1.0)) {
        std::ostringstream os;
        os << "modulus_power: exponent = " << exponent << " violates 0 < exponent <= 1";
        throw ValidationError(os.str());
    }
    std::ostringstream label;
    label << "t^" << exponent;
    return ModulusFunction{[exponent](double t) { return std::pow(t, exponent); }, label.str()};
}

ModulusFunction modulus_zero() {
    return ModulusFunction{[](double) { return 0.0; }, "0"};
}

ModulusCheck validate_modulus(const ModulusFunction& omega) {
    ModulusCheck check;
    check.zero_at_zero = std::abs(omega.eval(0.0)) <= 1e-12;

    const std::vector<double> grid = log_grid(1e-6, 10.0, 200);
    check.nondecreasing = true;
    double prev = omega.eval(0.0);
    for (const double t : grid) {
        const double cur = omega.eval(t);
        if (cur < prev - 1e-12 * (1.0 + std::abs(cur))) {
            check.nondecreasing = false;
            break;
        }
        prev = cur;
    }

    const std::vector<double> ab = log_grid(1e-6, 5.0, 50);
    check.subadditive = true;
    for (const double a : ab) {
        for (const double b : ab) {
            if (omega.eval(a + b) > omega.eval(a) + omega.eval(b) + 1e-12) {
                check.subadditive = false;
                break;
            }
        }
        if (!check.subadditive) {
            break;
        }
    }
    return check;
}

double delta0(const std::function<double(double)>& f, double f0, double t) {
    return f(t) - f0;
}

namespace {

double averaged_modulus_rule(const std::function<double(double)>& f, double f0, double alpha,
                             double y, int m) {
    const quadrature::QuadratureRule& rule = quadrature::cached_legendre_rule(m);
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
        const double u = 0.5 * y * (rule.nodes[i] + 1.0);
        const double term = std::exp(-0.5 * u) * std::pow(u, alpha) * std::abs(f(u) - f0);
        sum += rule.weights[i] * term;
    }
    sum *= 0.5 * y;
    return sum * std::pow(y, -(alpha + 1.0)) / std::exp(specfun::log_gamma(alpha + 1.0));
}

} // namespace

double averaged_modulus(const std::function<double(double)>& f, double f0, double alpha,
                        double y) {
    if (!(y > 0.0)) {
        std::ostringstream os;
        os << "averaged_modulus: requires y > 0, got " << y;
        throw ValidationError(os.str());
    }
    if (!(alpha > -1.0)) {
        std::ostringstream os;
        os << "averaged_modulus: alpha = " << alpha << " violates alpha > -1";
        throw ValidationError(os.str());
    }
    const double base = averaged_modulus_rule(f, f0, alpha, y, 64);
    const double doubled = averaged_modulus_rule(f, f0, alpha, y, 128);
    if (std::abs(doubled - base) > 1e-9 * (1.0 + std::abs(doubled))) {
        return averaged_modulus_rule(f, f0, alpha, y, 256);
    }
    return doubled;
}

ConditionReport check_condition_growth(const std::function<double(double)>& f, double f0,
                                       double alpha, const ModulusFunction& omega, double u_min,
                                       double u_max, int points) {
    if (!(u_min > 0.0 && u_min < u_max)) {
        throw ValidationError("check_condition_growth: requires 0 < u_min < u_max");
    }
    if (points < 2) {
        throw ValidationError("check_condition_growth: requires points >= 2");
    }
    auto numerator = [&](double u) { return averaged_modulus(f, f0, alpha, u); };
    auto denominator = [&](double u) { return omega.eval(u); };
    const GridScan coarse = scan_ratios(log_grid(u_min, u_max, points), numerator, denominator);
    const GridScan fine = scan_ratios(log_grid(u_min, u_max, 2 * points), numerator, denominator);
    return report_from_scans(u_min, u_max, points, coarse, fine);
}

ConditionReport check_condition_tail(const std::function<double(double)>& f, double f0,
                                     double alpha, double gamma, const ModulusFunction& omega,
                                     double u_min, double u_max, int points) {
    if (!(u_min > 0.0 && u_min < u_max)) {
        throw ValidationError("check_condition_tail: requires 0 < u_min < u_max");
    }
    if (points < 2) {
        throw ValidationError("check_condition_tail: requires points >= 2");
    }
    const double power = alpha - gamma - 1.0 / 3.0;
    const double norm = std::exp(specfun::log_gamma(alpha + 1.0));
    auto numerator = [&](double u) {
        auto phi = [&](double t) {
            return std::exp(-0.5 * t) * std::pow(t, power) * std::abs(f(t) - f0);
        };
        return quadrature::integrate_tail(u, phi, 1e-9).value / norm;
    };
    auto denominator = [&](double u) { return omega.eval(1.0 / u); };
    const GridScan coarse = scan_ratios(log_grid(u_min, u_max, points), numerator, denominator);
    const GridScan fine = scan_ratios(log_grid(u_min, u_max, 2 * points), numerator, denominator);
    return report_from_scans(u_min, u_max, points, coarse, fine);
}

} // namespace lagcesaro::conditions
