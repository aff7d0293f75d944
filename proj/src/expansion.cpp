#include "lagcesaro/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lagcesaro/errors.hpp"
#include "lagcesaro/quadrature.hpp"
#include "lagcesaro/specfun.hpp"

namespace lagcesaro::expansion {

namespace {

constexpr int kMaxDegree = 512;

/// Cesaro convolution weights C(j + gamma - 1, j) for j = 0..n. Unlike
/// gen_binom_sequence this admits any gamma > -1 even though gamma - 1 may
/// reach -1 and below, where individual weights can be zero or negative
/// (e.g. gamma = 0 gives 1, 0, 0, ...).
std::vector<double> cesaro_weight_sequence(int n, double gamma) {
    std::vector<double> c(static_cast<size_t>(n) + 1);
    c[0] = 1.0;
    const double sigma = gamma - 1.0;
    for (int j = 1; j <= n; ++j) {
        c[j] = c[j - 1] * ((sigma + j) / j);
    }
    return c;
}

double norm_factor(double alpha) {
    return std::exp(specfun::log_gamma(alpha + 1.0));
}

void check_degree(const char* fn, int n, int limit) {
    if (n < 0 || n > limit) {
        std::ostringstream os;
        os << fn << ": requires 0 <= n <= " << limit << ", got " << n;
        throw ValidationError(os.str());
    }
}

} // namespace

ExpansionParams::ExpansionParams(double alpha_, double gamma_, std::optional<double> eta_)
    : alpha(alpha_), gamma(gamma_), eta(eta_) {
    if (!(alpha > -1.0)) {
        std::ostringstream os;
        os << "alpha = " << alpha << " violates alpha > -1";
        throw ValidationError(os.str());
    }
    if (!(gamma > -1.0)) {
        std::ostringstream os;
        os << "gamma = " << gamma << " violates gamma > -1";
        throw ValidationError(os.str());
    }
    if (eta) {
        const double hi = eta_upper_bound();
        if (!(*eta > 0.0 && *eta < hi)) {
            std::ostringstream os;
            os << "eta = " << *eta << " violates 0 < eta < -(2*(alpha-gamma)+1)/4 = " << hi
               << " (requires gamma > alpha + 1/2)";
            throw ValidationError(os.str());
        }
    }
}

CoefficientTable fourier_laguerre_coeffs(const std::function<double(double)>& f, double alpha,
                                         int n_max, double rtol, std::string source) {
    if (!(alpha > -1.0)) {
        std::ostringstream os;
        os << "fourier_laguerre_coeffs: alpha = " << alpha << " violates alpha > -1";
        throw ValidationError(os.str());
    }
    check_degree("fourier_laguerre_coeffs", n_max, kMaxDegree);
    if (!(rtol > 0.0)) {
        throw ValidationError("fourier_laguerre_coeffs: requires rtol > 0");
    }

    const int count = n_max + 1;
    const int m_start = std::min(std::max(64, 2 * n_max + 16), 256);

    std::vector<double> integrals(count, 0.0);
    std::vector<double> prev(count, 0.0);
    std::vector<double> achieved(count, 0.0);
    std::vector<char> converged(count, 0);
    bool have_prev = false;

    int m = m_start;
    for (;;) {
        const quadrature::QuadratureRule& rule = quadrature::cached_laguerre_rule(m, alpha);
        std::fill(integrals.begin(), integrals.end(), 0.0);
        for (int i = 0; i < rule.size; ++i) {
            const double w = rule.weights[i];
            if (w == 0.0) {
                continue;
            }
            const double fx = f(rule.nodes[i]);
            if (!std::isfinite(fx)) {
                std::ostringstream os;
                os << "fourier_laguerre_coeffs: f is not finite at node x = " << rule.nodes[i];
                throw NumericalError(os.str());
            }
            const std::vector<double> lag = specfun::laguerre_sequence(n_max, alpha, rule.nodes[i]);
            const double wf = w * fx;
            for (int nu = 0; nu < count; ++nu) {
                integrals[nu] += wf * lag[nu];
            }
        }
        if (have_prev) {
            bool all_ok = true;
            for (int nu = 0; nu < count; ++nu) {
                achieved[nu] =
                    std::abs(integrals[nu] - prev[nu]) / (1.0 + std::abs(integrals[nu]));
                converged[nu] = achieved[nu] <= rtol ? 1 : 0;
                all_ok = all_ok && converged[nu];
            }
            if (all_ok || m >= kMaxDegree) {
                break;
            }
        }
        prev = integrals;
        have_prev = true;
        m = std::min(2 * m, kMaxDegree);
    }

    CoefficientTable table;
    table.alpha = alpha;
    table.source = std::move(source);
    table.values.resize(count);
    table.converged = std::move(converged);
    table.achieved_rtols = std::move(achieved);
    const double norm = norm_factor(alpha);
    for (int nu = 0; nu < count; ++nu) {
        table.values[nu] = integrals[nu] / (norm * specfun::gen_binom(nu, alpha).value);
    }
    table.achieved_rtol =
        *std::max_element(table.achieved_rtols.begin(), table.achieved_rtols.end());
    return table;
}

double partial_sum(const CoefficientTable& table, double x, int k) {
    check_degree("partial_sum", k, table.max_index());
    const std::vector<double> lag = specfun::laguerre_sequence(k, table.alpha, x);
    double sum = 0.0;
    for (int nu = 0; nu <= k; ++nu) {
        sum += table.values[nu] * lag[nu];
    }
    return sum;
}

double cesaro_mean_direct(const CoefficientTable& table, const ExpansionParams& params, int n,
                          double x) {
    check_degree("cesaro_mean_direct", n, table.max_index());
    if (params.alpha != table.alpha) {
        throw ValidationError("cesaro_mean_direct: params.alpha differs from the table's alpha");
    }
    const std::vector<double> weights = cesaro_weight_sequence(n, params.gamma);
    const std::vector<double> lag = specfun::laguerre_sequence(n, params.alpha, x);
    double running = 0.0; // S_k(x), accumulated incrementally
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        running += table.values[k] * lag[k];
        acc += weights[n - k] * running;
    }
    return acc / specfun::gen_binom(n, params.gamma).value;
}

double cesaro_mean_kernel_at_zero(const std::function<double(double)>& f,
                                  const ExpansionParams& params, int n, double rtol) {
    check_degree("cesaro_mean_kernel_at_zero", n, kMaxDegree);
    const double beta = params.alpha + params.gamma + 1.0;
    auto g = [&f, n, beta](double y) {
        return specfun::laguerre_eval(n, beta, y).value * f(y);
    };
    const quadrature::RefinedIntegral integral =
        quadrature::integrate_refined(params.alpha, g, rtol);
    return integral.value /
           (norm_factor(params.alpha) * specfun::gen_binom(n, params.gamma).value);
}

double deviation_at_zero(const std::function<double(double)>& f, double f0,
                         const ExpansionParams& params, int n, MeanMethod method,
                         const CoefficientTable* table, double rtol) {
    if (method == MeanMethod::kernel) {
        return std::abs(cesaro_mean_kernel_at_zero(f, params, n, rtol) - f0);
    }
    CoefficientTable local;
    if (table == nullptr) {
        local = fourier_laguerre_coeffs(f, params.alpha, n, rtol);
        table = &local;
    }
    return std::abs(cesaro_mean_direct(*table, params, n, 0.0) - f0);
}

} // namespace lagcesaro::expansion
