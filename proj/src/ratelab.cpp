#include "lagcesaro/ratelab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "lagcesaro/errors.hpp"
#include "lagcesaro/quadrature.hpp"
#include "lagcesaro/specfun.hpp"

namespace lagcesaro::ratelab {

namespace {

constexpr double kSlopeFloor = 1e-12;

double require_eta(const expansion::ExpansionParams& params) {
    if (!params.eta) {
        throw ValidationError("rate bounds require eta; none was supplied");
    }
    return *params.eta;
}

void require_positive_n(int n) {
    if (n < 1) {
        std::ostringstream oss;
        oss << "n = " << n << " violates n >= 1";
        throw ValidationError(oss.str());
    }
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        grid[static_cast<std::size_t>(i)] = std::exp(llo + t * (lhi - llo));
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

struct EnvelopeScan {
    double sup = 0.0;
    double argmax_x = 0.0;
    int argmax_n = 0;
    bool evaluated = false;

    void offer(double value, double x, int n) {
        evaluated = true;
        if (value > sup) {
            sup = value;
            argmax_x = x;
            argmax_n = n;
        }
    }
};

RegimeEnvelope combine_scans(const EnvelopeScan& base, const EnvelopeScan& fine) {
    RegimeEnvelope out;
    out.evaluated = base.evaluated;
    if (!base.evaluated) {
        return out;
    }
    out.sup = fine.sup;
    out.argmax_x = fine.argmax_x;
    out.argmax_n = fine.argmax_n;
    const double scale = std::max(base.sup, fine.sup);
    out.stable = std::isfinite(base.sup) && std::isfinite(fine.sup) &&
                 (scale == 0.0 || std::abs(fine.sup - base.sup) <= 0.1 * scale);
    return out;
}

void validate_envelope_inputs(double order, double delta, const std::vector<int>& n_values,
                              int points) {
    if (!(order > -1.0)) {
        std::ostringstream oss;
        oss << "order = " << order << " violates order > -1";
        throw ValidationError(oss.str());
    }
    if (!(delta > 0.0)) {
        std::ostringstream oss;
        oss << "delta = " << delta << " violates delta > 0";
        throw ValidationError(oss.str());
    }
    if (points < 8) {
        throw ValidationError("points must be at least 8");
    }
    if (n_values.empty()) {
        throw ValidationError("n_values is empty");
    }
    for (int n : n_values) {
        if (n < 1 || n > 2000) {
            std::ostringstream oss;
            oss << "n = " << n << " violates 1 <= n <= 2000";
            throw ValidationError(oss.str());
        }
    }
}

std::string grid_label(int points) {
    std::ostringstream oss;
    oss << points << "-point log-spaced grids per n, stability check at " << 2 * points
        << " points";
    return oss.str();
}

} // namespace

double pointwise_rate_bound(const conditions::ModulusFunction& omega,
                            const expansion::ExpansionParams& params, int n) {
    require_positive_n(n);
    const double eta = require_eta(params);
    const double p = eta + (2.0 * (params.alpha - params.gamma) + 1.0) / 4.0;
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) {
        sum += omega.eval(1.0 / k) * std::pow(static_cast<double>(k), -(p + 1.0));
    }
    return std::pow(static_cast<double>(n), p) * sum +
           omega.eval(std::pow(static_cast<double>(n), -eta));
}

CorollaryBound refined_rate_bound(const conditions::ModulusFunction& omega,
                                  const expansion::ExpansionParams& params, int n) {
    require_positive_n(n);
    const double eta = require_eta(params);
    const double exponent = (2.0 * (params.alpha - params.gamma) + 1.0) / 4.0;
    const double nn = static_cast<double>(n);

    CorollaryBound out;
    out.refined = std::pow(nn, exponent) * omega.eval(std::pow(nn, eta)) +
                  omega.eval(std::pow(nn, -eta)) + omega.eval(1.0 / nn);
    out.eta_special = -exponent / 2.0;
    out.special = omega.eval(std::pow(nn, -out.eta_special));
    out.refined_hypothesis_ok = exponent + 1.0 < 0.0;
    out.special_hypothesis_ok =
        std::abs(eta - out.eta_special) <= 1e-12 && out.eta_special <= 1.0;
    return out;
}

double fit_loglog_slope(const std::vector<int>& n_values, const std::vector<double>& values) {
    if (n_values.size() != values.size()) {
        throw ValidationError("slope fit needs matching n and value counts");
    }
    if (n_values.size() < 2) {
        throw ValidationError("slope fit needs at least two points");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double count = static_cast<double>(n_values.size());
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (n_values[i] < 1) {
            throw ValidationError("slope fit needs n >= 1");
        }
        if (!(values[i] > 0.0)) {
            throw ValidationError("slope fit needs positive values");
        }
        const double lx = std::log(static_cast<double>(n_values[i]));
        const double ly = std::log(values[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = count * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) {
        throw ValidationError("slope fit needs at least two distinct n");
    }
    return (count * sxy - sx * sy) / denom;
}

namespace {

std::vector<double> kernel_deviations(const std::function<double(double)>& f, double f0,
                                      const expansion::ExpansionParams& params,
                                      const std::vector<int>& n_values, double rtol,
                                      int threads) {
    // Warm the quadrature cache up front so workers only read it.
    for (int m = 32; m <= 512; m *= 2) {
        quadrature::cached_laguerre_rule(m, params.alpha);
    }

    std::vector<double> out(n_values.size(), 0.0);
    unsigned requested = threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                      : static_cast<unsigned>(threads);
    requested = std::min<unsigned>(requested, static_cast<unsigned>(n_values.size()));

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_values.size()) {
                return;
            }
            try {
                const double mean =
                    expansion::cesaro_mean_kernel_at_zero(f, params, n_values[i], rtol);
                out[i] = std::abs(mean - f0);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
                return;
            }
        }
    };

    if (requested <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(requested);
        for (unsigned t = 0; t < requested; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
    return out;
}

} // namespace

SweepResult deviation_sweep(const std::function<double(double)>& f, double f0,
                            const expansion::ExpansionParams& params,
                            const std::vector<int>& n_values, expansion::MeanMethod method,
                            const conditions::ModulusFunction* omega, double rtol, int threads) {
    if (n_values.empty()) {
        throw ValidationError("n_values is empty");
    }
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (n_values[i] < 1 || n_values[i] > 512) {
            std::ostringstream oss;
            oss << "n = " << n_values[i] << " violates 1 <= n <= 512";
            throw ValidationError(oss.str());
        }
        if (i > 0 && n_values[i] <= n_values[i - 1]) {
            throw ValidationError("n_values must be strictly increasing");
        }
    }
    if (!(rtol > 0.0)) {
        throw ValidationError("rtol must be positive");
    }
    if (threads < 0) {
        throw ValidationError("threads must be nonnegative");
    }

    SweepResult result;
    result.alpha = params.alpha;
    result.gamma = params.gamma;
    result.has_eta = params.eta.has_value();
    result.eta = params.eta.value_or(0.0);
    result.n_values = n_values;

    const bool run_direct =
        method == expansion::MeanMethod::direct || method == expansion::MeanMethod::both;
    const bool run_kernel =
        method == expansion::MeanMethod::kernel || method == expansion::MeanMethod::both;
    result.method = method == expansion::MeanMethod::both
                        ? "both"
                        : (run_direct ? "direct" : "kernel");

    if (run_direct) {
        const auto table =
            expansion::fourier_laguerre_coeffs(f, params.alpha, n_values.back(), rtol, "sweep");
        result.deviation_direct.reserve(n_values.size());
        for (int n : n_values) {
            const double mean = expansion::cesaro_mean_direct(table, params, n, 0.0);
            result.deviation_direct.push_back(std::abs(mean - f0));
        }
    }
    if (run_kernel) {
        result.deviation_kernel = kernel_deviations(f, f0, params, n_values, rtol, threads);
    }
    if (run_direct && run_kernel) {
        for (std::size_t i = 0; i < n_values.size(); ++i) {
            const double d = result.deviation_direct[i];
            const double k = result.deviation_kernel[i];
            result.max_method_gap =
                std::max(result.max_method_gap, std::abs(d - k) / (1.0 + std::abs(d)));
        }
    }

    const std::vector<double>& primary =
        run_direct ? result.deviation_direct : result.deviation_kernel;

    if (omega != nullptr && params.eta.has_value()) {
        result.bound_theorem.reserve(n_values.size());
        result.bound_corollary_refined.reserve(n_values.size());
        result.bound_corollary_special.reserve(n_values.size());
        result.ratios.reserve(n_values.size());
        for (std::size_t i = 0; i < n_values.size(); ++i) {
            const double bound = pointwise_rate_bound(*omega, params, n_values[i]);
            const auto corollary = refined_rate_bound(*omega, params, n_values[i]);
            result.bound_theorem.push_back(bound);
            result.bound_corollary_refined.push_back(corollary.refined);
            result.bound_corollary_special.push_back(corollary.special);
            result.ratios.push_back(bound > 0.0 ? primary[i] / bound : 0.0);
            if (i == 0) {
                result.eta_special = corollary.eta_special;
                result.corollary_refined_ok = corollary.refined_hypothesis_ok;
                result.corollary_special_ok = corollary.special_hypothesis_ok;
            }
        }
    }

    const std::size_t half_start = n_values.size() / 2;
    if (n_values.size() - half_start >= 2) {
        std::vector<int> tail_n(n_values.begin() + static_cast<std::ptrdiff_t>(half_start),
                                n_values.end());
        std::vector<double> tail_dev(primary.begin() + static_cast<std::ptrdiff_t>(half_start),
                                     primary.end());
        const bool above_floor =
            std::all_of(tail_dev.begin(), tail_dev.end(),
                        [](double v) { return v > kSlopeFloor; });
        if (above_floor) {
            result.fitted_slope = fit_loglog_slope(tail_n, tail_dev);
            result.slope_defined = true;
        }
    }
    return result;
}

namespace {

EnvelopeReport growth_envelope_impl(double order, double c, double delta,
                                    const std::vector<int>& n_values, int points) {
    EnvelopeScan base_a, base_b, fine_a, fine_b;

    auto scan = [&](int count, EnvelopeScan& a, EnvelopeScan& b) {
        for (int n : n_values) {
            const double split = c / n;
            const double scale_a = std::pow(static_cast<double>(n), order);
            {
                std::vector<double> xs = log_spaced(split * 1e-8, split, count);
                xs.insert(xs.begin(), 0.0);
                for (double x : xs) {
                    const double value =
                        std::abs(specfun::laguerre_eval(n, order, x).value) / scale_a;
                    a.offer(value, x, n);
                }
            }
            if (split < delta) {
                const double scale_b = std::pow(static_cast<double>(n), (2.0 * order - 1.0) / 4.0);
                for (double x : log_spaced(split, delta, count)) {
                    const double value = std::abs(specfun::laguerre_eval(n, order, x).value) *
                                         std::pow(x, (2.0 * order + 1.0) / 4.0) / scale_b;
                    b.offer(value, x, n);
                }
            }
        }
    };

    scan(points, base_a, base_b);
    scan(2 * points, fine_a, fine_b);

    EnvelopeReport report;
    report.regime_a = combine_scans(base_a, fine_a);
    report.regime_b = combine_scans(base_b, fine_b);
    report.grid = grid_label(points);
    return report;
}

} // namespace

EnvelopeReport laguerre_growth_envelope(double order, double c, double delta,
                                        const std::vector<int>& n_values, int points) {
    validate_envelope_inputs(order, delta, n_values, points);
    if (!(c > 0.0)) {
        std::ostringstream oss;
        oss << "c = " << c << " violates c > 0";
        throw ValidationError(oss.str());
    }
    return growth_envelope_impl(order, c, delta, n_values, points);
}

double weighted_envelope_exponent_a(double order, double power) {
    return std::max(power - 0.5, order / 2.0 - 0.25);
}

double weighted_envelope_exponent_b(double order, double power) {
    return std::max(power - 1.0 / 3.0, order / 2.0 - 0.25);
}

EnvelopeReport weighted_laguerre_envelope(double order, double power, double delta, double theta,
                                          const std::vector<int>& n_values, int points) {
    validate_envelope_inputs(order, delta, n_values, points);
    if (!(theta > 0.0 && theta < 4.0)) {
        std::ostringstream oss;
        oss << "theta = " << theta << " violates 0 < theta < 4";
        throw ValidationError(oss.str());
    }

    const double exp_a = weighted_envelope_exponent_a(order, power);
    const double exp_b = weighted_envelope_exponent_b(order, power);

    EnvelopeScan base_a, base_b, fine_a, fine_b;
    auto scan = [&](int count, EnvelopeScan& a, EnvelopeScan& b) {
        for (int n : n_values) {
            const double hi_a = (4.0 - theta) * n;
            if (hi_a > delta) {
                const double scale = std::pow(static_cast<double>(n), exp_a);
                for (double x : log_spaced(delta, hi_a, count)) {
                    const double value =
                        std::abs(specfun::laguerre_weighted(n, order, x, power)) / scale;
                    a.offer(value, x, n);
                }
            }
            const double hi_b = 4.0 * n + 80.0;
            if (hi_b > delta) {
                const double scale = std::pow(static_cast<double>(n), exp_b);
                for (double x : log_spaced(delta, hi_b, count)) {
                    const double value =
                        std::abs(specfun::laguerre_weighted(n, order, x, power)) / scale;
                    b.offer(value, x, n);
                }
            }
        }
    };

    scan(points, base_a, base_b);
    scan(2 * points, fine_a, fine_b);

    EnvelopeReport report;
    report.regime_a = combine_scans(base_a, fine_a);
    report.regime_b = combine_scans(base_b, fine_b);
    report.grid = grid_label(points);
    return report;
}

} // namespace lagcesaro::ratelab
