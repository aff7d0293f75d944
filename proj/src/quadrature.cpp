#include "lagcesaro/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

#include "lagcesaro/errors.hpp"
#include "lagcesaro/specfun.hpp"

namespace lagcesaro::quadrature {

namespace {

constexpr int kMaxRuleSize = 512;
constexpr int kIterationBudget = 50; // implicit-shift sweeps per eigenvalue

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix
/// (diagonal d, off-diagonal e). Only the first row of the accumulated
/// eigenvector matrix is carried in q, which is all Golub-Welsch needs.
/// On return d holds unordered eigenvalues and q their first components.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& q) {
    const int n = static_cast<int>(d.size());
    e.resize(n, 0.0); // e[n-1] is scratch
    q.assign(n, 0.0);
    q[0] = 1.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        for (;;) {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) {
                    break;
                }
            }
            if (m == l) {
                break;
            }
            if (iter++ == kIterationBudget) {
                std::ostringstream os;
                os << "tridiagonal eigensolver exceeded " << kIterationBudget
                   << " sweeps at eigenvalue " << l << " of " << n;
                throw NumericalError(os.str());
            }
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            int i = m - 1;
            bool underflowed = false;
            for (; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    // Off-diagonal collapsed mid-sweep; drop the shift and restart.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = q[i + 1];
                q[i + 1] = s * q[i] + c * f;
                q[i] = c * q[i] - s * f;
            }
            if (underflowed && i >= l) {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

QuadratureRule rule_from_jacobi(std::vector<double> d, std::vector<double> e, double mu0,
                                double alpha) {
    std::vector<double> q;
    tridiag_ql(d, e, q);
    const int n = static_cast<int>(d.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });

    QuadratureRule rule;
    rule.alpha = alpha;
    rule.size = n;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = d[idx[i]];
        rule.weights[i] = mu0 * q[idx[i]] * q[idx[i]];
    }

    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i > 0 && !(rule.nodes[i] > rule.nodes[i - 1])) {
            throw NumericalError("quadrature nodes are not strictly increasing");
        }
        if (!(rule.weights[i] >= 0.0)) {
            throw NumericalError("quadrature produced a negative weight");
        }
        sum += rule.weights[i];
    }
    if (!(std::abs(sum - mu0) <= 1e-12 * mu0)) {
        throw NumericalError("quadrature weights do not sum to the zeroth moment");
    }
    return rule;
}

void check_rule_size(const char* fn, int m) {
    if (m < 1 || m > kMaxRuleSize) {
        std::ostringstream os;
        os << fn << ": requires 1 <= m <= " << kMaxRuleSize << ", got " << m;
        throw ValidationError(os.str());
    }
}

} // namespace

QuadratureRule gauss_laguerre_rule(int m, double alpha) {
    check_rule_size("gauss_laguerre_rule", m);
    if (!(alpha > -1.0)) {
        std::ostringstream os;
        os << "gauss_laguerre_rule: requires alpha > -1, got " << alpha;
        throw ValidationError(os.str());
    }
    std::vector<double> d(m);
    std::vector<double> e(m > 1 ? m - 1 : 0);
    for (int k = 0; k < m; ++k) {
        d[k] = 2.0 * k + alpha + 1.0;
    }
    for (int k = 0; k + 1 < m; ++k) {
        e[k] = std::sqrt((k + 1.0) * (k + 1.0 + alpha));
    }
    QuadratureRule rule =
        rule_from_jacobi(std::move(d), std::move(e), std::exp(specfun::log_gamma(alpha + 1.0)), alpha);
    if (!(rule.nodes.front() > 0.0)) {
        throw NumericalError("gauss_laguerre_rule produced a nonpositive node");
    }
    return rule;
}

QuadratureRule gauss_legendre_rule(int m) {
    check_rule_size("gauss_legendre_rule", m);
    std::vector<double> d(m, 0.0);
    std::vector<double> e(m > 1 ? m - 1 : 0);
    for (int k = 0; k + 1 < m; ++k) {
        const double j = k + 1.0;
        e[k] = j / std::sqrt(4.0 * j * j - 1.0);
    }
    return rule_from_jacobi(std::move(d), std::move(e), 2.0, 0.0);
}

namespace {

struct RuleKey {
    int m;
    std::uint64_t alpha_bits;
    bool operator<(const RuleKey& o) const {
        return m != o.m ? m < o.m : alpha_bits < o.alpha_bits;
    }
};

std::uint64_t bits_of(double x) {
    std::uint64_t b;
    std::memcpy(&b, &x, sizeof b);
    return b;
}

} // namespace

const QuadratureRule& cached_laguerre_rule(int m, double alpha) {
    static std::mutex mutex;
    static std::map<RuleKey, std::unique_ptr<QuadratureRule>> cache;
    const RuleKey key{m, bits_of(alpha)};
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) {
            return *it->second;
        }
    }
    auto rule = std::make_unique<QuadratureRule>(gauss_laguerre_rule(m, alpha));
    std::lock_guard<std::mutex> lock(mutex);
    auto [it, inserted] = cache.emplace(key, std::move(rule));
    return *it->second;
}

const QuadratureRule& cached_legendre_rule(int m) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(m);
        if (it != cache.end()) {
            return *it->second;
        }
    }
    auto rule = std::make_unique<QuadratureRule>(gauss_legendre_rule(m));
    std::lock_guard<std::mutex> lock(mutex);
    auto [it, inserted] = cache.emplace(m, std::move(rule));
    return *it->second;
}

double integrate_weighted(const QuadratureRule& rule, const std::function<double(double)>& g) {
    double sum = 0.0;
    for (int i = 0; i < rule.size; ++i) {
        const double w = rule.weights[i];
        if (w == 0.0) {
            continue; // node beyond the e^{-745} representability horizon
        }
        const double gi = g(rule.nodes[i]);
        if (!std::isfinite(gi)) {
            std::ostringstream os;
            os << "integrand is not finite at node " << i << " (x = " << rule.nodes[i] << ")";
            throw NumericalError(os.str());
        }
        sum += w * gi;
    }
    if (!std::isfinite(sum)) {
        throw NumericalError("weighted integral overflowed during accumulation");
    }
    return sum;
}

RefinedIntegral integrate_refined(double alpha, const std::function<double(double)>& g,
                                  double rtol, int m_start) {
    if (!(rtol > 0.0)) {
        throw ValidationError("integrate_refined: requires rtol > 0");
    }
    if (m_start < 1 || m_start > kMaxRuleSize / 2) {
        std::ostringstream os;
        os << "integrate_refined: requires 1 <= m_start <= " << kMaxRuleSize / 2 << ", got "
           << m_start;
        throw ValidationError(os.str());
    }
    RefinedIntegral out;
    double prev = 0.0;
    bool have_prev = false;
    int m = m_start;
    for (;;) {
        const QuadratureRule& rule = cached_laguerre_rule(m, alpha);
        const double value = integrate_weighted(rule, g);
        if (have_prev) {
            const double diff = std::abs(value - prev) / (1.0 + std::abs(value));
            out.value = value;
            out.achieved_rtol = diff;
            out.nodes_used = m;
            if (diff <= rtol) {
                out.converged = true;
                return out;
            }
        } else {
            out.value = value;
            out.nodes_used = m;
        }
        prev = value;
        have_prev = true;
        if (m >= kMaxRuleSize) {
            out.converged = false;
            return out;
        }
        m = std::min(2 * m, kMaxRuleSize);
    }
}

RefinedIntegral integrate_tail(double u, const std::function<double(double)>& phi, double rtol) {
    if (!(u >= 0.0)) {
        std::ostringstream os;
        os << "integrate_tail: requires u >= 0, got " << u;
        throw ValidationError(os.str());
    }
    auto g = [u, &phi](double s) {
        const double p = phi(u + 2.0 * s);
        if (p == 0.0) {
            return 0.0;
        }
        if (s < 600.0) {
            return 2.0 * p * std::exp(s);
        }
        // e^s alone would overflow; combine in log form. The product is
        // bounded because phi decays like e^{-t/2} by the caller contract.
        return std::copysign(2.0 * std::exp(std::log(std::abs(p)) + s), p);
    };
    return integrate_refined(0.0, g, rtol);
}

} // namespace lagcesaro::quadrature
