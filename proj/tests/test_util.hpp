#pragma once

#include <algorithm>
#include <cmath>

namespace testutil {

inline bool close_abs(double a, double b, double tol) {
    return std::isfinite(a) && std::isfinite(b) && std::abs(a - b) <= tol;
}

inline bool close_rel(double a, double b, double rtol) {
    return std::isfinite(a) && std::isfinite(b) &&
           std::abs(a - b) <= rtol * std::max(std::abs(a), std::abs(b));
}

// Mixed absolute/relative comparison; behaves like absolute near zero.
inline bool close_mixed(double a, double b, double tol) {
    return std::isfinite(a) && std::isfinite(b) &&
           std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

} // namespace testutil
