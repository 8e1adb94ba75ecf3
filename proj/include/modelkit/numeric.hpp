#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>

#include "modelkit/errors.hpp"

namespace modelkit {

using NumericFn = std::function<double(double)>;

inline constexpr int kSimpsonSubintervals = 200;

/// Composite Simpson quadrature over [a, b] with an even subinterval count.
/// b < a integrates with the usual sign flip.
inline double simpson_integrate(const NumericFn& f, double a, double b,
                                int subintervals = kSimpsonSubintervals) {
    if (a == b) return 0.0;
    const int n = subintervals % 2 == 0 ? subintervals : subintervals + 1;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

/// Central difference with the step scaled to the query point.
inline double central_difference(const NumericFn& f, double x) {
    const double h = 1e-5 * std::max(1.0, std::fabs(x));
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline constexpr double kLimitTolerance = 1e-6;

/// Two-sided numeric limit: sample at x0 +/- 10^-k for k = 1..8 and accept
/// once successive estimates settle and the sides agree within tolerance.
inline double limit_at(const NumericFn& f, double x0) {
    double prev_left = 0.0, prev_right = 0.0;
    bool have_prev = false;
    for (int k = 1; k <= 8; ++k) {
        const double h = std::pow(10.0, -k);
        const double left = f(x0 - h);
        const double right = f(x0 + h);
        if (have_prev && std::fabs(left - prev_left) < kLimitTolerance &&
            std::fabs(right - prev_right) < kLimitTolerance &&
            std::fabs(left - right) < kLimitTolerance)
            return 0.5 * (left + right);
        prev_left = left;
        prev_right = right;
        have_prev = true;
    }
    fail(Errc::no_convergence, "limit estimates did not converge");
}

}  // namespace modelkit
