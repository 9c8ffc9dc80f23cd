#pragma once

#include <cmath>
#include <vector>

#include "error.hpp"

namespace sampling {

inline constexpr int max_bspline_order = 12;

/// Central B-spline M_n from the truncated-power alternating sum
///
///   M_n(x) = 1/(n-1)! * sum_{i=0}^{n} (-1)^i C(n,i) (n/2 + x - i)_+^{n-1}.
///
/// The sum cancels catastrophically as n grows, hence the cap at n = 12. The
/// evaluation folds x onto x <= 0 (M_n is even) so that at most ceil(n/2) terms
/// are active. M_1(+-1/2) is defined as 1/2.
inline double eval_bspline(int n, double x)
{
    if (n < 1 || n > max_bspline_order)
        throw error(errc::invalid_order, "B-spline order must lie in [1, 12], got " + std::to_string(n));
    const double half = 0.5 * n;
    const double ax = std::fabs(x);
    if (n == 1) {
        if (ax > half)
            return 0.0;
        return ax == half ? 0.5 : 1.0;
    }
    if (ax >= half)
        return 0.0;
    const double y = -ax;
    double sum = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= n; ++i) {
        const double t = half + y - i;
        if (t <= 0.0)
            break;
        const double term = binom * std::pow(t, n - 1);
        sum += (i % 2 == 0) ? term : -term;
        binom = binom * (n - i) / (i + 1);
    }
    double fact = 1.0;
    for (int i = 2; i < n; ++i)
        fact *= i;
    const double value = sum / fact;
    return value > 0.0 ? value : 0.0;
}

/// Knots of M_n: integers in [-n/2, n/2] for even n, half-integers for odd n.
inline std::vector<double> bspline_knots(int n)
{
    std::vector<double> knots;
    knots.reserve(n + 1);
    for (int i = 0; i <= n; ++i)
        knots.push_back(-0.5 * n + i);
    return knots;
}

} // namespace sampling
