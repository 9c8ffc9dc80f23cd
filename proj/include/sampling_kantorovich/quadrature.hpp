#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "error.hpp"
#include "summation.hpp"

namespace sampling {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct gauss_legendre_rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

inline gauss_legendre_rule make_gauss_legendre(int n)
{
    gauss_legendre_rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi's initial guess, then Newton on P_n.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16)
                break;
        }
        const double wt = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = wt;
        rule.weights[n - 1 - i] = wt;
    }
    return rule;
}

} // namespace detail

template <int N>
const gauss_legendre_rule& gauss_legendre()
{
    static const gauss_legendre_rule rule = detail::make_gauss_legendre(N);
    return rule;
}

/// Fixed-order Gauss-Legendre on [a, b].
template <int N, class F>
double gauss_legendre_integrate(const F& f, double a, double b)
{
    const auto& rule = gauss_legendre<N>();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    compensated_sum acc;
    for (int i = 0; i < N; ++i)
        acc.add(rule.weights[i] * f(mid + half * rule.nodes[i]));
    return half * acc.value();
}

struct quadrature_result {
    double value = 0.0;
    double error_estimate = 0.0;
};

struct quadrature_options {
    double abs_tol = 1e-10;
    int max_depth = 48;
};

/// Adaptive bisection with a 16-point Gauss-Legendre rule per panel. A panel is
/// accepted when the rule on the whole panel and on its two halves agree to the
/// tolerance share of that panel.
template <class F>
quadrature_result integrate_adaptive(const F& f, double a, double b, quadrature_options opts = {})
{
    if (a == b)
        return {};
    struct panel {
        double lo, hi, whole, tol;
        int depth;
    };
    std::vector<panel> stack;
    stack.push_back({a, b, gauss_legendre_integrate<16>(f, a, b), opts.abs_tol, 0});
    compensated_sum value;
    double err = 0.0;
    while (!stack.empty()) {
        const panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.lo + p.hi);
        const double left = gauss_legendre_integrate<16>(f, p.lo, mid);
        const double right = gauss_legendre_integrate<16>(f, mid, p.hi);
        const double diff = std::fabs(left + right - p.whole);
        if (diff <= p.tol || mid == p.lo || mid == p.hi) {
            value.add(left);
            value.add(right);
            err += diff;
            continue;
        }
        if (p.depth + 1 > opts.max_depth)
            throw error(errc::quadrature_nonconvergence,
                        "adaptive quadrature exceeded its subdivision depth");
        // Push the right half first so the left half is processed first.
        stack.push_back({mid, p.hi, right, 0.5 * p.tol, p.depth + 1});
        stack.push_back({p.lo, mid, left, 0.5 * p.tol, p.depth + 1});
    }
    return {value.value(), err};
}

/// Adaptive integration over consecutive breakpoints, e.g. the knots of a spline.
template <class F>
quadrature_result integrate_piecewise(const F& f, std::span<const double> breaks,
                                      quadrature_options opts = {})
{
    quadrature_result total;
    if (breaks.size() < 2)
        return total;
    compensated_sum acc;
    quadrature_options local = opts;
    local.abs_tol = opts.abs_tol / static_cast<double>(breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const auto piece = integrate_adaptive(f, breaks[i], breaks[i + 1], local);
        acc.add(piece.value);
        total.error_estimate += piece.error_estimate;
    }
    total.value = acc.value();
    return total;
}

} // namespace sampling
