#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "detail/parallel.hpp"
#include "error.hpp"
#include "kernel.hpp"
#include "quadrature.hpp"
#include "summation.hpp"

namespace sampling {

/// Largest half-width of a truncated series over a decaying kernel.
inline constexpr std::int64_t max_series_half_width = std::int64_t{1} << 24;

/// Smallest R >= 1 such that every term with |u - k| > R of a series whose terms
/// are bounded by scale * C * |u-k|^(beta - p) sums to at most `budget`. Per
/// side the excluded terms are bounded by R^-q + R^(1-q)/(q-1), q = p - beta.
inline double decay_truncation_radius(const decay_support& d, double beta, double budget,
                                      double scale = 1.0)
{
    const double q = d.order - beta;
    if (!(q > 1.0))
        throw error(errc::divergent_moment, "decay order " + std::to_string(d.order) +
                                                " does not exceed " + std::to_string(beta + 1.0));
    if (!(budget > 0.0))
        throw error(errc::invalid_parameter, "tail budget must be positive");
    const auto tail = [&](double r) {
        return 2.0 * scale * d.constant * (std::pow(r, -q) + std::pow(r, 1.0 - q) / (q - 1.0));
    };
    if (tail(1.0) <= budget)
        return 1.0;
    double lo = 1.0;
    double hi = 2.0;
    while (tail(hi) > budget) {
        lo = hi;
        hi *= 2.0;
        if (hi > 4.0 * static_cast<double>(max_series_half_width))
            throw error(errc::truncation_infeasible,
                        "tail budget " + std::to_string(budget) + " needs an unbounded window");
    }
    for (int i = 0; i < 60 && hi - lo > 0.5; ++i) {
        const double mid = 0.5 * (lo + hi);
        (tail(mid) > budget ? lo : hi) = mid;
    }
    if (hi > static_cast<double>(max_series_half_width))
        throw error(errc::truncation_infeasible,
                    "tail budget " + std::to_string(budget) + " needs a window wider than 2^24");
    return std::ceil(hi);
}

/// Indices k with u - k inside the kernel support (compact) or |u - k| <= R.
struct index_range {
    std::int64_t lo = 0;
    std::int64_t hi = -1;
};

inline index_range kernel_index_range(const kernel& chi, double u, double beta, double budget,
                                      double scale = 1.0)
{
    if (const auto* c = std::get_if<compact_support>(&chi.support_info()))
        return {static_cast<std::int64_t>(std::ceil(u - c->hi)),
                static_cast<std::int64_t>(std::floor(u - c->lo))};
    const double radius =
        decay_truncation_radius(std::get<decay_support>(chi.support_info()), beta, budget, scale);
    return {static_cast<std::int64_t>(std::ceil(u - radius)),
            static_cast<std::int64_t>(std::floor(u + radius))};
}

namespace detail {

inline double int_power(double base, int exponent)
{
    double out = 1.0;
    for (int i = 0; i < exponent; ++i)
        out *= base;
    return out;
}

} // namespace detail

/// m_j(chi, u) = sum_k chi(u - k) (u - k)^j. Exact for compact kernels; for
/// decaying kernels the dropped tail is bounded by `tail_budget`.
inline double discrete_moment(const kernel& chi, int j, double u, double tail_budget = 1e-12)
{
    if (j < 0)
        throw error(errc::invalid_parameter, "moment order must be nonnegative");
    const auto range = kernel_index_range(chi, u, j, tail_budget);
    compensated_sum acc;
    for (std::int64_t k = range.lo; k <= range.hi; ++k) {
        const double t = u - static_cast<double>(k);
        acc.add(chi(t) * detail::int_power(t, j));
    }
    return acc.value();
}

/// sum_k |chi(u - k)| |u - k|^beta at a single u.
inline double absolute_moment_sum(const kernel& chi, double beta, double u, double tail_budget = 1e-9)
{
    if (!(beta >= 0.0))
        throw error(errc::invalid_parameter, "absolute moment order must be nonnegative");
    const auto range = kernel_index_range(chi, u, beta, tail_budget);
    compensated_sum acc;
    for (std::int64_t k = range.lo; k <= range.hi; ++k) {
        const double t = u - static_cast<double>(k);
        const double a = std::fabs(t);
        acc.add(std::fabs(chi(t)) * (beta == 0.0 ? 1.0 : std::pow(a, beta)));
    }
    return acc.value();
}

/// Sample points for sup over u: the closed uniform grid of `points` points on
/// [0, 1] plus every kernel knot reduced mod 1.
inline std::vector<double> absolute_moment_grid(const kernel& chi, int points = 1001)
{
    if (points < 2)
        throw error(errc::invalid_parameter, "absolute moment grid needs at least 2 points");
    std::vector<double> grid;
    grid.reserve(points + chi.knots().size());
    for (int i = 0; i < points; ++i)
        grid.push_back(static_cast<double>(i) / (points - 1));
    for (double knot : chi.knots()) {
        const double frac = knot - std::floor(knot);
        grid.push_back(frac >= 1.0 ? 0.0 : frac);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

/// M_beta(chi) = sup_u sum_k |chi(u-k)| |u-k|^beta, with the sup taken over
/// absolute_moment_grid (the sum is 1-periodic in u).
inline double absolute_moment(const kernel& chi, double beta, int grid_points = 1001,
                              double tail_budget = 1e-9)
{
    const auto grid = absolute_moment_grid(chi, grid_points);
    std::vector<double> values(grid.size());
    detail::parallel_for(grid.size(), [&](std::size_t i) {
        values[i] = absolute_moment_sum(chi, beta, grid[i], tail_budget);
    });
    return *std::max_element(values.begin(), values.end());
}

struct moment_report {
    double beta = 0.0;
    std::vector<double> grid;
    std::vector<double> values;
    /// max |value - target|, target 1 for beta = 0 and 0 otherwise.
    double max_abs_deviation = 0.0;
    /// Set when the series diverges or cannot be truncated within budget.
    bool divergent = false;
};

inline std::vector<double> uniform_unit_grid(int points)
{
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i)
        grid[i] = static_cast<double>(i) / points;
    return grid;
}

inline moment_report discrete_moment_report(const kernel& chi, int j, std::span<const double> grid,
                                            double tail_budget = 1e-12)
{
    moment_report rep;
    rep.beta = j;
    rep.grid.assign(grid.begin(), grid.end());
    rep.values.resize(grid.size());
    detail::parallel_for(grid.size(), [&](std::size_t i) {
        rep.values[i] = discrete_moment(chi, j, grid[i], tail_budget);
    });
    const double target = j == 0 ? 1.0 : 0.0;
    for (double v : rep.values)
        rep.max_abs_deviation = std::max(rep.max_abs_deviation, std::fabs(v - target));
    return rep;
}

/// max over the grid of |sum_k chi(u - k) - 1|.
inline double partition_of_unity_deviation(const kernel& chi, int points = 101,
                                           double tail_budget = 1e-12)
{
    const auto grid = uniform_unit_grid(points);
    return discrete_moment_report(chi, 0, grid, tail_budget).max_abs_deviation;
}

struct moment_check_result {
    bool passed = false;
    /// Reports for j = 0..r; entries whose series diverges are flagged.
    std::vector<moment_report> orders;
    std::string reason;
};

/// Vanishing-moment test: m_j(chi, u) = 0 on the grid for j = 1..r-1. The m_r
/// values are reported but not constrained. A kernel whose j-th moment series
/// is not absolutely convergent (decay order p <= j + 1) fails.
inline moment_check_result check_moment_condition(const kernel& chi, int r,
                                                  std::span<const double> u_grid, double tol)
{
    if (r < 1)
        throw error(errc::invalid_parameter, "moment condition order must be >= 1");
    moment_check_result out;
    out.passed = true;
    const double budget = std::min(1e-12, 0.1 * tol);
    for (int j = 0; j <= r; ++j) {
        const bool constrained = j >= 1 && j <= r - 1;
        try {
            out.orders.push_back(discrete_moment_report(chi, j, u_grid, budget));
        } catch (const error& e) {
            // m_0 and m_r are informational; only the constrained orders may fail the check.
            if (constrained && e.code() != errc::divergent_moment)
                throw;
            if (e.code() != errc::divergent_moment && e.code() != errc::truncation_infeasible)
                throw;
            moment_report rep;
            rep.beta = j;
            rep.divergent = true;
            out.orders.push_back(std::move(rep));
            if (constrained && out.passed) {
                out.passed = false;
                out.reason = "moment of order " + std::to_string(j) + " diverges";
            }
            continue;
        }
        if (constrained && out.orders.back().max_abs_deviation > tol && out.passed) {
            out.passed = false;
            out.reason = "moment of order " + std::to_string(j) + " deviates by " +
                         std::to_string(out.orders.back().max_abs_deviation);
        }
    }
    return out;
}

inline moment_check_result check_moment_condition(const kernel& chi, int r, int grid_points = 201,
                                                  double tol = 1e-9)
{
    const auto grid = uniform_unit_grid(grid_points);
    return check_moment_condition(chi, r, grid, tol);
}

struct fourier_sample {
    int j = 0;
    int k = 0;
    std::complex<double> value;
    double deviation = 0.0;
};

struct fourier_check_result {
    bool passed = false;
    std::vector<fourier_sample> samples;
};

/// Integration breakpoints for kernel transforms: the knots (or the support
/// ends) refined so that no panel is longer than max_panel.
inline std::vector<double> kernel_breakpoints(const kernel& chi, double lo, double hi, double max_panel)
{
    std::vector<double> coarse;
    coarse.push_back(lo);
    for (double knot : chi.knots())
        if (knot > lo && knot < hi)
            coarse.push_back(knot);
    coarse.push_back(hi);
    std::sort(coarse.begin(), coarse.end());
    std::vector<double> breaks;
    for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
        const double a = coarse[i];
        const double b = coarse[i + 1];
        const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
        for (int p = 0; p < pieces; ++p)
            breaks.push_back(a + (b - a) * p / pieces);
    }
    breaks.push_back(hi);
    return breaks;
}

/// Fourier criterion for the vanishing-moment condition: with
/// hat(chi)(v) = int chi(u) e^{-iuv} du, the derivatives
/// hat(chi)^{(j)}(2 pi k) = int chi(u) (-iu)^j e^{-2 pi i k u} du must equal 1 for
/// j = k = 0 and vanish for every other (j < r, |k| <= K).
inline fourier_check_result fourier_moment_check(const kernel& chi, int r, int k_range, double tol)
{
    if (r < 1 || k_range < 1)
        throw error(errc::invalid_parameter, "fourier check needs r >= 1 and K >= 1");
    double lo = 0.0;
    double hi = 0.0;
    if (const auto* c = std::get_if<compact_support>(&chi.support_info())) {
        lo = c->lo;
        hi = c->hi;
    } else {
        const auto& d = std::get<decay_support>(chi.support_info());
        if (!(d.order > r))
            throw error(errc::divergent_moment, "transform derivatives of order r-1 need decay order > r");
        // Tail of int |chi(u)| |u|^j beyond R is at most 2 C R^{j+1-p} / (p-j-1).
        double radius = 1.0;
        for (int j = 0; j < r; ++j) {
            const double q = d.order - j - 1.0;
            const double need = std::pow(2.0 * d.constant / (q * 0.1 * tol), 1.0 / q);
            radius = std::max(radius, std::ceil(need));
        }
        if (radius > 1e4)
            throw error(errc::quadrature_nonconvergence, "kernel decays too slowly for the transform check");
        lo = -radius;
        hi = radius;
    }
    const auto breaks = kernel_breakpoints(chi, lo, hi, 0.5 / k_range);
    quadrature_options opts;
    opts.abs_tol = std::min(1e-12, 0.01 * tol);
    fourier_check_result out;
    out.passed = true;
    const double two_pi = 2.0 * std::numbers::pi;
    for (int j = 0; j < r; ++j) {
        for (int k = -k_range; k <= k_range; ++k) {
            // (-i)^j e^{-i theta} = e^{-i (theta + j pi/2)}
            const double phase = j * 0.5 * std::numbers::pi;
            const auto re = integrate_piecewise(
                [&](double u) { return chi(u) * detail::int_power(u, j) * std::cos(two_pi * k * u + phase); },
                breaks, opts);
            const auto im = integrate_piecewise(
                [&](double u) { return -chi(u) * detail::int_power(u, j) * std::sin(two_pi * k * u + phase); },
                breaks, opts);
            fourier_sample s{j, k, {re.value, im.value}, 0.0};
            const std::complex<double> target = (j == 0 && k == 0) ? 1.0 : 0.0;
            s.deviation = std::abs(s.value - target);
            if (s.deviation > tol)
                out.passed = false;
            out.samples.push_back(s);
        }
    }
    return out;
}

/// Runs the vanishing-moment test for r = 1, 2, ... and returns the kernel
/// tagged with the highest order that passed (untagged if even r = 1 fails).
inline kernel certify(const kernel& chi, int max_order, int grid_points = 201, double tol = 1e-9)
{
    std::optional<int> best;
    for (int r = 1; r <= max_order; ++r) {
        if (!check_moment_condition(chi, r, grid_points, tol).passed)
            break;
        best = r;
    }
    return best ? chi.with_certified_order(*best) : chi;
}

} // namespace sampling
