#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "bspline.hpp"
#include "error.hpp"
#include "kernel.hpp"
#include "power_series.hpp"
#include "summation.hpp"

namespace sampling {

/// Kernel sum_i coef_i * M_{n_i}(x - shift_i) for arbitrary terms. Support is the
/// hull of the shifted B-spline supports.
inline kernel make_spline_combination(std::string name, std::vector<spline_term> terms)
{
    if (terms.empty())
        throw error(errc::invalid_parameter, "spline combination needs at least one term");
    double lo = INFINITY;
    double hi = -INFINITY;
    std::vector<double> knots;
    int order = terms.front().spline_order;
    for (const auto& t : terms) {
        if (t.spline_order < 1 || t.spline_order > max_bspline_order)
            throw error(errc::invalid_order, "spline order must lie in [1, 12]");
        if (!std::isfinite(t.coef) || !std::isfinite(t.shift))
            throw error(errc::invalid_parameter, "spline term must be finite");
        if (t.spline_order != order)
            order = 0;
        lo = std::min(lo, t.shift - 0.5 * t.spline_order);
        hi = std::max(hi, t.shift + 0.5 * t.spline_order);
        for (double k : bspline_knots(t.spline_order))
            knots.push_back(k + t.shift);
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    combination_spec spec{order, terms};
    return kernel(
        std::move(name),
        [terms = std::move(terms)](double x) {
            compensated_sum acc;
            for (const auto& t : terms)
                acc.add(t.coef * eval_bspline(t.spline_order, x - t.shift));
            return acc.value();
        },
        compact_support{lo, hi}, std::move(knots), std::move(spec));
}

/// chi_r(x) = sum_mu a_mu M_r(x - eps_mu) with strictly increasing shifts.
class spline_combination_kernel {
public:
    spline_combination_kernel(int order, std::vector<double> shifts, std::vector<double> coefficients,
                              std::string name = {})
        : order_(order), shifts_(std::move(shifts)), coefficients_(std::move(coefficients)),
          kernel_(make(order_, shifts_, coefficients_, std::move(name)))
    {
    }

    int spline_order() const noexcept { return order_; }
    std::span<const double> shifts() const noexcept { return shifts_; }
    std::span<const double> coefficients() const noexcept { return coefficients_; }
    const kernel& as_kernel() const noexcept { return kernel_; }
    operator const kernel&() const noexcept { return kernel_; }
    double operator()(double x) const { return kernel_(x); }

private:
    static kernel make(int order, const std::vector<double>& shifts, const std::vector<double>& coefs,
                       std::string name)
    {
        if (shifts.empty() || shifts.size() != coefs.size())
            throw error(errc::invalid_parameter, "shifts and coefficients must have equal, nonzero length");
        for (std::size_t i = 1; i < shifts.size(); ++i)
            if (!(shifts[i - 1] < shifts[i]))
                throw error(errc::invalid_parameter, "shifts must be strictly increasing");
        std::vector<spline_term> terms;
        for (std::size_t i = 0; i < shifts.size(); ++i)
            terms.push_back({coefs[i], shifts[i], order});
        if (name.empty())
            name = "spline_combination" + std::to_string(order);
        return make_spline_combination(std::move(name), std::move(terms));
    }

    int order_;
    std::vector<double> shifts_;
    std::vector<double> coefficients_;
    kernel kernel_;
};

/// c_j = (1 / hat(M_r))^{(j)}(0) for j < count.
struct taylor_coefficients {
    std::vector<double> values;
};

/// hat(M_r)(v) = (sin(v/2) / (v/2))^r. Builds that series, inverts it and
/// scales coefficient j by j!.
inline taylor_coefficients reciprocal_fourier_derivatives(int r, int count)
{
    if (r < 1)
        throw error(errc::invalid_order, "spline order must be >= 1");
    if (count < 1 || count > 16)
        throw error(errc::invalid_parameter, "count must lie in [1, 16]");
    const auto inv = half_sinc_series(count).pow(static_cast<unsigned>(r)).reciprocal();
    taylor_coefficients out;
    double factorial = 1.0;
    for (int j = 0; j < count; ++j) {
        if (j > 0)
            factorial *= j;
        out.values.push_back(factorial * inv[j]);
    }
    return out;
}

namespace detail {

/// Dense Gaussian elimination with partial pivoting; a is row-major n x n.
inline std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b)
{
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::fabs(a[row * n + col]) > std::fabs(a[pivot * n + col]))
                pivot = row;
        if (a[pivot * n + col] == 0.0)
            throw error(errc::ill_conditioned_shifts, "singular shift system");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c)
                std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row * n + col] / a[col * n + col];
            if (f == 0.0)
                continue;
            for (std::size_t c = col; c < n; ++c)
                a[row * n + c] -= f * a[col * n + c];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t c = i + 1; c < n; ++c)
            acc -= a[i * n + c] * x[c];
        x[i] = acc / a[i * n + i];
    }
    return x;
}

} // namespace detail

/// Spline kernel of order r with vanishing moments 1..r-1 built from r shifted
/// B-splines. The complex system sum_mu a_mu (-i eps_mu)^j = c_j is solved in
/// its real form sum_mu a_mu eps_mu^j = i^j c_j: c_j vanishes for odd j, and for
/// even j the factor i^j is (-1)^{j/2}.
inline spline_combination_kernel build_matched_kernel(int r, std::vector<double> shifts,
                                                       std::string name = {})
{
    if (r < 2 || r > 8)
        throw error(errc::invalid_order, "matched kernels need 2 <= r <= 8, got " + std::to_string(r));
    if (static_cast<int>(shifts.size()) != r)
        throw error(errc::invalid_parameter, "need exactly r shifts");
    for (double e : shifts)
        if (!std::isfinite(e))
            throw error(errc::invalid_parameter, "shifts must be finite");
    std::sort(shifts.begin(), shifts.end());
    for (std::size_t i = 1; i < shifts.size(); ++i)
        if (shifts[i] - shifts[i - 1] < 1e-8)
            throw error(errc::ill_conditioned_shifts, "shifts closer than 1e-8");

    const auto c = reciprocal_fourier_derivatives(r, r).values;
    const auto n = static_cast<std::size_t>(r);
    std::vector<double> matrix(n * n);
    std::vector<double> rhs(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t mu = 0; mu < n; ++mu)
            matrix[j * n + mu] = std::pow(shifts[mu], static_cast<double>(j));
        rhs[j] = (j % 2 == 1) ? 0.0 : ((j / 2) % 2 == 0 ? c[j] : -c[j]);
    }
    auto coefs = detail::solve_dense(std::move(matrix), std::move(rhs));
    return spline_combination_kernel(r, std::move(shifts), std::move(coefs), std::move(name));
}

} // namespace sampling
