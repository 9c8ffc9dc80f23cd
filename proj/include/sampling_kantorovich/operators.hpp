#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "detail/parallel.hpp"
#include "error.hpp"
#include "kernel.hpp"
#include "moments.hpp"
#include "quadrature.hpp"
#include "signal.hpp"
#include "summation.hpp"

namespace sampling {

/// Unit-spaced sampling nodes t_k = k + offset.
struct shifted_grid {
    double offset = 0.0;
    double node(std::int64_t k) const noexcept { return static_cast<double>(k) + offset; }
};

/// Range of k summed for one evaluation point.
struct eval_window {
    double x = 0.0;
    double w = 1.0;
    std::int64_t k_lo = 0;
    std::int64_t k_hi = -1;
    double tail_budget = 0.0;
};

enum class cell_rule {
    automatic,      ///< antiderivative when the signal has one, else quadrature
    antiderivative, ///< (F(b) - F(a)) / (b - a); throws when F is missing
    quadrature,     ///< 8-point Gauss-Legendre, escalating to adaptive
};

struct eval_options {
    /// Bound on the dropped tail of the k-series for decaying kernels.
    double tail_budget = 1e-6;
    cell_rule cells = cell_rule::automatic;
};

namespace detail {

/// sup |f| for window sizing: the supplied bound, or else max |f| on 1025
/// points of [x - 2, x + 2] (an estimate, not a bound).
inline double signal_scale(const signal& f, double x)
{
    if (auto b = f.sup_bound(0); b && std::isfinite(*b))
        return std::max(*b, 1e-300);
    double m = 0.0;
    for (int i = 0; i <= 1024; ++i)
        m = std::max(m, std::fabs(f(x - 2.0 + 4.0 * i / 1024.0)));
    return std::max(m, 1e-300);
}

} // namespace detail

/// Every k with chi(w x - t_k) possibly nonzero (compact kernels), or the
/// truncated range whose dropped terms sum to at most tail_budget.
inline eval_window make_eval_window(const kernel& chi, const signal& f, double w, double x,
                                    const shifted_grid& grid, const eval_options& opts)
{
    if (!(w > 0.0) || !std::isfinite(w))
        throw error(errc::invalid_parameter, "w must be positive and finite");
    eval_window win{x, w, 0, -1, 0.0};
    const double center = w * x - grid.offset;
    if (const auto* c = std::get_if<compact_support>(&chi.support_info())) {
        win.k_lo = static_cast<std::int64_t>(std::ceil(center - c->hi));
        win.k_hi = static_cast<std::int64_t>(std::floor(center - c->lo));
        return win;
    }
    const auto& d = std::get<decay_support>(chi.support_info());
    if (!(d.order > 1.0))
        throw error(errc::truncation_infeasible, "decay order must exceed 1 for a summable series");
    const double radius = decay_truncation_radius(d, 0.0, opts.tail_budget, detail::signal_scale(f, x));
    win.k_lo = static_cast<std::int64_t>(std::ceil(center - radius));
    win.k_hi = static_cast<std::int64_t>(std::floor(center + radius));
    win.tail_budget = opts.tail_budget;
    return win;
}

/// (1/(b-a)) int_a^b f.
inline double cell_mean(const signal& f, double a, double b, cell_rule rule = cell_rule::automatic)
{
    if (!(a < b))
        throw error(errc::invalid_parameter, "cell_mean needs a < b");
    if (rule == cell_rule::antiderivative && !f.antiderivative)
        throw error(errc::invalid_parameter, f.name + " has no antiderivative");
    if (rule != cell_rule::quadrature && f.antiderivative)
        return (f.antiderivative(b) - f.antiderivative(a)) / (b - a);
    const double width = b - a;
    const double coarse = gauss_legendre_integrate<8>(f.f, a, b) / width;
    const double fine = gauss_legendre_integrate<16>(f.f, a, b) / width;
    if (std::fabs(coarse - fine) <= 1e-10)
        return coarse;
    quadrature_options opts;
    opts.abs_tol = 1e-10 * width;
    return integrate_adaptive(f.f, a, b, opts).value / width;
}

/// (G_w f)(x) = sum_k chi(w x - k) f(k / w).
inline double generalized_apply(const kernel& chi, const signal& f, double w, double x,
                                const eval_options& opts = {})
{
    const auto win = make_eval_window(chi, f, w, x, {}, opts);
    compensated_sum acc;
    for (std::int64_t k = win.k_lo; k <= win.k_hi; ++k) {
        const double kd = static_cast<double>(k);
        const double weight = chi(w * x - kd);
        if (weight != 0.0)
            acc.add(weight * f(kd / w));
    }
    return acc.value();
}

/// (S^pi_w f)(x) = sum_k [w int_{t_k/w}^{t_{k+1}/w} f] chi(w x - t_k), t_k = k + offset.
inline double kantorovich_shifted_apply(const kernel& chi, const signal& f, double w, double x,
                                        const shifted_grid& grid, const eval_options& opts = {})
{
    const auto win = make_eval_window(chi, f, w, x, grid, opts);
    compensated_sum acc;
    for (std::int64_t k = win.k_lo; k <= win.k_hi; ++k) {
        const double tk = grid.node(k);
        const double weight = chi(w * x - tk);
        if (weight != 0.0)
            acc.add(weight * cell_mean(f, tk / w, grid.node(k + 1) / w, opts.cells));
    }
    return acc.value();
}

/// (S_w f)(x): the shifted-grid series with offset 0.
inline double kantorovich_apply(const kernel& chi, const signal& f, double w, double x,
                                const eval_options& opts = {})
{
    return kantorovich_shifted_apply(chi, f, w, x, shifted_grid{0.0}, opts);
}

enum class operator_kind { generalized, kantorovich, kantorovich_shifted };

/// One operator choice: G_w, S_w, or S^pi_w with the given grid.
struct operator_tag {
    operator_kind kind = operator_kind::kantorovich;
    shifted_grid grid{};

    static operator_tag generalized() { return {operator_kind::generalized, {}}; }
    static operator_tag kantorovich() { return {operator_kind::kantorovich, {}}; }
    static operator_tag shifted(double offset) { return {operator_kind::kantorovich_shifted, {offset}}; }

    const char* label() const noexcept
    {
        switch (kind) {
        case operator_kind::generalized: return "G";
        case operator_kind::kantorovich: return "S";
        case operator_kind::kantorovich_shifted: return "Spi";
        }
        return "?";
    }
};

inline double apply(const kernel& chi, const signal& f, const operator_tag& op, double w, double x,
                    const eval_options& opts = {})
{
    switch (op.kind) {
    case operator_kind::generalized: return generalized_apply(chi, f, w, x, opts);
    case operator_kind::kantorovich: return kantorovich_apply(chi, f, w, x, opts);
    case operator_kind::kantorovich_shifted: return kantorovich_shifted_apply(chi, f, w, x, op.grid, opts);
    }
    return 0.0;
}

/// Evaluates the operator at every x; points are processed in parallel.
inline std::vector<double> apply_batch(const kernel& chi, const signal& f, const operator_tag& op, double w,
                                       std::span<const double> xs, const eval_options& opts = {})
{
    std::vector<double> out(xs.size());
    detail::parallel_for(xs.size(), [&](std::size_t i) { out[i] = apply(chi, f, op, w, xs[i], opts); });
    return out;
}

struct decomposition {
    double main_sum = 0.0;
    double remainder = 0.0;
    /// (S_w f)(x) itself; main_sum + remainder reproduces it up to one rounding.
    double kantorovich = 0.0;
};

/// Splits S_w f = sum_{j<r} w^-j / (j+1)! G_w f^(j) + R_r. The remainder is
/// recovered by subtraction.
inline decomposition representation_decompose(const kernel& chi, const signal& f, int r, double w, double x,
                                              const eval_options& opts = {})
{
    if (r < 1)
        throw error(errc::invalid_parameter, "representation order must be >= 1");
    if (f.derivative_count() < r)
        throw error(errc::missing_derivatives,
                    f.name + " needs " + std::to_string(r) + " derivatives for this decomposition");
    compensated_sum main;
    double scale = 1.0; // w^-j / (j+1)!
    for (int j = 0; j < r; ++j) {
        scale /= (j + 1);
        main.add(scale * generalized_apply(chi, f.derivative_signal(j), w, x, opts));
        scale /= w;
    }
    decomposition out;
    out.main_sum = main.value();
    out.kantorovich = kantorovich_apply(chi, f, w, x, opts);
    out.remainder = out.kantorovich - out.main_sum;
    return out;
}

} // namespace sampling
