#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "kernel.hpp"
#include "moments.hpp"
#include "operators.hpp"
#include "signal.hpp"

namespace sampling {

/// Uniform evaluation grid of n points over [lo, hi] (both ends included).
struct grid_spec {
    double x_lo = -std::numbers::pi;
    double x_hi = std::numbers::pi;
    int n_points = 16385;

    std::vector<double> points() const
    {
        if (n_points < 1)
            throw error(errc::invalid_parameter, "grid needs at least one point");
        if (n_points == 1)
            return {x_lo};
        std::vector<double> xs(n_points);
        for (int i = 0; i < n_points; ++i)
            xs[i] = x_lo + (x_hi - x_lo) * i / (n_points - 1);
        return xs;
    }
};

/// max over xs of |Op_w f(x) - f(x)|.
inline double sup_error(const kernel& chi, const signal& f, const operator_tag& op, double w,
                        std::span<const double> xs, const eval_options& opts = {})
{
    if (xs.empty())
        throw error(errc::invalid_parameter, "sup_error needs a nonempty grid");
    const auto values = apply_batch(chi, f, op, w, xs, opts);
    double m = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        m = std::max(m, std::fabs(values[i] - f(xs[i])));
    return m;
}

struct rate_sample {
    double w = 0.0;
    double error = 0.0;
};

struct fit_result {
    double slope = 0.0;
    double intercept = 0.0;
    /// Largest |log(error) - fitted line| over the samples.
    double residual = 0.0;
};

/// Least-squares line through (log w, log error).
inline fit_result rate_fit(std::span<const rate_sample> samples)
{
    if (samples.size() < 3)
        throw error(errc::invalid_parameter, "rate fit needs at least 3 samples");
    for (const auto& s : samples) {
        if (!(s.w > 0.0))
            throw error(errc::invalid_parameter, "rate fit needs positive w");
        if (!(s.error > 1e-14))
            throw error(errc::degenerate_fit, "error " + std::to_string(s.error) +
                                                  " at w=" + std::to_string(s.w) + " is exact reproduction");
    }
    const double n = static_cast<double>(samples.size());
    double mx = 0.0, my = 0.0;
    for (const auto& s : samples) {
        mx += std::log(s.w);
        my += std::log(s.error);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& s : samples) {
        const double dx = std::log(s.w) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(s.error) - my);
    }
    if (sxx == 0.0)
        throw error(errc::degenerate_fit, "all samples share one w");
    fit_result fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (const auto& s : samples)
        fit.residual =
            std::max(fit.residual, std::fabs(std::log(s.error) - (fit.intercept + fit.slope * std::log(s.w))));
    return fit;
}

struct rate_report {
    std::string kernel_name;
    std::string signal_name;
    std::string operator_label;
    std::vector<rate_sample> samples;
    /// Empty when the operator reproduced f exactly (degenerate fit).
    std::optional<double> fitted_slope;
    double fit_residual = 0.0;
    grid_spec grid;
};

namespace detail {

inline void require_increasing(std::span<const double> ws)
{
    if (ws.empty())
        throw error(errc::invalid_parameter, "need at least one w");
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (!(ws[i] > 0.0))
            throw error(errc::invalid_parameter, "w values must be positive");
        if (i > 0 && !(ws[i - 1] < ws[i]))
            throw error(errc::invalid_parameter, "w values must be strictly increasing");
    }
}

/// Uses the order recorded on the kernel if it covers r, else runs the check.
inline void require_certified(const kernel& chi, int r)
{
    if (auto c = chi.moment_order_certified(); c && *c >= r)
        return;
    if (r <= 1)
        return;
    if (!check_moment_condition(chi, r, 201, 1e-9).passed)
        throw error(errc::kernel_not_certified,
                    chi.name() + " does not satisfy the vanishing-moment condition for r=" + std::to_string(r));
}

} // namespace detail

/// sup-norm error for every w, plus the log-log slope when it is defined.
inline rate_report rate_sweep(const kernel& chi, const signal& f, const operator_tag& op,
                              std::span<const double> ws, const grid_spec& grid, const eval_options& opts = {})
{
    detail::require_increasing(ws);
    rate_report rep;
    rep.kernel_name = chi.name();
    rep.signal_name = f.name;
    rep.operator_label = op.label();
    rep.grid = grid;
    const auto xs = grid.points();
    for (double w : ws)
        rep.samples.push_back({w, sup_error(chi, f, op, w, xs, opts)});
    if (rep.samples.size() >= 3) {
        try {
            const auto fit = rate_fit(rep.samples);
            rep.fitted_slope = fit.slope;
            rep.fit_residual = fit.residual;
        } catch (const error& e) {
            if (e.code() != errc::degenerate_fit)
                throw;
        }
    }
    return rep;
}

struct saturation_report {
    std::string kernel_name;
    std::string signal_name;
    std::vector<double> ws;
    /// d(w) = max_x |w (S_w f - f)(x) - f'(x)/2|.
    std::vector<double> deviations;
    bool verdict = false;
};

/// Values at or below this count as exact zeros in the saturation verdict.
inline constexpr double saturation_zero_tol = 1e-10;

/// For a kernel with vanishing first moment, w (S_w f - f) -> f'/2 uniformly.
/// The verdict asks for d(w) to decrease along the sweep and to drop at least
/// fourfold from the first to the last w (a desk-scale reading of O(1/w)).
inline saturation_report saturation_probe(const kernel& chi, const signal& f, std::span<const double> ws,
                                          const grid_spec& grid, const eval_options& opts = {})
{
    detail::require_increasing(ws);
    detail::require_certified(chi, 2);
    if (f.derivative_count() < 2)
        throw error(errc::missing_derivatives, "saturation probe needs f' and f''");
    const auto xs = grid.points();
    const auto& df = f.derivative(1);
    saturation_report rep;
    rep.kernel_name = chi.name();
    rep.signal_name = f.name;
    rep.ws.assign(ws.begin(), ws.end());
    for (double w : ws) {
        const auto s = apply_batch(chi, f, operator_tag::kantorovich(), w, xs, opts);
        double d = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            d = std::max(d, std::fabs(w * (s[i] - f(xs[i])) - 0.5 * df(xs[i])));
        rep.deviations.push_back(d);
    }
    const auto& d = rep.deviations;
    if (*std::max_element(d.begin(), d.end()) <= saturation_zero_tol) {
        rep.verdict = true;
        return rep;
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < d.size(); ++i)
        decreasing = decreasing && d[i] < d[i - 1];
    rep.verdict = decreasing && d.size() >= 2 && d.back() <= d.front() / 4.0;
    return rep;
}

struct polynomial_image_result {
    bool passed = false;
    double max_deviation = 0.0;
    /// Ascending coefficients of sum_{j<r} w^-j/(j+1)! p^(j).
    std::vector<double> image;
};

inline std::vector<double> polynomial_derivative(std::span<const double> coeffs)
{
    std::vector<double> d;
    for (std::size_t i = 1; i < coeffs.size(); ++i)
        d.push_back(coeffs[i] * static_cast<double>(i));
    return d;
}

inline double polynomial_eval(std::span<const double> coeffs, double x)
{
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;)
        acc = acc * x + coeffs[i];
    return acc;
}

/// S_w maps polynomials of degree <= r-1 to sum_{j<r} w^-j/(j+1)! p^(j) when
/// chi has vanishing moments of orders 1..r-1.
inline polynomial_image_result polynomial_image_check(const kernel& chi, int r, std::vector<double> coeffs,
                                                      double w, std::span<const double> xs,
                                                      double tol = 1e-10, const eval_options& opts = {})
{
    while (coeffs.size() > 1 && coeffs.back() == 0.0)
        coeffs.pop_back();
    if (coeffs.empty())
        coeffs.push_back(0.0);
    const int degree = static_cast<int>(coeffs.size()) - 1;
    if (degree > r - 1)
        throw error(errc::degree_too_high,
                    "degree " + std::to_string(degree) + " exceeds r-1 = " + std::to_string(r - 1));
    detail::require_certified(chi, r);

    polynomial_image_result out;
    out.image.assign(coeffs.size(), 0.0);
    std::vector<double> deriv = coeffs;
    double scale = 1.0;
    for (int j = 0; j < r && !deriv.empty(); ++j) {
        scale /= (j + 1);
        for (std::size_t i = 0; i < deriv.size(); ++i)
            out.image[i] += scale * deriv[i];
        scale /= w;
        deriv = polynomial_derivative(deriv);
    }
    const auto p = signals::polynomial(coeffs);
    const auto values = apply_batch(chi, p, operator_tag::kantorovich(), w, xs, opts);
    for (std::size_t i = 0; i < xs.size(); ++i)
        out.max_deviation = std::max(out.max_deviation, std::fabs(values[i] - polynomial_eval(out.image, xs[i])));
    out.passed = out.max_deviation <= tol;
    return out;
}

struct gw_bound_entry {
    double w = 0.0;
    double sup_error = 0.0;
    double bound = 0.0;
};

struct gw_bound_result {
    bool passed = false;
    double absolute_moment = 0.0;
    std::vector<gw_bound_entry> entries;
};

/// ||G_w f - f|| <= ||f^(r)|| M_r(chi) / r! * w^-r + slack at each w.
inline gw_bound_result gw_bound_check(const kernel& chi, int r, const signal& f, std::span<const double> ws,
                                      std::span<const double> xs, double slack = 1e-10,
                                      const eval_options& opts = {})
{
    if (r < 1)
        throw error(errc::invalid_parameter, "r must be >= 1");
    detail::require_certified(chi, r);
    const auto fr = f.sup_bound(r);
    if (!fr || !std::isfinite(*fr))
        throw error(errc::missing_derivatives, f.name + " has no sup bound for derivative " + std::to_string(r));
    gw_bound_result out;
    out.absolute_moment = absolute_moment(chi, r);
    double factorial = 1.0;
    for (int i = 2; i <= r; ++i)
        factorial *= i;
    out.passed = true;
    for (double w : ws) {
        gw_bound_entry e;
        e.w = w;
        e.sup_error = sup_error(chi, f, operator_tag::generalized(), w, xs, opts);
        e.bound = *fr * out.absolute_moment / factorial * std::pow(w, -r);
        out.passed = out.passed && e.sup_error <= e.bound + slack;
        out.entries.push_back(e);
    }
    return out;
}

// ---- report emission ----

inline std::string format_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_rate_csv(std::ostream& os, std::span<const rate_report> reports)
{
    os << "kernel,signal,operator,w,sup_error\n";
    for (const auto& r : reports)
        for (const auto& s : r.samples)
            os << r.kernel_name << ',' << r.signal_name << ',' << r.operator_label << ',' << format_real(s.w)
               << ',' << format_real(s.error) << '\n';
}

inline void write_saturation_csv(std::ostream& os, const saturation_report& rep)
{
    os << "kernel,signal,w,saturation_deviation\n";
    for (std::size_t i = 0; i < rep.ws.size(); ++i)
        os << rep.kernel_name << ',' << rep.signal_name << ',' << format_real(rep.ws[i]) << ','
           << format_real(rep.deviations[i]) << '\n';
}

struct svg_series {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
};

/// Log-log line plot; non-positive values are skipped.
inline void write_loglog_svg(std::ostream& os, std::span<const svg_series> series, const std::string& title,
                             const std::string& y_label)
{
    constexpr double width = 640, height = 420, margin = 60;
    double lx0 = INFINITY, lx1 = -INFINITY, ly0 = INFINITY, ly1 = -INFINITY;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (s.xs[i] <= 0 || s.ys[i] <= 0)
                continue;
            lx0 = std::min(lx0, std::log10(s.xs[i]));
            lx1 = std::max(lx1, std::log10(s.xs[i]));
            ly0 = std::min(ly0, std::log10(s.ys[i]));
            ly1 = std::max(ly1, std::log10(s.ys[i]));
        }
    if (!(lx0 < lx1)) {
        lx0 -= 0.5;
        lx1 += 0.5;
    }
    if (!(ly0 < ly1)) {
        ly0 -= 0.5;
        ly1 += 0.5;
    }
    const auto px = [&](double x) { return margin + (std::log10(x) - lx0) / (lx1 - lx0) * (width - 2 * margin); };
    const auto py = [&](double y) {
        return height - margin - (std::log10(y) - ly0) / (ly1 - ly0) * (height - 2 * margin);
    };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
       << height - margin << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">w (log)</text>\n";
    os << "<text x=\"15\" y=\"" << height / 2 << "\" transform=\"rotate(-90 15," << height / 2
       << ")\" text-anchor=\"middle\">" << y_label << " (log)</text>\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = colors[si % 5];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < s.xs.size(); ++i)
            if (s.xs[i] > 0 && s.ys[i] > 0)
                os << format_real(px(s.xs[i])) << ',' << format_real(py(s.ys[i])) << ' ';
        os << "\"/>\n";
        os << "<text x=\"" << width - margin - 150 << "\" y=\"" << margin + 18 * si << "\" fill=\"" << color
           << "\">" << s.label << "</text>\n";
    }
    os << "</svg>\n";
}

} // namespace sampling
