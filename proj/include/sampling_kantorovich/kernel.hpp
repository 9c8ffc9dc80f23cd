#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bspline.hpp"
#include "error.hpp"
#include "quadrature.hpp"

namespace sampling {

/// chi vanishes outside [lo, hi].
struct compact_support {
    double lo = 0.0;
    double hi = 0.0;
};

/// |chi(u)| <= constant * |u|^-order for |u| >= 1.
struct decay_support {
    double order = 0.0;
    double constant = 0.0;
};

using support = std::variant<compact_support, decay_support>;

enum class classical_family { fejer, vallee_poussin, sinc_product, jackson };

struct classical_spec {
    classical_family which = classical_family::fejer;
    int jackson_k = 1;
    double jackson_alpha = 1.0;
};

struct bspline_spec {
    int order = 1;
};

struct spline_term {
    double coef = 0.0;
    double shift = 0.0;
    int spline_order = 1;
};

struct combination_spec {
    int order = 1;
    std::vector<spline_term> terms;
};

struct custom_spec {};

/// How a kernel was constructed; drives serialization.
using kernel_source = std::variant<custom_spec, bspline_spec, classical_spec, combination_spec>;

/// An immutable sampling kernel chi with its support metadata. Copies share the
/// evaluation closure.
class kernel {
public:
    kernel(std::string name, std::function<double(double)> fn, support supp,
           std::vector<double> knots = {}, kernel_source source = custom_spec{})
        : name_(std::move(name)),
          fn_(std::make_shared<const std::function<double(double)>>(std::move(fn))),
          support_(supp),
          knots_(std::move(knots)),
          source_(std::move(source))
    {
        if (const auto* c = std::get_if<compact_support>(&support_)) {
            if (!(c->lo <= c->hi))
                throw error(errc::invalid_parameter, "compact support needs lo <= hi");
        } else {
            const auto& d = std::get<decay_support>(support_);
            if (!(d.order > 0.0) || !(d.constant >= 0.0))
                throw error(errc::invalid_parameter, "decay support needs order > 0, constant >= 0");
        }
    }

    double evaluate(double u) const
    {
        if (const auto* c = std::get_if<compact_support>(&support_))
            if (u < c->lo || u > c->hi)
                return 0.0;
        return (*fn_)(u);
    }
    double operator()(double u) const { return evaluate(u); }

    const std::string& name() const noexcept { return name_; }
    const support& support_info() const noexcept { return support_; }
    bool is_compact() const noexcept { return std::holds_alternative<compact_support>(support_); }
    std::span<const double> knots() const noexcept { return knots_; }
    const kernel_source& source() const noexcept { return source_; }
    std::optional<int> moment_order_certified() const noexcept { return certified_; }

    kernel renamed(std::string name) const
    {
        kernel out = *this;
        out.name_ = std::move(name);
        return out;
    }

    /// Copy carrying the highest order r for which the vanishing-moment check passed.
    kernel with_certified_order(int r) const
    {
        kernel out = *this;
        out.certified_ = r;
        return out;
    }

private:
    std::string name_;
    std::shared_ptr<const std::function<double(double)>> fn_;
    support support_;
    std::vector<double> knots_;
    kernel_source source_;
    std::optional<int> certified_;
};

/// The central B-spline M_n as a kernel with support [-n/2, n/2].
inline kernel make_bspline_kernel(int n)
{
    if (n < 1 || n > max_bspline_order)
        throw error(errc::invalid_order, "B-spline order must lie in [1, 12], got " + std::to_string(n));
    const double half = 0.5 * n;
    return kernel("bspline" + std::to_string(n), [n](double x) { return eval_bspline(n, x); },
                  compact_support{-half, half}, bspline_knots(n), bspline_spec{n});
}

namespace detail {

/// sin(t)/t with the removable singularity filled.
inline double sinc_unnormalized(double t)
{
    if (std::fabs(t) < 1e-6) {
        const double t2 = t * t;
        return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    }
    return std::sin(t) / t;
}

} // namespace detail

/// Unnormalized cardinal sine sin(t)/t; the B-spline transform is this at v/2.
inline double sinc_unnormalized(double t) { return detail::sinc_unnormalized(t); }

/// Normalized cardinal sine sin(pi t)/(pi t); used by the Jackson-type kernels.
inline double sinc_normalized(double t) { return detail::sinc_unnormalized(std::numbers::pi * t); }

/// c_k = [ integral over R of sinc^{2k}(u / (2 k pi alpha)) du ]^{-1}, with the
/// normalized sinc. After u = 2 k pi alpha t the integral is 2 k pi alpha * I_k,
/// I_k = int sinc^{2k}(t) dt. I_k is integrated unit cell by unit cell on
/// [0, T] (T integer). The tail beyond T is the mean of sin^{2k}, C(2k,k)/4^k,
/// integrated against (pi t)^{-2k}; the oscillating remainder of the tail is
/// bounded by (1 - C(2k,k)/4^k) * 2k / (2 pi^2) * T^{-2k-1} / pi^{2k} per side
/// (two integrations by parts), and T is chosen to push that below 1e-12.
inline double compute_jackson_norm(int k, double alpha)
{
    if (k < 1)
        throw error(errc::invalid_parameter, "Jackson kernel needs k >= 1");
    if (!(alpha >= 1.0))
        throw error(errc::invalid_parameter, "Jackson kernel needs alpha >= 1");
    const double pi = std::numbers::pi;
    const int s = 2 * k;
    double mean = 1.0; // C(2k, k) / 4^k
    for (int i = 1; i <= k; ++i)
        mean *= (k + i) / (4.0 * i);
    const double pi_s = std::pow(pi, s);
    const auto oscillating_bound = [&](double t) {
        return 2.0 * (1.0 - mean) * s / (2.0 * pi * pi) * std::pow(t, -s - 1) / pi_s;
    };
    int cells = 16;
    while (oscillating_bound(cells) > 1e-12) {
        cells *= 2;
        if (cells > (1 << 20))
            throw error(errc::quadrature_nonconvergence, "Jackson normalization tail too heavy");
    }
    const auto integrand = [s](double t) { return std::pow(sinc_normalized(t), s); };
    compensated_sum half_integral;
    quadrature_options opts;
    opts.abs_tol = 1e-10 / cells;
    for (int m = 0; m < cells; ++m)
        half_integral.add(integrate_adaptive(integrand, m, m + 1, opts).value);
    const double tail = mean / (pi_s * (s - 1) * std::pow(static_cast<double>(cells), s - 1));
    half_integral.add(tail);
    const double full = 2.0 * half_integral.value();
    return 1.0 / (2.0 * k * pi * alpha * full);
}

/// Classical band-limited kernels. Fejer, de la Vallee Poussin and the sinc
/// product decay like |x|^-2; the Jackson-type kernel J_k decays like |x|^-2k.
inline kernel make_classical_kernel(classical_spec spec)
{
    const double pi = std::numbers::pi;
    switch (spec.which) {
    case classical_family::fejer:
        // F(x) = 1/2 (sin(pi x/2) / (pi x/2))^2
        return kernel(
            "fejer",
            [pi](double x) {
                const double s = sinc_unnormalized(0.5 * pi * x);
                return 0.5 * s * s;
            },
            decay_support{2.0, 2.0 / (pi * pi)}, {}, spec);
    case classical_family::vallee_poussin:
        // V(x) = 3/(2 pi) sin(x/2) sin(3x/2) / (3x^2/4) = 3/(2 pi) sinc(x/2) sinc(3x/2)
        return kernel(
            "vallee_poussin",
            [pi](double x) {
                return 1.5 / pi * sinc_unnormalized(0.5 * x) * sinc_unnormalized(1.5 * x);
            },
            decay_support{2.0, 2.0 / pi}, {}, spec);
    case classical_family::sinc_product:
        // sin(pi x/2) sin(pi x) / (pi^2 x^2 / 2) = sinc(pi x/2) sinc(pi x)
        return kernel(
            "sinc_product",
            [pi](double x) { return sinc_unnormalized(0.5 * pi * x) * sinc_unnormalized(pi * x); },
            decay_support{2.0, 2.0 / (pi * pi)}, {}, spec);
    case classical_family::jackson: {
        const int k = spec.jackson_k;
        const double alpha = spec.jackson_alpha;
        const double ck = compute_jackson_norm(k, alpha);
        const double scale = 2.0 * k * alpha;
        return kernel(
            "jackson" + std::to_string(k),
            [ck, k, pi, alpha](double x) {
                return ck * std::pow(sinc_normalized(x / (2.0 * k * pi * alpha)), 2 * k);
            },
            decay_support{2.0 * k, ck * std::pow(scale, 2 * k)}, {}, spec);
    }
    }
    throw error(errc::invalid_parameter, "unknown classical kernel");
}

} // namespace sampling
