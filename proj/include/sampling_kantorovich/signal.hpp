#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace sampling {

using real_function = std::function<double(double)>;

/// A sampled function f with optional derivatives f', f'', ..., an optional
/// antiderivative F (F' = f) and optional sup norms ||f^(j)||.
struct signal {
    std::string name;
    real_function f;
    /// derivatives[j - 1] is f^(j).
    std::vector<real_function> derivatives;
    real_function antiderivative;
    /// sup_bounds[j] is ||f^(j)||_inf, j = 0 being f itself.
    std::vector<double> sup_bounds;

    double operator()(double x) const { return f(x); }

    int derivative_count() const noexcept { return static_cast<int>(derivatives.size()); }

    /// f^(j); j = 0 returns f.
    const real_function& derivative(int j) const
    {
        if (j == 0)
            return f;
        if (j < 0 || j > derivative_count())
            throw error(errc::missing_derivatives,
                        name + " has no derivative of order " + std::to_string(j));
        return derivatives[j - 1];
    }

    std::optional<double> sup_bound(int j) const
    {
        if (j < 0 || j >= static_cast<int>(sup_bounds.size()))
            return std::nullopt;
        return sup_bounds[j];
    }

    /// f^(j) as a signal of its own. f^(j-1) serves as its antiderivative.
    signal derivative_signal(int j) const
    {
        if (j == 0)
            return *this;
        signal out;
        out.name = name + "^(" + std::to_string(j) + ")";
        out.f = derivative(j);
        out.derivatives.assign(derivatives.begin() + j, derivatives.end());
        out.antiderivative = derivative(j - 1);
        if (static_cast<int>(sup_bounds.size()) > j)
            out.sup_bounds.assign(sup_bounds.begin() + j, sup_bounds.end());
        return out;
    }

    /// g(x) = f(x - y).
    signal translated(double y) const
    {
        const auto shift = [y](const real_function& fn) -> real_function {
            if (!fn)
                return {};
            return [fn, y](double x) { return fn(x - y); };
        };
        signal out;
        out.name = name + "(x-" + std::to_string(y) + ")";
        out.f = shift(f);
        for (const auto& d : derivatives)
            out.derivatives.push_back(shift(d));
        out.antiderivative = shift(antiderivative);
        out.sup_bounds = sup_bounds;
        return out;
    }
};

namespace signals {

inline constexpr int catalog_derivative_depth = 8;

inline signal constant(double c)
{
    signal s;
    s.name = "const";
    s.f = [c](double) { return c; };
    s.antiderivative = [c](double x) { return c * x; };
    s.sup_bounds.push_back(std::fabs(c));
    for (int j = 1; j <= catalog_derivative_depth; ++j) {
        s.derivatives.push_back([](double) { return 0.0; });
        s.sup_bounds.push_back(0.0);
    }
    return s;
}

/// Polynomial sum_i coeffs[i] x^i (ascending powers). Sup bounds are only set
/// for the derivatives that vanish identically or are constant.
inline signal polynomial(std::vector<double> coeffs, std::string name = "poly")
{
    if (coeffs.empty())
        coeffs.push_back(0.0);
    const auto horner = [](const std::vector<double>& c) -> real_function {
        return [c](double x) {
            double acc = 0.0;
            for (std::size_t i = c.size(); i-- > 0;)
                acc = acc * x + c[i];
            return acc;
        };
    };
    const auto differentiate = [](const std::vector<double>& c) {
        std::vector<double> d;
        for (std::size_t i = 1; i < c.size(); ++i)
            d.push_back(c[i] * static_cast<double>(i));
        if (d.empty())
            d.push_back(0.0);
        return d;
    };
    signal s;
    s.name = std::move(name);
    s.f = horner(coeffs);
    std::vector<double> integral{0.0};
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        integral.push_back(coeffs[i] / static_cast<double>(i + 1));
    s.antiderivative = horner(integral);

    std::vector<std::vector<double>> chain{coeffs};
    const int depth = std::max<int>(catalog_derivative_depth, static_cast<int>(coeffs.size()));
    for (int j = 1; j <= depth; ++j) {
        chain.push_back(differentiate(chain.back()));
        s.derivatives.push_back(horner(chain.back()));
    }
    // Sup bounds are finite only for constant derivatives; the leading run of
    // unbounded ones is left as infinity.
    for (const auto& c : chain) {
        const bool is_const = std::all_of(c.begin() + 1, c.end(), [](double v) { return v == 0.0; });
        s.sup_bounds.push_back(is_const ? std::fabs(c[0]) : INFINITY);
    }
    return s;
}

inline signal affine(double slope, double intercept)
{
    auto s = polynomial({intercept, slope}, "affine");
    return s;
}

inline signal sine()
{
    signal s;
    s.name = "sin";
    s.f = [](double x) { return std::sin(x); };
    s.antiderivative = [](double x) { return -std::cos(x); };
    for (int j = 1; j <= catalog_derivative_depth; ++j) {
        switch (j % 4) {
        case 0: s.derivatives.push_back([](double x) { return std::sin(x); }); break;
        case 1: s.derivatives.push_back([](double x) { return std::cos(x); }); break;
        case 2: s.derivatives.push_back([](double x) { return -std::sin(x); }); break;
        default: s.derivatives.push_back([](double x) { return -std::cos(x); }); break;
        }
    }
    s.sup_bounds.assign(catalog_derivative_depth + 1, 1.0);
    return s;
}

inline signal cosine()
{
    signal s;
    s.name = "cos";
    s.f = [](double x) { return std::cos(x); };
    s.antiderivative = [](double x) { return std::sin(x); };
    for (int j = 1; j <= catalog_derivative_depth; ++j) {
        switch (j % 4) {
        case 0: s.derivatives.push_back([](double x) { return std::cos(x); }); break;
        case 1: s.derivatives.push_back([](double x) { return -std::sin(x); }); break;
        case 2: s.derivatives.push_back([](double x) { return -std::cos(x); }); break;
        default: s.derivatives.push_back([](double x) { return std::sin(x); }); break;
        }
    }
    s.sup_bounds.assign(catalog_derivative_depth + 1, 1.0);
    return s;
}

/// exp(-x^2) with derivatives through the third.
inline signal gaussian()
{
    signal s;
    s.name = "gaussian";
    s.f = [](double x) { return std::exp(-x * x); };
    s.antiderivative = [](double x) { return 0.5 * std::sqrt(std::numbers::pi) * std::erf(x); };
    s.derivatives.push_back([](double x) { return -2.0 * x * std::exp(-x * x); });
    s.derivatives.push_back([](double x) { return (4.0 * x * x - 2.0) * std::exp(-x * x); });
    s.derivatives.push_back([](double x) { return (12.0 * x - 8.0 * x * x * x) * std::exp(-x * x); });
    s.sup_bounds = {1.0, std::sqrt(2.0) * std::exp(-0.5), 2.0, 3.9035661455399020};
    return s;
}

/// Runge's function 1/(1 + 25 x^2) with derivatives through the third.
inline signal runge()
{
    constexpr double a = 25.0;
    signal s;
    s.name = "runge";
    s.f = [](double x) { return 1.0 / (1.0 + a * x * x); };
    s.antiderivative = [](double x) { return std::atan(5.0 * x) / 5.0; };
    s.derivatives.push_back([](double x) {
        const double d = 1.0 + a * x * x;
        return -2.0 * a * x / (d * d);
    });
    s.derivatives.push_back([](double x) {
        const double d = 1.0 + a * x * x;
        return (6.0 * a * a * x * x - 2.0 * a) / (d * d * d);
    });
    s.derivatives.push_back([](double x) {
        const double d = 1.0 + a * x * x;
        return 24.0 * a * a * x * (1.0 - a * x * x) / (d * d * d * d);
    });
    s.sup_bounds = {1.0, 3.2475952641916449, 2.0 * a, 583.56991051940163};
    return s;
}

/// Built-in catalog by name: const, affine, sin, cos, gaussian, runge. `const`
/// is f = 1 and `affine` is f = 2x + 1.
inline signal by_name(const std::string& name)
{
    if (name == "const")
        return constant(1.0);
    if (name == "affine")
        return affine(2.0, 1.0);
    if (name == "sin")
        return sine();
    if (name == "cos")
        return cosine();
    if (name == "gaussian")
        return gaussian();
    if (name == "runge")
        return runge();
    throw error(errc::invalid_parameter, "unknown signal '" + name + "'");
}

inline std::vector<std::string> catalog_names()
{
    return {"const", "affine", "sin", "cos", "gaussian", "runge"};
}

} // namespace signals
} // namespace sampling
