#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

#include "error.hpp"

namespace sampling {

/// Maclaurin series truncated after `order()` coefficients; coefficient i
/// multiplies v^i.
class truncated_series {
public:
    explicit truncated_series(std::size_t order) : coeffs_(order, 0.0) {}
    explicit truncated_series(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

    std::size_t order() const noexcept { return coeffs_.size(); }
    double operator[](std::size_t i) const { return coeffs_[i]; }
    double& operator[](std::size_t i) { return coeffs_[i]; }
    const std::vector<double>& coefficients() const noexcept { return coeffs_; }

    friend truncated_series operator*(const truncated_series& a, const truncated_series& b)
    {
        assert(a.order() == b.order());
        truncated_series out(a.order());
        for (std::size_t i = 0; i < a.order(); ++i)
            for (std::size_t j = 0; i + j < a.order(); ++j)
                out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return out;
    }

    truncated_series pow(unsigned exponent) const
    {
        truncated_series out(order());
        if (order() > 0)
            out.coeffs_[0] = 1.0;
        for (unsigned e = 0; e < exponent; ++e)
            out = out * *this;
        return out;
    }

    /// 1/s via b_0 = 1/a_0, b_n = -(sum_{i=1..n} a_i b_{n-i}) / a_0.
    truncated_series reciprocal() const
    {
        if (order() == 0)
            return *this;
        if (coeffs_[0] == 0.0)
            throw error(errc::invalid_parameter, "series reciprocal needs a nonzero constant term");
        truncated_series out(order());
        out.coeffs_[0] = 1.0 / coeffs_[0];
        for (std::size_t n = 1; n < order(); ++n) {
            double acc = 0.0;
            for (std::size_t i = 1; i <= n; ++i)
                acc += coeffs_[i] * out.coeffs_[n - i];
            out.coeffs_[n] = -acc / coeffs_[0];
        }
        return out;
    }

private:
    std::vector<double> coeffs_;
};

/// Series of sin(v/2)/(v/2) = sum_m (-1)^m (v/2)^{2m} / (2m+1)!.
inline truncated_series half_sinc_series(std::size_t order)
{
    truncated_series s(order);
    double term = 1.0; // (-1)^m / (2m+1)! / 4^m
    for (std::size_t m = 0; 2 * m < order; ++m) {
        s[2 * m] = term;
        term *= -1.0 / (4.0 * (2.0 * m + 2.0) * (2.0 * m + 3.0));
    }
    return s;
}

} // namespace sampling
