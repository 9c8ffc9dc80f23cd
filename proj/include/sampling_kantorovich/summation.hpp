#pragma once

#include <cmath>

namespace sampling {

/// Neumaier's variant of Kahan summation. Order of add() calls fixes the result
/// bit-for-bit, which the operator code relies on.
class compensated_sum {
public:
    compensated_sum() = default;
    explicit compensated_sum(double init) : sum_(init) {}

    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    compensated_sum& operator+=(double x) noexcept
    {
        add(x);
        return *this;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace sampling
