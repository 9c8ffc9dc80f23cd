#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sampling {

enum class errc {
    invalid_order,
    invalid_parameter,
    quadrature_nonconvergence,
    divergent_moment,
    truncation_infeasible,
    ill_conditioned_shifts,
    missing_derivatives,
    degenerate_fit,
    kernel_not_certified,
    degree_too_high,
    parse_error,
};

constexpr std::string_view to_string(errc code) noexcept
{
    switch (code) {
    case errc::invalid_order: return "invalid-order";
    case errc::invalid_parameter: return "invalid-parameter";
    case errc::quadrature_nonconvergence: return "quadrature-nonconvergence";
    case errc::divergent_moment: return "divergent-moment";
    case errc::truncation_infeasible: return "truncation-infeasible";
    case errc::ill_conditioned_shifts: return "ill-conditioned-shifts";
    case errc::missing_derivatives: return "missing-derivatives";
    case errc::degenerate_fit: return "degenerate-fit";
    case errc::kernel_not_certified: return "kernel-not-certified";
    case errc::degree_too_high: return "degree-too-high";
    case errc::parse_error: return "parse-error";
    }
    return "unknown";
}

/// Every failure raised by the library carries one of the codes above.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace sampling
