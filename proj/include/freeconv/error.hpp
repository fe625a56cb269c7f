#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace freeconv {

enum class ErrorCode {
    NonPositiveWeight,
    MassNotOne,
    InvalidMeasure,
    OrderTooLarge,
    NTooLarge,
    OutOfRange,
    NotUpperHalfPlane,
    CauchyVanishes,
    InversionDiverged,
    NotCentered,
    FixedPointDiverged,
    EvaluatorFailed,
    ScheduleTooShort,
    NotNormalized,
    InvalidArgument,
    ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; the code tells callers what went wrong.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::optional<std::complex<double>> last_iterate = std::nullopt);

    ErrorCode code() const noexcept { return code_; }

    // Set for FixedPointDiverged / InversionDiverged: the iterate the solver stopped at.
    const std::optional<std::complex<double>>& last_iterate() const noexcept { return last_iterate_; }

private:
    ErrorCode code_;
    std::optional<std::complex<double>> last_iterate_;
};

}  // namespace freeconv
