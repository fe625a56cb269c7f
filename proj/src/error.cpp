#include "freeconv/error.hpp"

namespace freeconv {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
        case ErrorCode::MassNotOne: return "MassNotOne";
        case ErrorCode::InvalidMeasure: return "InvalidMeasure";
        case ErrorCode::OrderTooLarge: return "OrderTooLarge";
        case ErrorCode::NTooLarge: return "NTooLarge";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NotUpperHalfPlane: return "NotUpperHalfPlane";
        case ErrorCode::CauchyVanishes: return "CauchyVanishes";
        case ErrorCode::InversionDiverged: return "InversionDiverged";
        case ErrorCode::NotCentered: return "NotCentered";
        case ErrorCode::FixedPointDiverged: return "FixedPointDiverged";
        case ErrorCode::EvaluatorFailed: return "EvaluatorFailed";
        case ErrorCode::ScheduleTooShort: return "ScheduleTooShort";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::complex<double>> last_iterate)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      last_iterate_(last_iterate) {}

}  // namespace freeconv
