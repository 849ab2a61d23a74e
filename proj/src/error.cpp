#include "heightlab/error.hpp"

namespace heightlab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Reducible: return "Reducible";
    case ErrorCode::NonMonic: return "NonMonic";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::UnsupportedRamification: return "UnsupportedRamification";
    case ErrorCode::OnSupport: return "OnSupport";
    case ErrorCode::AllFormsVanish: return "AllFormsVanish";
    case ErrorCode::ThresholdNotMet: return "ThresholdNotMet";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::SumCheckFailed: return "SumCheckFailed";
    case ErrorCode::GeneralPositionViolated: return "GeneralPositionViolated";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::EmptyDelta: return "EmptyDelta";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace heightlab
