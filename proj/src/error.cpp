#include "cbal/error.hpp"

namespace cbal {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyOrSingleton: return "EmptyOrSingleton";
    case ErrorKind::NonpositiveBudget: return "NonpositiveBudget";
    case ErrorKind::NonfiniteBudget: return "NonfiniteBudget";
    case ErrorKind::InvalidEndowment: return "InvalidEndowment";
    case ErrorKind::KOutOfRange: return "KOutOfRange";
    case ErrorKind::WeightsNotMonotone: return "WeightsNotMonotone";
    case ErrorKind::WeightsNotNormalized: return "WeightsNotNormalized";
    case ErrorKind::AmountsMismatch: return "AmountsMismatch";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::MOutOfRange: return "MOutOfRange";
    case ErrorKind::PremiseViolated: return "PremiseViolated";
    case ErrorKind::BadGrid: return "BadGrid";
    case ErrorKind::SingleCrossingViolation: return "SingleCrossingViolation";
    case ErrorKind::InternalConsistency: return "InternalConsistency";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace cbal
