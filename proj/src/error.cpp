#include "torlab/error.hpp"

namespace torlab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::ChartTooLarge: return "chart-too-large";
    case ErrorCode::NonDifferentiable: return "non-differentiable-point";
    case ErrorCode::Unsupported: return "unsupported-operation";
    case ErrorCode::BudgetExceeded: return "budget-exceeded";
    case ErrorCode::DivergentIntegral: return "divergent-integral";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace torlab
