#include "beam/error.hpp"

namespace beam {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDomain: return "invalid-domain";
    case ErrorCode::TooFewPoints: return "too-few-points";
    case ErrorCode::GridTooSmall: return "grid-too-small";
    case ErrorCode::UnsupportedOrder: return "unsupported-order";
    case ErrorCode::BisectionFailure: return "bisection-failure";
    case ErrorCode::InfeasibleAlphas: return "infeasible-alphas";
    case ErrorCode::RankDeficientConstraints: return "rank-deficient-constraints";
    case ErrorCode::NonConvergence: return "non-convergence";
    case ErrorCode::InstabilityDetected: return "instability-detected";
    case ErrorCode::LengthMismatch: return "length-mismatch";
    case ErrorCode::IncompatibleSpec: return "incompatible-spec";
    case ErrorCode::InvalidConfig: return "invalid-config";
    case ErrorCode::DataFormat: return "data-format";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace beam
