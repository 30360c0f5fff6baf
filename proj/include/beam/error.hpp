#pragma once

#include <stdexcept>
#include <string>

namespace beam {

enum class ErrorCode {
  InvalidDomain,
  TooFewPoints,
  GridTooSmall,
  UnsupportedOrder,
  BisectionFailure,
  InfeasibleAlphas,
  RankDeficientConstraints,
  NonConvergence,
  InstabilityDetected,
  LengthMismatch,
  IncompatibleSpec,
  InvalidConfig,
  DataFormat,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace beam
