#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zeno {

// Every numerical failure raised by the library carries one of these codes.
// The CLI prints name() and maps any zeno::Error to exit status 3.
enum class ErrorCode {
  NormalizationUnderflow,
  InvalidState,
  InvalidParameter,
  CurveSingularity,
  NoZenoRegime,
  SingularEndpoint,
  UnsupportedLambda,
  IntegrandSingular,
  EpsilonTooLarge,
  StepTooLarge,
  NoConvergence,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NormalizationUnderflow: return "NormalizationUnderflow";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::CurveSingularity: return "CurveSingularity";
    case ErrorCode::NoZenoRegime: return "NoZenoRegime";
    case ErrorCode::SingularEndpoint: return "SingularEndpoint";
    case ErrorCode::UnsupportedLambda: return "UnsupportedLambda";
    case ErrorCode::IntegrandSingular: return "IntegrandSingular";
    case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::NoConvergence: return "NoConvergence";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace zeno
