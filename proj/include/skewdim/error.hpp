#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace skewdim {

enum class ErrorCode {
  InvalidArgument,
  DetNotUnimodular,
  EigenvalueOnUnitCircle,
  RepeatedOrComplexEigenvalue,
  RootPolishDiverged,
  LambdaOnEigenvalueModulus,
  TruncationTooDeep,
  ArgumentOutOfRegime,
  ResourceLimit,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DetNotUnimodular: return "DetNotUnimodular";
    case ErrorCode::EigenvalueOnUnitCircle: return "EigenvalueOnUnitCircle";
    case ErrorCode::RepeatedOrComplexEigenvalue: return "RepeatedOrComplexEigenvalue";
    case ErrorCode::RootPolishDiverged: return "RootPolishDiverged";
    case ErrorCode::LambdaOnEigenvalueModulus: return "LambdaOnEigenvalueModulus";
    case ErrorCode::TruncationTooDeep: return "TruncationTooDeep";
    case ErrorCode::ArgumentOutOfRegime: return "ArgumentOutOfRegime";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace skewdim
