#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qes {

enum class ErrorCode {
  InvalidArgument,
  CouplingOutOfRange,
  ZeroCoupling,
  BadSector,
  WrongModel,
  NoPhysicalSolution,
  IllConditioned,
  DegenerateRoots,
  DegenerateAtomBranch,
  WindowExceeded,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::CouplingOutOfRange: return "CouplingOutOfRange";
    case ErrorCode::ZeroCoupling: return "ZeroCoupling";
    case ErrorCode::BadSector: return "BadSector";
    case ErrorCode::WrongModel: return "WrongModel";
    case ErrorCode::NoPhysicalSolution: return "NoPhysicalSolution";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::DegenerateRoots: return "DegenerateRoots";
    case ErrorCode::DegenerateAtomBranch: return "DegenerateAtomBranch";
    case ErrorCode::WindowExceeded: return "WindowExceeded";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qes
