#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace medsolve {

enum class ErrorKind {
  NotHermitian,
  NotPositiveSemidefinite,
  NotPositiveDefinite,
  IndexOutOfRange,
  ShapeMismatch,
  RankMismatch,
  ProfileMismatch,
  InvalidProfile,
  InvalidEnsemble,
  DegenerateDraw,
  MaxIterationsExceeded,
  NonPositiveIterate,
  SingularLinearSystem,
  PathBreakdown,
  SingularAverage,
  ParseError,
};

constexpr std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::ProfileMismatch: return "ProfileMismatch";
    case ErrorKind::InvalidProfile: return "InvalidProfile";
    case ErrorKind::InvalidEnsemble: return "InvalidEnsemble";
    case ErrorKind::DegenerateDraw: return "DegenerateDraw";
    case ErrorKind::MaxIterationsExceeded: return "MaxIterationsExceeded";
    case ErrorKind::NonPositiveIterate: return "NonPositiveIterate";
    case ErrorKind::SingularLinearSystem: return "SingularLinearSystem";
    case ErrorKind::PathBreakdown: return "PathBreakdown";
    case ErrorKind::SingularAverage: return "SingularAverage";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class MedError : public std::runtime_error {
 public:
  MedError(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + detail),
        kind_(kind),
        detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace medsolve
