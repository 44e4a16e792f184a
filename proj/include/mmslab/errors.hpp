#pragma once

#include <stdexcept>
#include <string>

namespace mmslab {

enum class ErrorKind {
  Schema,
  SizeGuard,
  ZeroMass,
  EmptySubset,
  InvalidCorrespondence,
  EmptySide,
  DoublingExhausted,
  ResolutionFloor,
  HypothesisUnmet,
  WrongSpaceKind,
  Internal,
};

/// Library-wide error; the CLI maps kinds onto process exit codes.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

  /// 1 = schema violation, 2 = size guard, 4 = other domain error.
  int exit_code() const noexcept {
    switch (kind_) {
      case ErrorKind::Schema: return 1;
      case ErrorKind::SizeGuard: return 2;
      default: return 4;
    }
  }

  static const char* kind_name(ErrorKind k) {
    switch (k) {
      case ErrorKind::Schema: return "Schema";
      case ErrorKind::SizeGuard: return "SizeGuard";
      case ErrorKind::ZeroMass: return "ZeroMass";
      case ErrorKind::EmptySubset: return "EmptySubset";
      case ErrorKind::InvalidCorrespondence: return "InvalidCorrespondence";
      case ErrorKind::EmptySide: return "EmptySide";
      case ErrorKind::DoublingExhausted: return "DoublingExhausted";
      case ErrorKind::ResolutionFloor: return "ResolutionFloor";
      case ErrorKind::HypothesisUnmet: return "HypothesisUnmet";
      case ErrorKind::WrongSpaceKind: return "WrongSpaceKind";
      case ErrorKind::Internal: return "Internal";
    }
    return "Unknown";
  }

private:
  ErrorKind kind_;
};

}  // namespace mmslab
