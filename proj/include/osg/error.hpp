#pragma once

#include <stdexcept>
#include <string>

namespace osg {

enum class ErrorKind {
  InvalidArgument,
  InvalidIndex,
  CutoffTooSmall,
  UnreachableTolerance,
  NonFinite,
  BudgetExceeded,
  InfeasibleSqueeze,
  EmptyRegion,
  NotConverged,
  TruncationLeak,
  GridAliasing,
  Config,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace osg
