#pragma once

#include <stdexcept>
#include <string>

namespace whisk {

enum class Errc {
  SelfLoop,
  DuplicateEdge,
  IndexOutOfBounds,
  NotALaplacian,
  DimensionMismatch,
  NotSymmetric,
  ConvergenceFailure,
  SingularGroundedLaplacian,
  SingularForNegativePower,
  NegativeEigenvalueForFractionalPower,
  TooLargeForOracle,
  NegativeEigenvalue,
  RootFindingFailure,
  SingularShift,
  NotAnMMatrix,
  SingularSubmatrix,
  InvalidArgument,
  ParseError,
};

const char* to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (and the CLI exit-code mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace whisk
