#include "whisk/error.hpp"

namespace whisk {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::IndexOutOfBounds: return "IndexOutOfBounds";
    case Errc::NotALaplacian: return "NotALaplacian";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::SingularGroundedLaplacian: return "SingularGroundedLaplacian";
    case Errc::SingularForNegativePower: return "SingularForNegativePower";
    case Errc::NegativeEigenvalueForFractionalPower:
      return "NegativeEigenvalueForFractionalPower";
    case Errc::TooLargeForOracle: return "TooLargeForOracle";
    case Errc::NegativeEigenvalue: return "NegativeEigenvalue";
    case Errc::RootFindingFailure: return "RootFindingFailure";
    case Errc::SingularShift: return "SingularShift";
    case Errc::NotAnMMatrix: return "NotAnMMatrix";
    case Errc::SingularSubmatrix: return "SingularSubmatrix";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace whisk
