#pragma once

#include <stdexcept>
#include <string>

namespace visco {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define VISCO_DECLARE_ERROR(Name)      \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  };

VISCO_DECLARE_ERROR(DimensionMismatch)
VISCO_DECLARE_ERROR(SingularMatrix)
VISCO_DECLARE_ERROR(NotSPD)
VISCO_DECLARE_ERROR(DomainError)
VISCO_DECLARE_ERROR(DegenerateQ)
VISCO_DECLARE_ERROR(Unsupported)
VISCO_DECLARE_ERROR(InvalidConfig)
VISCO_DECLARE_ERROR(BoundaryMismatch)
VISCO_DECLARE_ERROR(Interpenetration)
VISCO_DECLARE_ERROR(LinearSolveFailure)
VISCO_DECLARE_ERROR(PicardDivergence)
VISCO_DECLARE_ERROR(MismatchedSampling)
VISCO_DECLARE_ERROR(RangeError)

#undef VISCO_DECLARE_ERROR

/// Config grammar violation; carries the 1-based line number (0 when not tied to a line).
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace visco
