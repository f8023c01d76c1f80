#pragma once

#include <stdexcept>
#include <string>

namespace turingrad {

// Domain errors map to CLI exit code 1, convergence errors to exit code 2.
enum class ErrorClass { Domain, Convergence };

class Error : public std::runtime_error {
public:
  Error(const std::string& what, ErrorClass cls)
      : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }
  virtual const char* kind() const noexcept = 0;

private:
  ErrorClass cls_;
};

#define TURINGRAD_DECLARE_ERROR(Name, Cls)                                 \
  class Name : public Error {                                              \
  public:                                                                  \
    explicit Name(const std::string& what) : Error(what, ErrorClass::Cls) {} \
    const char* kind() const noexcept override { return #Name; }           \
  };

TURINGRAD_DECLARE_ERROR(DomainError, Domain)
TURINGRAD_DECLARE_ERROR(NoTuringPoint, Domain)
TURINGRAD_DECLARE_ERROR(GeometricallyDouble, Domain)
TURINGRAD_DECLARE_ERROR(DegenerateGamma, Domain)
TURINGRAD_DECLARE_ERROR(GridTooCoarse, Domain)
TURINGRAD_DECLARE_ERROR(TailTooShort, Domain)
TURINGRAD_DECLARE_ERROR(ShapeMismatch, Domain)
TURINGRAD_DECLARE_ERROR(WindowTooSparse, Domain)
TURINGRAD_DECLARE_ERROR(ParseError, Domain)
TURINGRAD_DECLARE_ERROR(ValidationError, Domain)
TURINGRAD_DECLARE_ERROR(NoGroundState, Convergence)
TURINGRAD_DECLARE_ERROR(EigensolveFailure, Convergence)

#undef TURINGRAD_DECLARE_ERROR

class ConvergenceFailure : public Error {
public:
  ConvergenceFailure(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")",
              ErrorClass::Convergence),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }
  const char* kind() const noexcept override { return "ConvergenceFailure"; }

private:
  double residual_;
};

} // namespace turingrad
