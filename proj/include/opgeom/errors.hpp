#pragma once

#include <stdexcept>
#include <string>

namespace opgeom {

/// Base of every error raised by the library. `code()` is the short
/// machine-readable tag the CLI prints on stderr.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

  /// True for failures caused by the numbers themselves (singular Gram,
  /// degenerate metric, ...) as opposed to malformed input.
  virtual bool numerical() const noexcept { return false; }

 private:
  std::string code_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
  bool numerical() const noexcept override { return true; }
};

#define OPGEOM_DEFINE_ERROR(Name, Base, Code)                    \
  class Name : public Base {                                    \
   public:                                                      \
    explicit Name(const std::string& what) : Base(Code, what) {} \
  };

OPGEOM_DEFINE_ERROR(InputError, Error, "E_INPUT")
OPGEOM_DEFINE_ERROR(DimensionError, Error, "E_DIMENSION")
OPGEOM_DEFINE_ERROR(DomainError, Error, "E_DOMAIN")
OPGEOM_DEFINE_ERROR(HermiticityError, Error, "E_HERMITICITY")
OPGEOM_DEFINE_ERROR(OrderTooLargeError, Error, "E_ORDER")
OPGEOM_DEFINE_ERROR(JacobiViolationError, Error, "E_JACOBI")
OPGEOM_DEFINE_ERROR(EvaluationError, Error, "E_EVALUATION")

OPGEOM_DEFINE_ERROR(SingularGramError, NumericalError, "E_SINGULAR_GRAM")
OPGEOM_DEFINE_ERROR(LinearDependenceError, NumericalError, "E_DEPENDENT")
OPGEOM_DEFINE_ERROR(SingularMetricError, NumericalError, "E_SINGULAR_METRIC")
OPGEOM_DEFINE_ERROR(NonSymmetricMetricError, NumericalError, "E_NONSYMMETRIC_METRIC")

OPGEOM_DEFINE_ERROR(StencilOutOfDomainError, NumericalError, "E_STENCIL")
OPGEOM_DEFINE_ERROR(PatchDomainError, NumericalError, "E_PATCH")
OPGEOM_DEFINE_ERROR(StiffnessError, NumericalError, "E_STIFF")

#undef OPGEOM_DEFINE_ERROR

}  // namespace opgeom
