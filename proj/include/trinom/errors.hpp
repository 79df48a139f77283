#pragma once

#include <stdexcept>
#include <string>

namespace trinom {

/// Base of all library errors. `module()` names the originating component so
/// front ends can report where a failure came from.
class error : public std::runtime_error {
 public:
  error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Input rejected before any numerics ran (bad shapes, bad tags, bad files).
class validation_error : public error {
 public:
  using error::error;
};

/// Failure inside a numerical or exact computation on valid input.
class numerical_error : public error {
 public:
  using error::error;
};

#define TRINOM_DEFINE_ERROR(name, base, mod)                           \
  class name : public base {                                           \
   public:                                                             \
    explicit name(const std::string& what) : base(mod, what) {}        \
  };

TRINOM_DEFINE_ERROR(SingularMatrix, numerical_error, "intlinalg")
TRINOM_DEFINE_ERROR(SingularKappa, validation_error, "systems")
TRINOM_DEFINE_ERROR(BranchOutOfRange, validation_error, "systems")
TRINOM_DEFINE_ERROR(ZeroCoordinate, validation_error, "systems")
TRINOM_DEFINE_ERROR(PoleError, numerical_error, "gamma")
TRINOM_DEFINE_ERROR(DegeneratePairing, validation_error, "mellinbarnes")
TRINOM_DEFINE_ERROR(NonSimplePole, numerical_error, "mellinbarnes")
TRINOM_DEFINE_ERROR(PathSingular, numerical_error, "oracle")
TRINOM_DEFINE_ERROR(NoConvergence, numerical_error, "oracle")

#undef TRINOM_DEFINE_ERROR

}  // namespace trinom
