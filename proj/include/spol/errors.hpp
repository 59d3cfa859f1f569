#pragma once

#include <stdexcept>
#include <string>

/// Error taxonomy. Every failure mode of the library maps to one of these
/// types; the CLI surfaces the type name in machine-readable error reports.

namespace spol {

class Error : public std::runtime_error {
 public:
  Error(std::string type, const std::string& message)
      : std::runtime_error(message), type_(std::move(type)) {}
  /// Stable machine-readable error identifier.
  [[nodiscard]] const std::string& type() const noexcept { return type_; }

 private:
  std::string type_;
};

#define SPOL_ERROR_TYPE(Name)                                        \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

// numerics
SPOL_ERROR_TYPE(NoSignChange);
SPOL_ERROR_TYPE(NoConvergence);
SPOL_ERROR_TYPE(NonFinite);
SPOL_ERROR_TYPE(BadGrid);
// media
SPOL_ERROR_TYPE(BadFrequency);
SPOL_ERROR_TYPE(DegenerateDenominator);
SPOL_ERROR_TYPE(Unconfined);
SPOL_ERROR_TYPE(BadDispersion);
// kerr
SPOL_ERROR_TYPE(NegativeArgument);
SPOL_ERROR_TYPE(BadAtomicParams);
SPOL_ERROR_TYPE(BadGeometry);
// qsim
SPOL_ERROR_TYPE(TruncationTooSevere);
SPOL_ERROR_TYPE(NotNormalized);
SPOL_ERROR_TYPE(ZeroDensity);
SPOL_ERROR_TYPE(BadSeedConfig);
// cli / config
SPOL_ERROR_TYPE(BadConfig);

#undef SPOL_ERROR_TYPE

}  // namespace spol
