#ifndef MSA_ERRORS_HPP
#define MSA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace msa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A box or region is not contained in the ambient set it was paired with.
class ContainmentError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the domain where an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A disorder sample does not cover a site the operator needs.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// The requested volume exceeds a configured dense/solve budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Two subsystems that were required to be non-interacting are not.
class InteractionNonzeroError : public Error {
 public:
  using Error::Error;
};

/// Malformed or out-of-range run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// E lies within the resolvent cutoff of the spectrum. Callers usually treat
/// this as "E-resonant" rather than as a failure.
class ResonantEnergyError : public Error {
 public:
  ResonantEnergyError(const std::string& what, double margin, bool inner = false)
      : Error(what), margin_(margin), inner_(inner) {}

  double margin() const noexcept { return margin_; }
  /// True when the resonance is in the inner box of a resolvent-identity check.
  bool inner() const noexcept { return inner_; }

 private:
  double margin_;
  bool inner_;
};

}  // namespace msa

#endif  // MSA_ERRORS_HPP
