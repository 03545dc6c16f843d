#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace noon {

using complex = std::complex<double>;

// Tolerances shared across the library.
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kEqualityTolerance = 1e-10;
// A mode-number pair counts as populated above this probability.
inline constexpr double kDefaultSupportThreshold = 1e-9;
// Off-diagonal magnitudes below this are treated as absent coherence.
inline constexpr double kCoherenceFloor = 1e-12;

/// Invalid input: bad parameters, malformed files, violated preconditions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that cannot produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request that needs states above the representable cutoff.
class TruncationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace noon
