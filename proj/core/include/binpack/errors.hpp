#pragma once

#include <stdexcept>
#include <string>

namespace binpack {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Placement would push a bin load past capacity.
struct CapacityExceeded : Error {
  using Error::Error;
};

// Placement names a bin index that does not exist.
struct BadIndex : Error {
  using Error::Error;
};

// Text input (instance, distribution, config) failed to parse.
struct ParseError : Error {
  using Error::Error;
};

// A lookup met a size that is not part of the declared support.
struct UnknownSize : Error {
  using Error::Error;
};

// Configuration enumeration would exceed its count guard.
struct TooManyConfigurations : Error {
  using Error::Error;
};

// LP solve or column generation did not converge within its iteration caps.
struct IterationLimit : Error {
  using Error::Error;
};

// An exact-oracle call ran out of its node budget and the caller required a
// proven optimum (callers that can live with an incumbent read the
// proven_optimal flag instead).
struct BudgetExceeded : Error {
  using Error::Error;
};

// LP solve produced residuals beyond tolerance even after refactorization.
struct NumericalFailure : Error {
  using Error::Error;
};

// Offline plan does not match the history it is asked to index.
struct PlanMismatch : Error {
  using Error::Error;
};

// Arrival stream length disagrees with the declared horizon T.
struct HorizonMismatch : Error {
  using Error::Error;
};

}  // namespace binpack
