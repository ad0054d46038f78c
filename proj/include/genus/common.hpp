#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace genus {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative tolerance for length comparisons; constructions are additive
// over edge lengths so accumulation stays mild at desk scale.
inline constexpr double kRelTol = 1e-9;

inline bool approx_eq(double a, double b, double tol = kRelTol) {
  double scale = std::max({1.0, a < 0 ? -a : a, b < 0 ? -b : b});
  double diff = a - b;
  if (diff < 0) diff = -diff;
  return diff <= tol * scale;
}

inline bool approx_le(double a, double b, double tol = kRelTol) {
  return a <= b || approx_eq(a, b, tol);
}

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed inputs: bad rotations, subsets that are not subgraphs, ...
struct StructuralError : Error {
  using Error::Error;
};

// Explicit search / pair-count budget exceeded. Never silently degraded.
struct BudgetError : Error {
  using Error::Error;
};

// A certification that must hold by construction failed; indicates a bug.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace genus
