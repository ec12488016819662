#pragma once

#include <stdexcept>
#include <string>

namespace swbin {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidDistribution : Error {
  using Error::Error;
};

// A joint type puts mass where the reference model has none.
struct AbsoluteContinuityViolation : Error {
  using Error::Error;
};

// A conditioning symbol with positive marginal has an all-zero column.
struct DegenerateRow : Error {
  using Error::Error;
};

// A type touches a zero of the evaluation model; callers treat as +inf.
struct InfiniteEnergy : Error {
  using Error::Error;
};

struct OutOfRange : Error {
  using Error::Error;
};

// Single-point energy spectrum: the increasing-branch inverse does not exist.
struct DegenerateSpectrum : Error {
  using Error::Error;
};

struct BetaOutOfRange : Error {
  using Error::Error;
};

struct MemoryBudgetExceeded : Error {
  using Error::Error;
};

struct EmptyDilution : Error {
  using Error::Error;
};

}  // namespace swbin
