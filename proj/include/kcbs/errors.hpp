#pragma once

#include <stdexcept>
#include <string>

namespace kcbs {

/// Base for every error raised by the library. Catch this to handle any
/// domain failure uniformly (the CLI maps subclasses onto exit codes).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two-mode unitary requested for a target with (numerically) no weight on
/// the acted modes.
class DegenerateTarget : public Error {
 public:
  using Error::Error;
};

/// Pair of observables that are not orthogonal, hence not jointly measurable.
class IncompatiblePair : public Error {
 public:
  using Error::Error;
};

/// A stage target leaks onto the mode that is supposed to stay fixed.
class ClosureFailure : public Error {
 public:
  using Error::Error;
};

class InvalidStage : public Error {
 public:
  using Error::Error;
};

class InvalidN : public Error {
 public:
  using Error::Error;
};

/// Detection probabilities that do not sum to one (broken pipeline).
class ProbabilityError : public Error {
 public:
  using Error::Error;
};

/// Postselection left no shots to estimate from.
class EmptyTally : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kcbs
