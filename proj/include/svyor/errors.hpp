#pragma once

#include <stdexcept>
#include <string>

namespace svyor {

// Base class for everything this library throws deliberately.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input: unreadable files, misaligned columns, impossible
// configuration values. Maps to exit code 2 in the command-line tool.
class InputError : public Error {
 public:
  using Error::Error;
};

// Numerical failure during estimation: singular solves, divergence,
// degenerate data. Maps to exit code 3 in the command-line tool.
class EstimationError : public Error {
 public:
  using Error::Error;
};

// Auxiliary variable cannot support the requested knot placement
// (e.g. constant z with interior knots requested).
class DegenerateAuxiliary : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

// The weighted Gram matrix of the calibration basis is numerically
// rank-deficient. Usually means too many knots for the sample at hand.
class SingularGram : public EstimationError {
 public:
  SingularGram(const std::string& what, double condition)
      : EstimationError(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class SingularJacobian : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

// Separation heuristic fired: the estimating equation has no finite root.
class Diverged : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

class NotConverged : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

// A contingency cell is empty; the odds ratio is undefined.
class ZeroCell : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

class DesignTooSmall : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

}  // namespace svyor
