#pragma once

#include <stdexcept>
#include <string>

namespace ncrpg {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Shape or dimension mismatch between an argument and the manifold.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Operation not available on this manifold (e.g. exact exp on fixed-rank).
class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

// Logarithm requested outside the injectivity radius (or at its boundary).
class IllPosedLog : public Error {
 public:
  using Error::Error;
};

// Orthographic retraction hit a singular core matrix.
class RetractionSingularity : public Error {
 public:
  using Error::Error;
};

// Proximal subproblem has no usable minimizer (e.g. all entries thresholded).
class DegenerateProx : public Error {
 public:
  using Error::Error;
};

// Rank of a fixed-rank point fell below r.
class RankDropError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value (stepsize outside its admissible interval, ...).
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

// Scalar function evaluated outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Backtracking exhausted its shrink budget without sufficient decrease.
class StallError : public Error {
 public:
  using Error::Error;
};

// Solver-level failure (monotonicity violation and similar internal checks).
class SolverFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace ncrpg
