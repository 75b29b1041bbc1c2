#ifndef MPQP_ERRORS_HPP_
#define MPQP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mpqp {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Matrix/vector shapes do not line up.
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// Input matrix is not symmetric within tolerance.
class NotSymmetric : public Error {
public:
  using Error::Error;
};

/// Cholesky pivot fell below the positive-definiteness threshold.
class NotPositiveDefinite : public Error {
public:
  using Error::Error;
};

/// Malformed or schema-violating problem document.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Active-constraint rows are linearly dependent.
class LicqViolated : public Error {
public:
  using Error::Error;
};

/// The Gram matrix of an active set failed to factorize even though the
/// rank test passed. Reported distinctly from LicqViolated so tolerance
/// disagreements between the two tests are visible.
class SingularGram : public Error {
public:
  using Error::Error;
};

/// Iterative solver exceeded its iteration cap.
class MaxIterations : public Error {
public:
  using Error::Error;
};

/// The QP has no feasible point at the requested parameter.
class InfeasibleParameter : public Error {
public:
  using Error::Error;
};

/// No critical region contains the requested parameter.
class OutsideFeasibleSet : public Error {
public:
  using Error::Error;
};

/// Parameter lies outside the given critical region.
class PointNotInRegion : public Error {
public:
  using Error::Error;
};

/// Parameter lies within the boundary band of a critical region.
class BoundaryPoint : public Error {
public:
  using Error::Error;
};

/// Supplied multipliers contradict the supplied active set.
class InconsistentActiveSet : public Error {
public:
  using Error::Error;
};

/// Two regions have disjoint closures.
class NoSharedBoundary : public Error {
public:
  using Error::Error;
};

/// Structurally invalid input (zero-normal constraint rows and similar).
class InvalidInput : public Error {
public:
  using Error::Error;
};

}  // namespace mpqp

#endif  // MPQP_ERRORS_HPP_
