#ifndef MPQP_POLYHEDRON_HPP_
#define MPQP_POLYHEDRON_HPP_

#include "mpqp/matrix.hpp"

namespace mpqp {

/// The set {x : A x <= b}. A polyhedron with zero rows is all of Rⁿ.
struct Polyhedron {
  Matrix A;  // k × n
  Vector b;  // k

  Polyhedron() = default;
  Polyhedron(Matrix A_in, Vector b_in);

  std::size_t facets() const { return A.rows(); }
  std::size_t dim() const { return A.cols(); }

  /// max_i (A_i x - b_i); -inf when there are no rows.
  double max_violation(const Vector& x) const;

  bool contains(const Vector& x, double tol) const { return max_violation(x) <= tol; }

  /// Smallest row-wise slack b_i - A_i x; +inf when there are no rows.
  /// With unit row normals this is the distance to the nearest facet.
  double min_slack(const Vector& x) const;
};

/// Returns a copy with every row scaled to a unit normal.
/// Throws InvalidInput on rows with (near-)zero normals.
Polyhedron normalized(const Polyhedron& p);

/// Stacks the rows of two polyhedra over the same ambient space.
Polyhedron intersect(const Polyhedron& p, const Polyhedron& q);

}  // namespace mpqp

#endif  // MPQP_POLYHEDRON_HPP_
