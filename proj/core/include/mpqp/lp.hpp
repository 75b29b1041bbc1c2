#ifndef MPQP_LP_HPP_
#define MPQP_LP_HPP_

/**
 * @file lp.hpp
 * @brief Minimal dense LP solver (two-phase simplex, Bland's rule) and the
 *        Chebyshev-center problem built on top of it.
 */

#include "mpqp/polyhedron.hpp"

namespace mpqp {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vector x;      // meaningful only when Optimal
  double value = 0.0;
};

/// Minimizes cᵀx over the polyhedron {A x <= b} with x free.
///
/// Standard-form conversion (variable splitting, slacks, artificials) is
/// handled internally; Bland's rule guarantees termination. Rows with zero
/// normals are rejected with InvalidInput.
LpResult simplex_solve(const Vector& c, const Polyhedron& P);

struct ChebyshevResult {
  bool feasible = false;
  Vector center;
  double radius = 0.0;  // +inf when the inscribed ball is unbounded
};

/// Largest ball inside P: maximizes r subject to A x + r·|A_i| <= b.
/// An empty P reports feasible=false; an unbounded radius reports +inf.
/// A polyhedron with no rows is all of Rⁿ (center 0, radius +inf).
ChebyshevResult chebyshev_center(const Polyhedron& P);

}  // namespace mpqp

#endif  // MPQP_LP_HPP_
