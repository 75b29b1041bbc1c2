#ifndef MPQP_EXPLICIT_SOLUTION_HPP_
#define MPQP_EXPLICIT_SOLUTION_HPP_

/**
 * @file explicit_solution.hpp
 * @brief Explicit parametric solution of a strictly convex parametric QP.
 *
 * For an active set E satisfying LICQ, the multipliers and optimizer are
 * affine in the parameter,
 *
 *     λ*_E(x) = -(G_E H⁻¹ G_Eᵀ)⁻¹ (W_E + S_E x),
 *     z*(x)   = -H⁻¹ G_Eᵀ λ*_E(x),
 *
 * and are the optimal solution exactly on a polyhedral critical region
 * cut out by λ*_E(x) >= 0 and primal feasibility of the inactive rows.
 * On that region the value function is one quadratic form in x.
 *
 * Enumeration iterates candidate active sets exhaustively (exact at desk
 * scale), keeping those whose region is full-dimensional by the Chebyshev
 * radius test.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mpqp/active_set.hpp"
#include "mpqp/lp.hpp"
#include "mpqp/polyhedron.hpp"
#include "mpqp/problem.hpp"

namespace mpqp {

/// x ↦ F x + c.
struct AffineMap {
  Matrix F;  // out_dim × in_dim
  Vector c;  // out_dim

  std::size_t out_dim() const { return c.size(); }
  Vector operator()(const Vector& x) const;
};

/// V(x) = ½ xᵀQ x + qᵀx + r.
struct QuadraticForm {
  Matrix Q;
  Vector q;
  double r = 0.0;

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;  // Q x + q
};

struct CriticalRegion {
  ActiveSet active_set;
  AffineMap lambda_map;  // |E| × n
  AffineMap z_map;       // s × n
  Polyhedron region;     // parameter-space polyhedron, unit row normals
  QuadraticForm value_form;
  Vector chebyshev_center;
  double chebyshev_radius = 0.0;  // +inf on unbounded regions

  /// Multipliers scattered to a full m-vector (zeros off the active set).
  Vector full_lambda(const Vector& x, std::size_t m) const;
};

enum class SkipReason { LicqViolated, SingularGram, EmptyRegion, LowerDimensional };

struct SkippedCandidate {
  ActiveSet set;
  SkipReason reason;
};

struct ExplicitSolution {
  Problem problem;
  std::vector<CriticalRegion> regions;                        // lexicographic by active set
  std::vector<std::pair<std::size_t, std::size_t>> adjacency;  // region index pairs, i < j
  std::vector<SkippedCandidate> skipped;
};

/// λ*_E as an affine map of x. Requires LICQ on E (row rank of G_E equals
/// |E|); throws LicqViolated otherwise, or SingularGram when the Gram
/// matrix fails to factorize despite the rank test passing.
AffineMap multipliers_for_active_set(const Problem& p, const ActiveSet& E);

/// z* = -H⁻¹ G_Eᵀ λ*_E as an affine map of x; the zero map for E = ∅.
AffineMap optimizer_for_active_set(const Problem& p, const ActiveSet& E,
                                   const AffineMap& lambda_map);

/// The critical-region polyhedron: λ*_E(x) >= 0 and feasibility of every
/// inactive row at z*(x), rows normalized to unit normals. Trivially true
/// rows are dropped; a trivially false row yields a canonical empty
/// polyhedron.
Polyhedron region_polyhedron(const Problem& p, const ActiveSet& E, const AffineMap& lambda_map,
                             const AffineMap& z_map);

/// Value form restricted to the region: Q = F_zᵀH F_z, q = F_zᵀH c_z,
/// r = ½ c_zᵀH c_z.
QuadraticForm value_form_for_region(const Problem& p, const AffineMap& z_map);

/// Enumerates all full-dimensional critical regions (active sets up to
/// cardinality min(m, s)) and their adjacency.
ExplicitSolution enumerate_regions(const Problem& p);

enum class Containment { Interior, Boundary };

struct LocateResult {
  std::size_t region_index = 0;
  Containment containment = Containment::Interior;
};

/// Finds a region containing x within tol::lp. Ties resolve to the
/// smallest active-set cardinality, then lexicographic order. Boundary is
/// flagged when any region inequality is within tol::bnd of tight.
/// Throws OutsideFeasibleSet when no region contains x.
LocateResult locate(const ExplicitSolution& sol, const Vector& x);

/// Pairs of regions whose closures intersect (LP feasibility test).
std::vector<std::pair<std::size_t, std::size_t>> neighbors(const ExplicitSolution& sol);

/// JSON document with one entry per region (active_set is 1-based, region
/// indices in adjacency are 0-based array positions, chebyshev_radius is
/// null on unbounded regions).
std::string save_explicit_solution(const ExplicitSolution& sol);

}  // namespace mpqp

#endif  // MPQP_EXPLICIT_SOLUTION_HPP_
