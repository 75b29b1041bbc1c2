#ifndef MPQP_TOLERANCES_HPP_
#define MPQP_TOLERANCES_HPP_

// All numeric tolerances used by the library, pinned in one place so every
// module agrees on what "active", "feasible" and "full-dimensional" mean.

namespace mpqp::tol {

/// Relative symmetry tolerance for matrices that must be symmetric.
inline constexpr double sym = 1e-10;

/// Cholesky pivot threshold, relative to the largest diagonal entry.
inline constexpr double pd = 1e-12;

/// Relative reconstruction tolerance for Cholesky factors.
inline constexpr double factor = 1e-10;

/// Relative residual tolerance for SPD solves.
inline constexpr double solve = 1e-10;

/// Feasibility tolerance for LP solutions.
inline constexpr double lp = 1e-9;

/// Chebyshev-radius threshold for calling a region full-dimensional.
inline constexpr double dim = 1e-7;

/// Absolute constraint-feasibility band g(z,x) <= feas.
inline constexpr double feas = 1e-8;

/// Residual band for declaring a constraint active.
inline constexpr double act = 1e-8;

/// Acceptable infinity-norm for KKT residuals at a solved point.
inline constexpr double kkt = 1e-7;

/// Acceptable primal/dual value gap.
inline constexpr double duality = 1e-6;

/// Multipliers may dip this far below zero before being an error.
inline constexpr double dual_sign = 1e-8;

/// Band around region facets inside which a point counts as Boundary.
inline constexpr double bnd = 1e-7;

/// Acceptable cross-region gradient discrepancy on shared boundaries.
inline constexpr double cont = 1e-7;

/// Relative pivot threshold for the numerical rank (LICQ) test.
inline constexpr double licq = 1e-9;

/// Central-difference step for finite-difference gradient checks.
inline constexpr double fd_step = 1e-5;

}  // namespace mpqp::tol

#endif  // MPQP_TOLERANCES_HPP_
