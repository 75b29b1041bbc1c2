#ifndef MPQP_VALUE_GRADIENT_HPP_
#define MPQP_VALUE_GRADIENT_HPP_

/**
 * @file value_gradient.hpp
 * @brief Gradient of the value function by every route the theory offers.
 *
 * For the parametric QP the gradient at parameter x is
 *
 *     ∇V(x) = -Sᵀ λ*(x),
 *
 * and per critical region -S_Eᵀ (G_E H⁻¹G_Eᵀ)⁻¹ (W_E + S_E x). For a
 * generic parametric convex problem with active set E,
 *
 *     ∇V(x) = [∂f/∂x]ᵀ + Σ_{i∈E} λ_i* [∂g_i/∂x]ᵀ,
 *
 * evaluated at (z*(x), x). A central-difference evaluator and a
 * cross-region continuity check provide independent verification.
 */

#include <cstdint>
#include <functional>
#include <optional>

#include "mpqp/explicit_solution.hpp"
#include "mpqp/qp_oracle.hpp"

namespace mpqp {

enum class GradientRoute { RegionClosedForm, MultiplierFormula, GenericFormula, FiniteDifference };

struct GradientResult {
  Vector gradient;
  GradientRoute route = GradientRoute::RegionClosedForm;
  Vector x;
  std::optional<std::size_t> region_index;
  bool boundary = false;  // x was within tol::bnd of a region facet
};

/// ∇V = -Sᵀλ*. Multipliers may dip tol::dual_sign below zero.
Vector gradient_from_multipliers(const Problem& p, const Vector& lambda_star);

/// Region closed form -S_Eᵀ λ*_E(x). Strict about membership: throws
/// PointNotInRegion outside the region and BoundaryPoint within tol::bnd
/// of a facet (the gradient is only defined on region interiors).
Vector gradient_region_closed_form(const Problem& p, const CriticalRegion& region,
                                   const Vector& x);

/// Generic formula from caller-supplied evaluators. Validates the inputs
/// against complementary slackness before trusting E: a multiplier above
/// tol::kkt on a constraint outside E, or a large λ_i·g_i product, throws
/// InconsistentActiveSet.
Vector gradient_generic(const GenericProblem& gp, const Vector& x, const Vector& z_star,
                        const Vector& lambda_star, const ActiveSet& E);

/// Central differences (f(x+h e_i) - f(x-h e_i)) / 2h.
Vector finite_difference_gradient(const std::function<double(const Vector&)>& value_fn,
                                  const Vector& x, double step);

struct ContinuityReport {
  std::size_t samples_used = 0;
  double max_discrepancy = 0.0;
};

/// Samples points on the shared boundary of two regions (inside the
/// interior of the feasible parameter set) and evaluates both regions'
/// closed-form gradients there. Throws NoSharedBoundary when the closures
/// do not intersect.
ContinuityReport check_gradient_continuity(const ExplicitSolution& sol,
                                           std::pair<std::size_t, std::size_t> pair,
                                           std::size_t samples, std::uint64_t seed = 0);

/// |V(x) - (-½λ*ᵀ G H⁻¹Gᵀ λ* - λ*ᵀ(W+Sx))|, the strong-duality identity
/// evaluated with the primal solver's multipliers.
double duality_value_identity(const Problem& p, const Vector& x);

/// Locates x and evaluates the requested route. Boundary points are
/// evaluated with the tie-break region's formula and flagged rather than
/// refused.
GradientResult evaluate_gradient(const ExplicitSolution& sol, const Vector& x,
                                 GradientRoute route);

}  // namespace mpqp

#endif  // MPQP_VALUE_GRADIENT_HPP_
