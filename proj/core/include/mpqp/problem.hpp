#ifndef MPQP_PROBLEM_HPP_
#define MPQP_PROBLEM_HPP_

/**
 * @file problem.hpp
 * @brief Data model for the parametric QP
 *
 *     V(x) = min_z  ½ zᵀH z   subject to  G z <= W + S x,
 *
 * with H symmetric positive definite, and for generic parametric convex
 * problems supplied through caller evaluators.
 *
 * The constraint residual is fixed library-wide as g(z,x) = G z - S x - W,
 * so feasibility means g <= 0 component-wise. Every module uses this
 * residual; a sign flip here would silently flip gradients downstream.
 */

#include <cstddef>
#include <functional>

#include "mpqp/linalg.hpp"
#include "mpqp/matrix.hpp"
#include "mpqp/tolerances.hpp"

namespace mpqp {

class Problem {
public:
  /// Validates shapes, finiteness, symmetry and positive definiteness of H.
  /// The Cholesky factor of H and the dual Hessian G H⁻¹ Gᵀ are cached.
  Problem(Matrix H, Matrix G, Vector W, Matrix S);

  std::size_t num_vars() const { return s_; }         // s
  std::size_t num_constraints() const { return m_; }  // m
  std::size_t num_params() const { return n_; }       // n

  const Matrix& H() const { return H_; }
  const Matrix& G() const { return G_; }
  const Vector& W() const { return W_; }
  const Matrix& S() const { return S_; }

  const CholeskyFactor& h_factor() const { return h_chol_; }

  /// K = H⁻¹ Gᵀ (s × m).
  const Matrix& h_inv_gt() const { return h_inv_gt_; }

  /// Dual Hessian G H⁻¹ Gᵀ (m × m, positive semidefinite).
  const Matrix& dual_hessian() const { return dual_hess_; }

  /// Constraint residual g(z, x) = G z - S x - W.
  Vector constraint_values(const Vector& z, const Vector& x) const;

  /// Right-hand side W + S x of the constraint system at parameter x.
  Vector rhs(const Vector& x) const;

  /// ½ zᵀ H z.
  double objective(const Vector& z) const;

private:
  std::size_t s_, m_, n_;
  Matrix H_, G_, S_;
  Vector W_;
  CholeskyFactor h_chol_;
  Matrix h_inv_gt_;
  Matrix dual_hess_;
};

/// True iff g(z, x) <= feas_tol component-wise.
bool is_feasible_point(const Problem& p, const Vector& x, const Vector& z,
                       double feas_tol = tol::feas);

/// Caller-supplied evaluators for a generic parametric convex problem
///     min_z f(z, x)  s.t.  g(z, x) <= 0.
/// df_dx returns ∂f/∂x as a column vector of length n; dg_dx returns the
/// m × n Jacobian of g with respect to x. Evaluators must be deterministic.
struct GenericProblem {
  std::size_t num_vars = 0;
  std::size_t num_constraints = 0;
  std::size_t num_params = 0;
  std::function<double(const Vector& z, const Vector& x)> f;
  std::function<Vector(const Vector& z, const Vector& x)> g;
  std::function<Vector(const Vector& z, const Vector& x)> df_dx;
  std::function<Matrix(const Vector& z, const Vector& x)> dg_dx;
};

/// Wraps a parametric QP in generic-problem evaluators:
/// f = ½ zᵀH z, g = G z - S x - W, ∂f/∂x = 0, ∂g/∂x = -S.
GenericProblem make_generic(const Problem& p);

}  // namespace mpqp

#endif  // MPQP_PROBLEM_HPP_
