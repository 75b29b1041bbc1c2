#ifndef MPQP_QP_ORACLE_HPP_
#define MPQP_QP_ORACLE_HPP_

/**
 * @file qp_oracle.hpp
 * @brief Fixed-parameter primal and dual QP solvers plus KKT residuals.
 *
 * These solvers are the ground truth the explicit parametric solution is
 * verified against. The primal solver is a textbook active-set method; it
 * terminates with an exact active set, which downstream modules consume
 * directly.
 */

#include "mpqp/active_set.hpp"
#include "mpqp/problem.hpp"

namespace mpqp {

enum class SolveStatus { Optimal, Infeasible };

struct PrimalDualSolution {
  SolveStatus status = SolveStatus::Infeasible;
  Vector z_star;         // s, optimizer
  Vector lambda_star;    // m, multipliers (zero on inactive constraints)
  ActiveSet active_set;  // constraints with |g_i| <= tol::act at the optimizer
  double objective = 0.0;
};

/// All four KKT residual norms; zero at an exact solution.
struct KktResiduals {
  double stationarity = 0.0;  // |H z + Gᵀλ|_inf
  double primal = 0.0;        // max(0, max_i g_i)
  double dual = 0.0;          // max(0, -min_i λ_i)
  double comp_slack = 0.0;    // max_i |λ_i g_i|

  double max() const;
};

/// Phase-1 feasibility: minimizes the worst constraint violation t over
/// (z, t) with t bounded below by -1. margin <= 0 certifies feasibility
/// and z is a usable starting point; margin = -1 means deep interior.
struct FeasibilityCheck {
  bool feasible = false;
  Vector z;
  double margin = 0.0;
};

FeasibilityCheck feasibility_margin(const Problem& p, const Vector& x);

/// Primal active-set solve of min ½ zᵀH z s.t. G z <= W + S x.
/// Throws MaxIterations if the working set cycles beyond 50·(m+s) steps.
PrimalDualSolution solve_qp(const Problem& p, const Vector& x);

struct DualSolution {
  bool bounded = false;  // an unbounded dual certifies primal infeasibility
  Vector lambda;         // m
  double value = 0.0;
};

/// Solves the dual max_{λ>=0} -½ λᵀG H⁻¹Gᵀ λ - λᵀ(W + S x) with an
/// NNLS-style active-set iteration on the sign bounds. Independent of the
/// primal path, so primal/dual agreement is a meaningful check.
DualSolution solve_dual_qp(const Problem& p, const Vector& x);

KktResiduals kkt_residuals(const Problem& p, const Vector& x, const Vector& z,
                           const Vector& lambda);

/// V(x); throws InfeasibleParameter when the constraints are empty at x.
double value_at(const Problem& p, const Vector& x);

}  // namespace mpqp

#endif  // MPQP_QP_ORACLE_HPP_
