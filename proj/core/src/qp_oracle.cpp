#include "mpqp/qp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpqp/errors.hpp"
#include "mpqp/lp.hpp"
#include "mpqp/tolerances.hpp"

namespace mpqp {

namespace {

// Gram matrix (G H⁻¹ Gᵀ) restricted to the rows/columns in `set`.
Matrix gram_submatrix(const Matrix& dual_hess, const std::vector<std::size_t>& set) {
  Matrix g(set.size(), set.size());
  for (std::size_t a = 0; a < set.size(); ++a)
    for (std::size_t b = 0; b < set.size(); ++b) g(a, b) = dual_hess(set[a], set[b]);
  return g;
}

// Multipliers of the equality-constrained subproblem
//   min ½ zᵀH z  s.t.  G_E z = (W + Sx)_E,
// i.e. λ_E = -(G_E H⁻¹ G_Eᵀ)⁻¹ (W + Sx)_E, and the matching optimizer
// z = -H⁻¹ G_Eᵀ λ_E. Throws NotPositiveDefinite when the Gram matrix of
// the working set is numerically singular.
struct EqpSolution {
  Vector lambda;  // |E|
  Vector z;       // s
};

EqpSolution solve_eqp(const Problem& p, const std::vector<std::size_t>& set, const Vector& rhs_x) {
  EqpSolution out;
  if (set.empty()) {
    out.z = zeros(p.num_vars());
    return out;
  }
  const Matrix gram = gram_submatrix(p.dual_hessian(), set);
  Vector b(set.size());
  for (std::size_t a = 0; a < set.size(); ++a) b[a] = -rhs_x[set[a]];
  out.lambda = cholesky_spd(gram).solve(b);

  out.z = zeros(p.num_vars());
  const Matrix& K = p.h_inv_gt();  // H⁻¹Gᵀ
  for (std::size_t a = 0; a < set.size(); ++a)
    for (std::size_t i = 0; i < p.num_vars(); ++i) out.z[i] -= K(i, set[a]) * out.lambda[a];
  return out;
}

ActiveSet active_from_residuals(const Problem& p, const Vector& z, const Vector& x) {
  const Vector g = p.constraint_values(z, x);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::fabs(g[i]) <= tol::act) idx.push_back(i);
  return ActiveSet(std::move(idx));
}

}  // namespace

double KktResiduals::max() const {
  return std::max(std::max(stationarity, primal), std::max(dual, comp_slack));
}

FeasibilityCheck feasibility_margin(const Problem& p, const Vector& x) {
  const std::size_t s = p.num_vars();
  const std::size_t m = p.num_constraints();
  if (x.size() != p.num_params())
    throw DimensionMismatch("feasibility_margin: x dimension mismatch");

  if (m == 0) return {true, zeros(s), -1.0};

  // Variables (z, t): minimize t s.t. G z - t·1 <= W + Sx, -t <= 1.
  const Vector rhs = p.rhs(x);
  Matrix A(m + 1, s + 1);
  Vector b(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < s; ++j) A(i, j) = p.G()(i, j);
    A(i, s) = -1.0;
    b[i] = rhs[i];
  }
  A(m, s) = -1.0;
  b[m] = 1.0;

  Vector c(s + 1, 0.0);
  c[s] = 1.0;

  const LpResult lp = simplex_solve(c, Polyhedron(std::move(A), std::move(b)));
  if (lp.status != LpStatus::Optimal)
    throw MaxIterations("feasibility_margin: phase-1 LP did not solve");

  const double margin = lp.x[s];
  Vector z(lp.x.begin(), lp.x.begin() + static_cast<std::ptrdiff_t>(s));
  return {margin <= tol::feas, std::move(z), margin};
}

PrimalDualSolution solve_qp(const Problem& p, const Vector& x) {
  const std::size_t s = p.num_vars();
  const std::size_t m = p.num_constraints();
  if (x.size() != p.num_params()) throw DimensionMismatch("solve_qp: x dimension mismatch");

  PrimalDualSolution sol;

  if (m == 0) {
    sol.status = SolveStatus::Optimal;
    sol.z_star = zeros(s);
    sol.lambda_star = {};
    sol.objective = 0.0;
    return sol;
  }

  const FeasibilityCheck phase1 = feasibility_margin(p, x);
  if (!phase1.feasible) {
    sol.status = SolveStatus::Infeasible;
    return sol;
  }

  const Vector rhs = p.rhs(x);
  Vector z = phase1.z;
  std::vector<std::size_t> work;  // working set, ascending
  Vector work_lambda;
  std::size_t last_added = m;            // m = none
  std::vector<bool> banned(m, false);    // rows whose insertion went singular

  const std::size_t max_iters = 50 * (m + s);
  std::size_t iter = 0;
  for (;; ++iter) {
    if (iter >= max_iters) throw MaxIterations("solve_qp: active-set iteration cap exceeded");

    EqpSolution eqp;
    try {
      eqp = solve_eqp(p, work, rhs);
    } catch (const NotPositiveDefinite&) {
      // The working set became numerically dependent, which can only follow
      // an insertion. Undo it and keep the row out until the set changes:
      // a dependent row cannot genuinely block motion along these facets.
      if (last_added == m) throw MaxIterations("solve_qp: dependent working set");
      work.erase(std::find(work.begin(), work.end(), last_added));
      banned[last_added] = true;
      last_added = m;
      continue;
    }

    Vector step = eqp.z - z;
    if (inf_norm(step) <= 1e-12 * (1.0 + inf_norm(z))) {
      // At the subproblem minimizer: optimal unless a multiplier is negative.
      double min_lambda = 0.0;
      std::size_t drop_pos = work.size();
      for (std::size_t a = 0; a < work.size(); ++a) {
        if (eqp.lambda[a] < min_lambda) {
          min_lambda = eqp.lambda[a];
          drop_pos = a;
        }
      }
      if (drop_pos == work.size() || min_lambda >= -tol::dual_sign) {
        z = eqp.z;
        work_lambda = eqp.lambda;
        break;
      }
      work.erase(work.begin() + static_cast<std::ptrdiff_t>(drop_pos));
      std::fill(banned.begin(), banned.end(), false);
      continue;
    }

    // Ratio test over constraints outside the working set.
    double alpha = 1.0;
    std::size_t blocker = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (banned[i]) continue;
      if (std::binary_search(work.begin(), work.end(), i)) continue;
      double gi_step = 0.0, gi_z = 0.0;
      for (std::size_t j = 0; j < s; ++j) {
        gi_step += p.G()(i, j) * step[j];
        gi_z += p.G()(i, j) * z[j];
      }
      if (gi_step <= 1e-12 * (1.0 + inf_norm(step))) continue;
      const double ratio = std::max(0.0, (rhs[i] - gi_z) / gi_step);
      if (ratio < alpha - 1e-12) {
        alpha = ratio;
        blocker = i;
      }
    }

    for (std::size_t j = 0; j < s; ++j) z[j] += alpha * step[j];
    if (blocker < m) {
      work.insert(std::lower_bound(work.begin(), work.end(), blocker), blocker);
      last_added = blocker;
      std::fill(banned.begin(), banned.end(), false);
    } else {
      // Full step: z equals the subproblem minimizer, loop re-checks λ.
      z = eqp.z;
    }
  }

  Vector lambda = zeros(m);
  for (std::size_t a = 0; a < work.size(); ++a)
    lambda[work[a]] = std::max(work_lambda[a], 0.0);

  // Polish: re-solve the equality subproblem on the residual active set.
  // This pins weakly active rows exactly and removes the O(feas_tol) drift
  // a phase-1 starting point can leave in the objective.
  ActiveSet active = active_from_residuals(p, z, x);
  if (row_rank(p.G().select_rows(active.indices()), tol::licq) == active.size()) {
    try {
      const EqpSolution polished = solve_eqp(p, active.indices(), rhs);
      bool ok = true;
      for (double l : polished.lambda) ok = ok && l >= -tol::dual_sign;
      if (ok) {
        const Vector g = p.constraint_values(polished.z, x);
        for (std::size_t j : active.complement(m)) ok = ok && g[j] <= tol::feas;
      }
      if (ok) {
        z = polished.z;
        lambda = zeros(m);
        const auto& idx = active.indices();
        for (std::size_t a = 0; a < idx.size(); ++a)
          lambda[idx[a]] = std::max(polished.lambda[a], 0.0);
        active = active_from_residuals(p, z, x);
      }
    } catch (const NotPositiveDefinite&) {
      // Tolerance disagreement between the rank test and the factorization;
      // the unpolished iterate is still a valid solution.
    }
  }

  sol.status = SolveStatus::Optimal;
  sol.z_star = z;
  sol.lambda_star = std::move(lambda);
  sol.active_set = std::move(active);
  sol.objective = p.objective(z);
  return sol;
}

DualSolution solve_dual_qp(const Problem& p, const Vector& x) {
  const std::size_t m = p.num_constraints();
  if (x.size() != p.num_params()) throw DimensionMismatch("solve_dual_qp: x dimension mismatch");

  if (m == 0) return {true, {}, 0.0};

  if (!feasibility_margin(p, x).feasible) {
    return {false, {}, std::numeric_limits<double>::infinity()};
  }

  // Minimize q(λ) = ½ λᵀM λ + dᵀλ over λ >= 0 where M = G H⁻¹Gᵀ.
  const Matrix& M = p.dual_hessian();
  const Vector d = p.rhs(x);

  Vector lambda = zeros(m);
  std::vector<std::size_t> free_set;   // ascending indices with λ_i > 0
  std::vector<bool> blocked(m, false);  // rows whose Gram row is dependent
  const double grad_tol = 1e-10 * std::max(1.0, std::max(inf_norm(d), max_abs(M)));

  const std::size_t max_outer = 50 * (m + p.num_vars()) + m;
  bool optimal = false;
  for (std::size_t outer = 0; outer < max_outer && !optimal; ++outer) {
    // Gradient of q at the current iterate (λ is zero off the free set).
    Vector grad = d;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j : free_set) grad[i] += M(i, j) * lambda[j];

    // Most negative gradient among bound variables enters the free set.
    std::size_t enter = m;
    double worst = -grad_tol;
    for (std::size_t i = 0; i < m; ++i) {
      if (blocked[i]) continue;
      if (std::binary_search(free_set.begin(), free_set.end(), i)) continue;
      if (grad[i] < worst) {
        worst = grad[i];
        enter = i;
      }
    }
    if (enter == m) {
      optimal = true;
      break;
    }

    auto candidate = free_set;
    candidate.insert(std::lower_bound(candidate.begin(), candidate.end(), enter), enter);

    // Inner loop: solve the unconstrained problem on the candidate set and
    // walk back onto the bound when components go negative. A dependent
    // Gram submatrix can only surface on the first solve, before λ moves.
    const Vector lambda_before = lambda;
    bool entered = true;
    for (;;) {
      Vector y;
      try {
        Vector b(candidate.size());
        for (std::size_t a = 0; a < candidate.size(); ++a) b[a] = -d[candidate[a]];
        y = cholesky_spd(gram_submatrix(M, candidate)).solve(b);
      } catch (const NotPositiveDefinite&) {
        // The entering row is dependent on the free rows; the objective
        // still improves along the Gram null direction p (p_enter = 1,
        // M_FF p_F = -M_F,enter) until a free component hits its bound.
        Vector rhs_dir(free_set.size());
        for (std::size_t a = 0; a < free_set.size(); ++a)
          rhs_dir[a] = -M(free_set[a], enter);
        Vector p_f;
        bool have_dir = true;
        try {
          p_f = cholesky_spd(gram_submatrix(M, free_set)).solve(rhs_dir);
        } catch (const NotPositiveDefinite&) {
          have_dir = false;  // free set itself degenerate; pin and move on
        }
        double t_max = std::numeric_limits<double>::infinity();
        std::size_t hit = free_set.size();
        if (have_dir) {
          for (std::size_t a = 0; a < free_set.size(); ++a) {
            if (p_f[a] < -1e-14) {
              const double t = lambda[free_set[a]] / (-p_f[a]);
              if (t < t_max) {
                t_max = t;
                hit = a;
              }
            }
          }
        }
        if (!have_dir || hit == free_set.size()) {
          // No blocking component: numerically treat the row as unusable.
          blocked[enter] = true;
          entered = false;
          break;
        }
        for (std::size_t a = 0; a < free_set.size(); ++a)
          lambda[free_set[a]] = std::max(0.0, lambda[free_set[a]] + t_max * p_f[a]);
        lambda[free_set[hit]] = 0.0;
        lambda[enter] = t_max;
        // Re-minimize over the surviving support (now independent again).
        std::vector<std::size_t> survivors;
        for (std::size_t i : candidate)
          if (lambda[i] > 0.0) survivors.push_back(i);
        candidate = std::move(survivors);
        continue;
      }

      bool all_positive = true;
      double alpha = 1.0;
      for (std::size_t a = 0; a < candidate.size(); ++a) {
        if (y[a] <= 0.0) {
          all_positive = false;
          const double la = lambda[candidate[a]];
          if (la - y[a] > 0.0) alpha = std::min(alpha, la / (la - y[a]));
        }
      }
      if (all_positive) {
        for (std::size_t a = 0; a < candidate.size(); ++a) lambda[candidate[a]] = y[a];
        break;
      }
      std::vector<std::size_t> next;
      for (std::size_t a = 0; a < candidate.size(); ++a) {
        const std::size_t i = candidate[a];
        lambda[i] += alpha * (y[a] - lambda[i]);
        if (lambda[i] > 1e-14) {
          next.push_back(i);
        } else {
          lambda[i] = 0.0;
        }
      }
      candidate = std::move(next);
    }
    if (entered && lambda == lambda_before) {
      // Marginal entry made no progress; pin it to avoid cycling.
      blocked[enter] = true;
      entered = false;
    }
    if (entered) {
      // λ moved: previously blocked rows may become usable again.
      std::fill(blocked.begin(), blocked.end(), false);
      free_set.clear();
      for (std::size_t i = 0; i < m; ++i)
        if (lambda[i] > 0.0) free_set.push_back(i);
    }
  }
  // A stall with every improving row blocked only happens without LICQ; the
  // iterate is still dual feasible, so report it rather than failing.

  const double value = -(0.5 * dot(lambda, p.dual_hessian() * lambda) + dot(d, lambda));
  return {true, std::move(lambda), value};
}

KktResiduals kkt_residuals(const Problem& p, const Vector& x, const Vector& z,
                           const Vector& lambda) {
  if (lambda.size() != p.num_constraints())
    throw DimensionMismatch("kkt_residuals: lambda dimension mismatch");
  const Vector g = p.constraint_values(z, x);

  KktResiduals r;
  Vector stat = p.H() * z;
  const Vector gt_lambda = transpose_times(p.G(), lambda);
  for (std::size_t i = 0; i < stat.size(); ++i) stat[i] += gt_lambda[i];
  r.stationarity = inf_norm(stat);

  for (std::size_t i = 0; i < g.size(); ++i) {
    r.primal = std::max(r.primal, g[i]);
    r.dual = std::max(r.dual, -lambda[i]);
    r.comp_slack = std::max(r.comp_slack, std::fabs(lambda[i] * g[i]));
  }
  r.primal = std::max(r.primal, 0.0);
  r.dual = std::max(r.dual, 0.0);
  return r;
}

double value_at(const Problem& p, const Vector& x) {
  const PrimalDualSolution sol = solve_qp(p, x);
  if (sol.status != SolveStatus::Optimal)
    throw InfeasibleParameter("value_at: no feasible point at this parameter");
  return sol.objective;
}

}  // namespace mpqp
