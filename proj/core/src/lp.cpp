#include "mpqp/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "mpqp/errors.hpp"
#include "mpqp/tolerances.hpp"

namespace mpqp {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-10;
constexpr double kFlatCostEps = 1e-7;
constexpr double kRadiusCap = 1e9;
constexpr std::size_t kMaxPivots = 20000;

// Dense tableau in canonical form: basic columns are unit vectors and the
// right-hand side stays nonnegative. Reduced costs are recomputed from the
// cost vector every iteration, which is cheap at these sizes and avoids
// drift in an explicit objective row.
struct Tableau {
  std::size_t nrows = 0;
  std::size_t ncols = 0;                 // variable columns, RHS stored separately
  std::vector<std::vector<double>> row;  // nrows × ncols
  Vector rhs;                            // nrows
  std::vector<std::size_t> basis;        // column basic in each row

  void pivot(std::size_t r, std::size_t col) {
    const double inv = 1.0 / row[r][col];
    for (double& v : row[r]) v *= inv;
    rhs[r] *= inv;
    row[r][col] = 1.0;  // kill roundoff on the pivot itself
    for (std::size_t i = 0; i < nrows; ++i) {
      if (i == r) continue;
      const double f = row[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < ncols; ++j) row[i][j] -= f * row[r][j];
      rhs[i] -= f * rhs[r];
      row[i][col] = 0.0;
      if (rhs[i] < 0.0 && rhs[i] > -1e-12) rhs[i] = 0.0;
    }
    basis[r] = col;
  }
};

enum class PhaseStatus { Optimal, Unbounded };

// Runs simplex iterations for the cost vector c. Columns with
// barred[j] == true never enter the basis (used to freeze artificials in
// phase 2). Bland's rule: smallest eligible entering column, and among
// ratio-test ties the row whose basic variable has the smallest index.
PhaseStatus run_simplex(Tableau& t, const Vector& c, const std::vector<bool>& barred) {
  // Columns whose reduced cost is barely negative but that have no usable
  // pivot row describe numerically flat rays, not genuine unboundedness;
  // they are set aside for the rest of the phase. Keeping them out for good
  // preserves Bland's no-repeat guarantee (the eligible set only shrinks)
  // at the price of at most a kFlatCostEps-level optimality drift.
  std::vector<bool> flat(t.ncols, false);
  for (std::size_t iter = 0; iter < kMaxPivots; ++iter) {
    // Reduced costs r_j = c_j - sum_i c_basis[i] * T[i][j].
    std::size_t entering = t.ncols;
    double entering_cost = 0.0;
    for (std::size_t j = 0; j < t.ncols; ++j) {
      if (barred[j] || flat[j]) continue;
      double rj = c[j];
      for (std::size_t i = 0; i < t.nrows; ++i) {
        const double cb = c[t.basis[i]];
        if (cb != 0.0) rj -= cb * t.row[i][j];
      }
      if (rj < -kCostEps) {
        entering = j;
        entering_cost = rj;
        break;  // Bland: first (smallest) improving column
      }
    }
    if (entering == t.ncols) return PhaseStatus::Optimal;

    std::size_t leave_row = t.nrows;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.nrows; ++i) {
      const double a = t.row[i][entering];
      if (a <= kPivotEps) continue;
      const double ratio = t.rhs[i] / a;
      if (ratio < best_ratio - kPivotEps ||
          (ratio < best_ratio + kPivotEps &&
           (leave_row == t.nrows || t.basis[i] < t.basis[leave_row]))) {
        best_ratio = ratio;
        leave_row = i;
      }
    }
    if (leave_row == t.nrows) {
      if (entering_cost > -kFlatCostEps) {
        flat[entering] = true;
        continue;
      }
      return PhaseStatus::Unbounded;
    }
    t.pivot(leave_row, entering);
  }
  throw MaxIterations("simplex: pivot cap exceeded");
}

LpResult solve_once(const Vector& c, const Polyhedron& P) {
  const std::size_t n = P.dim();
  const std::size_t k = P.facets();

  if (k == 0) {
    // No constraints: optimum exists only for a zero objective.
    bool zero = true;
    for (double v : c) zero = zero && v == 0.0;
    if (zero) return {LpStatus::Optimal, zeros(n), 0.0};
    return {LpStatus::Unbounded, {}, 0.0};
  }

  // Standard form: x = u - v with u, v >= 0 and one slack per row.
  // Rows with negative RHS are negated; those rows need an artificial.
  std::vector<std::size_t> art_rows;
  for (std::size_t i = 0; i < k; ++i)
    if (P.b[i] < 0.0) art_rows.push_back(i);

  const std::size_t n_art = art_rows.size();
  const std::size_t col_u = 0, col_v = n, col_s = 2 * n, col_a = 2 * n + k;
  const std::size_t ncols = 2 * n + k + n_art;

  Tableau t;
  t.nrows = k;
  t.ncols = ncols;
  t.row.assign(k, std::vector<double>(ncols, 0.0));
  t.rhs.assign(k, 0.0);
  t.basis.assign(k, 0);

  std::size_t art_seen = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double sign = P.b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      t.row[i][col_u + j] = sign * P.A(i, j);
      t.row[i][col_v + j] = -sign * P.A(i, j);
    }
    t.row[i][col_s + i] = sign;
    t.rhs[i] = sign * P.b[i];
    if (sign < 0.0) {
      t.row[i][col_a + art_seen] = 1.0;
      t.basis[i] = col_a + art_seen;
      ++art_seen;
    } else {
      t.basis[i] = col_s + i;
    }
  }

  std::vector<bool> barred(ncols, false);

  if (n_art > 0) {
    Vector phase1_cost(ncols, 0.0);
    for (std::size_t j = 0; j < n_art; ++j) phase1_cost[col_a + j] = 1.0;
    run_simplex(t, phase1_cost, barred);  // bounded below by zero

    double infeas = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      if (t.basis[i] >= col_a) infeas += t.rhs[i];
    if (infeas > tol::lp) return {LpStatus::Infeasible, {}, 0.0};

    // Pivot leftover zero-valued artificials out where possible; bar the
    // artificial columns from phase 2 either way.
    for (std::size_t i = 0; i < k; ++i) {
      if (t.basis[i] < col_a) continue;
      for (std::size_t j = 0; j < col_a; ++j) {
        if (std::fabs(t.row[i][j]) > kPivotEps) {
          t.pivot(i, j);
          break;
        }
      }
    }
    for (std::size_t j = col_a; j < ncols; ++j) barred[j] = true;
  }

  Vector phase2_cost(ncols, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    phase2_cost[col_u + j] = c[j];
    phase2_cost[col_v + j] = -c[j];
  }
  if (run_simplex(t, phase2_cost, barred) == PhaseStatus::Unbounded) {
    return {LpStatus::Unbounded, {}, 0.0};
  }

  Vector x(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t bj = t.basis[i];
    if (bj < n) {
      x[bj] += t.rhs[i];
    } else if (bj >= col_v && bj < col_s) {
      x[bj - col_v] -= t.rhs[i];
    }
  }
  return {LpStatus::Optimal, x, dot(c, x)};
}

}  // namespace

LpResult simplex_solve(const Vector& c, const Polyhedron& P) {
  const std::size_t n = P.dim();
  const std::size_t k = P.facets();
  if (c.size() != n) throw DimensionMismatch("simplex_solve: objective dimension mismatch");

  for (std::size_t i = 0; i < k; ++i) {
    double nrm = 0.0;
    for (std::size_t j = 0; j < n; ++j) nrm = std::max(nrm, std::fabs(P.A(i, j)));
    if (nrm < 1e-300) throw InvalidInput("simplex_solve: constraint row has zero normal");
  }

  try {
    return solve_once(c, P);
  } catch (const MaxIterations&) {
    // Heavily degenerate tableaus (stacks of near-identical rows) can stall
    // the pivot rules in floating point. Restart with a deterministic tiny
    // relaxation of each right-hand side: degeneracy breaks, any point
    // feasible for the relaxed rows violates the originals by well under
    // the lp tolerance, and a relaxed infeasibility certifies the original.
    Polyhedron relaxed = P;
    for (std::size_t i = 0; i < k; ++i)
      relaxed.b[i] += 1e-11 * static_cast<double>(i + 1) *
                      std::max(1.0, std::fabs(relaxed.b[i]));
    LpResult r = solve_once(c, relaxed);
    if (r.status == LpStatus::Optimal) r.value = dot(c, r.x);
    return r;
  }
}

ChebyshevResult chebyshev_center(const Polyhedron& P) {
  const std::size_t n = P.dim();
  if (P.facets() == 0) {
    return {true, zeros(n), std::numeric_limits<double>::infinity()};
  }

  const Polyhedron Pn = normalized(P);  // rejects zero-normal rows

  // Variables (x, r): maximize r subject to A x + r <= b (unit normals)
  // plus a large cap on r so the LP always has a finite optimum.
  Matrix A(Pn.facets() + 1, n + 1);
  Vector b(Pn.facets() + 1);
  for (std::size_t i = 0; i < Pn.facets(); ++i) {
    for (std::size_t j = 0; j < n; ++j) A(i, j) = Pn.A(i, j);
    A(i, n) = 1.0;
    b[i] = Pn.b[i];
  }
  A(Pn.facets(), n) = 1.0;
  b[Pn.facets()] = kRadiusCap;

  Vector c(n + 1, 0.0);
  c[n] = -1.0;

  const LpResult lp = simplex_solve(c, Polyhedron(std::move(A), std::move(b)));
  if (lp.status != LpStatus::Optimal) {
    // The radius LP is structurally bounded, so a non-optimal status means
    // numerical distress; that happens on sliver-thin sets whose opposing
    // rows nearly coincide. Fall back to pure feasibility: such a set has
    // zero radius anyway.
    const LpResult feas = simplex_solve(zeros(n), Pn);
    if (feas.status == LpStatus::Optimal) return {true, feas.x, 0.0};
    return {false, {}, 0.0};
  }

  const double radius = lp.x[n];
  if (radius < -tol::lp) return {false, {}, 0.0};

  Vector center(lp.x.begin(), lp.x.begin() + static_cast<std::ptrdiff_t>(n));
  if (radius >= kRadiusCap * (1.0 - 1e-6)) {
    return {true, std::move(center), std::numeric_limits<double>::infinity()};
  }
  return {true, std::move(center), std::max(radius, 0.0)};
}

}  // namespace mpqp
