#include "mpqp/value_gradient.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "mpqp/errors.hpp"
#include "mpqp/tolerances.hpp"

namespace mpqp {

namespace {

// -S_Eᵀ λ_E for the region's active rows.
Vector neg_selected_st_lambda(const Problem& p, const ActiveSet& E, const Vector& lambda_e) {
  Vector g = zeros(p.num_params());
  const auto& idx = E.indices();
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const double l = lambda_e[a];
    if (l == 0.0) continue;
    for (std::size_t j = 0; j < p.num_params(); ++j) g[j] -= p.S()(idx[a], j) * l;
  }
  return g;
}

}  // namespace

Vector gradient_from_multipliers(const Problem& p, const Vector& lambda_star) {
  if (lambda_star.size() != p.num_constraints())
    throw DimensionMismatch("gradient_from_multipliers: lambda dimension mismatch");
  for (double l : lambda_star)
    if (l < -tol::dual_sign)
      throw InvalidInput("gradient_from_multipliers: negative multiplier");
  Vector g = transpose_times(p.S(), lambda_star);
  for (double& v : g) v = (v == 0.0) ? 0.0 : -v;
  return g;
}

Vector gradient_region_closed_form(const Problem& p, const CriticalRegion& region,
                                   const Vector& x) {
  if (!region.region.contains(x, tol::lp))
    throw PointNotInRegion("gradient_region_closed_form: parameter outside the region");
  if (region.region.min_slack(x) <= tol::bnd)
    throw BoundaryPoint("gradient_region_closed_form: parameter on the region boundary");
  return neg_selected_st_lambda(p, region.active_set, region.lambda_map(x));
}

Vector gradient_generic(const GenericProblem& gp, const Vector& x, const Vector& z_star,
                        const Vector& lambda_star, const ActiveSet& E) {
  if (x.size() != gp.num_params) throw DimensionMismatch("gradient_generic: x dimension");
  if (z_star.size() != gp.num_vars) throw DimensionMismatch("gradient_generic: z dimension");
  if (lambda_star.size() != gp.num_constraints)
    throw DimensionMismatch("gradient_generic: lambda dimension");
  for (std::size_t i : E.indices())
    if (i >= gp.num_constraints)
      throw DimensionMismatch("gradient_generic: active index out of range");

  // Complementary slackness screen: λ must vanish off E, and λ_i·g_i must
  // vanish everywhere.
  for (std::size_t j : E.complement(gp.num_constraints))
    if (lambda_star[j] > tol::kkt)
      throw InconsistentActiveSet("gradient_generic: positive multiplier outside active set");
  const Vector gval = gp.g(z_star, x);
  if (gval.size() != gp.num_constraints)
    throw DimensionMismatch("gradient_generic: g evaluator output length");
  // Loose enough to admit z* known only to ~1e-6, tight enough to reject a
  // genuinely inactive constraint carrying a multiplier.
  const double cs_tol = 1e-5 * (1.0 + inf_norm(lambda_star));
  for (std::size_t i = 0; i < gval.size(); ++i)
    if (std::fabs(lambda_star[i] * gval[i]) > cs_tol)
      throw InconsistentActiveSet("gradient_generic: complementary slackness violated");

  Vector grad = gp.df_dx(z_star, x);
  if (grad.size() != gp.num_params)
    throw DimensionMismatch("gradient_generic: df_dx evaluator output length");
  if (!E.empty()) {
    const Matrix jac = gp.dg_dx(z_star, x);
    if (jac.rows() != gp.num_constraints || jac.cols() != gp.num_params)
      throw DimensionMismatch("gradient_generic: dg_dx evaluator output shape");
    for (std::size_t i : E.indices()) {
      const double l = lambda_star[i];
      if (l == 0.0) continue;
      for (std::size_t j = 0; j < gp.num_params; ++j) grad[j] += l * jac(i, j);
    }
  }
  return grad;
}

Vector finite_difference_gradient(const std::function<double(const Vector&)>& value_fn,
                                  const Vector& x, double step) {
  if (step <= 0.0) throw InvalidInput("finite_difference_gradient: step must be positive");
  Vector g(x.size());
  Vector probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double up = value_fn(probe);
    probe[i] = x[i] - step;
    const double down = value_fn(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

ContinuityReport check_gradient_continuity(const ExplicitSolution& sol,
                                           std::pair<std::size_t, std::size_t> pair,
                                           std::size_t samples, std::uint64_t seed) {
  const Problem& p = sol.problem;
  const std::size_t n = p.num_params();
  const CriticalRegion& ra = sol.regions.at(pair.first);
  const CriticalRegion& rb = sol.regions.at(pair.second);

  const Polyhedron shared = intersect(ra.region, rb.region);
  const ChebyshevResult base = chebyshev_center(shared);
  if (!base.feasible)
    throw NoSharedBoundary("check_gradient_continuity: region closures do not intersect");

  // Cross-region agreement requires LICQ on the shared boundary: the union
  // of the two active sets must have independent rows there. Corner-contact
  // pairs whose union is rank-deficient carry genuinely non-unique
  // multipliers and report zero usable samples.
  {
    std::vector<std::size_t> joint = ra.active_set.indices();
    for (std::size_t i : rb.active_set.indices())
      if (!ra.active_set.contains(i)) joint.push_back(i);
    std::sort(joint.begin(), joint.end());
    if (row_rank(p.G().select_rows(joint), tol::licq) != joint.size()) return {};
  }

  // Working-precision gate: multiplier maps with entries this large turn
  // machine-level placement error into discrepancies beyond cont
  // tolerance, so the pair cannot be measured in double precision.
  {
    double amp = 0.0;
    for (const CriticalRegion* r : {&ra, &rb}) {
      amp = std::max(amp, max_abs(r->lambda_map.F));
      amp = std::max(amp, inf_norm(r->lambda_map.c));
    }
    if (amp > 1e4) return {};
  }

  // On the shared set the multipliers of constraints active in only one of
  // the regions vanish. Collect those map rows; samples are projected onto
  // their zero set so ill-conditioned multiplier maps cannot amplify the
  // LP placement tolerance into a spurious discrepancy.
  Matrix zero_rows(ra.active_set.size() + rb.active_set.size(), n);
  Vector zero_offsets(zero_rows.rows());
  std::size_t n_zero = 0;
  const auto add_zero_rows = [&](const CriticalRegion& own, const CriticalRegion& other) {
    const auto& idx = own.active_set.indices();
    for (std::size_t a = 0; a < idx.size(); ++a) {
      if (other.active_set.contains(idx[a])) continue;
      for (std::size_t j = 0; j < n; ++j) zero_rows(n_zero, j) = own.lambda_map.F(a, j);
      zero_offsets[n_zero] = own.lambda_map.c[a];
      ++n_zero;
    }
  };
  add_zero_rows(ra, rb);
  add_zero_rows(rb, ra);

  Matrix L(n_zero, n);
  Vector L_c(n_zero);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < n_zero; ++i) {
    double nrm = 0.0;
    for (std::size_t j = 0; j < n; ++j) nrm = std::max(nrm, std::fabs(zero_rows(i, j)));
    if (nrm < 1e-12) {
      // A constant multiplier: if it is not the zero constant the shared
      // set carries no qualified point at all.
      if (std::fabs(zero_offsets[i]) > tol::cont) return {};
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) L(kept, j) = zero_rows(i, j);
    L_c[kept] = zero_offsets[i];
    ++kept;
  }

  const auto project_onto_zero_set = [&](Vector xs) -> std::optional<Vector> {
    if (kept == 0) return xs;
    Vector resid(kept, 0.0);
    for (std::size_t i = 0; i < kept; ++i) {
      resid[i] = L_c[i];
      for (std::size_t j = 0; j < n; ++j) resid[i] += L(i, j) * xs[j];
    }
    Matrix gram(kept, kept);
    for (std::size_t i = 0; i < kept; ++i)
      for (std::size_t j = 0; j < kept; ++j) {
        double v = 0.0;
        for (std::size_t col = 0; col < n; ++col) v += L(i, col) * L(j, col);
        gram(i, j) = v;
      }
    Vector y;
    try {
      y = cholesky_spd(gram).solve(resid);
    } catch (const NotPositiveDefinite&) {
      return std::nullopt;  // dependent zero rows; sample unusable
    }
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < kept; ++i) xs[j] -= L(i, j) * y[i];
    return xs;
  };

  // The shared set is typically lower-dimensional, so sample it by pushing
  // random linear objectives to vertices of a boxed copy and taking convex
  // combinations with the base point.
  Polyhedron boxed = shared;
  {
    Matrix box(2 * n, n);
    Vector box_b(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
      box(2 * j, j) = 1.0;
      box_b[2 * j] = base.center[j] + 5.0;
      box(2 * j + 1, j) = -1.0;
      box_b[2 * j + 1] = -base.center[j] + 5.0;
    }
    boxed = intersect(boxed, Polyhedron(std::move(box), std::move(box_b)));
  }

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> weight(0.0, 1.0);

  ContinuityReport report;
  std::size_t attempts = 0;
  const std::size_t max_attempts = 20 * samples + 20;
  while (report.samples_used < samples && attempts < max_attempts) {
    ++attempts;
    Vector xs;
    if (attempts == 1) {
      xs = base.center;
    } else {
      Vector dir(n);
      for (double& v : dir) v = unit(rng);
      const LpResult vertex = simplex_solve(dir, boxed);
      if (vertex.status != LpStatus::Optimal) continue;
      const double w = weight(rng);
      xs = w * vertex.x + (1.0 - w) * base.center;
    }
    const std::optional<Vector> projected = project_onto_zero_set(std::move(xs));
    if (!projected) continue;
    xs = *projected;
    // The projection must not have left the closures.
    if (ra.region.max_violation(xs) > 100.0 * tol::lp) continue;
    if (rb.region.max_violation(xs) > 100.0 * tol::lp) continue;
    // Gradients are only defined in the interior of the feasible set.
    if (feasibility_margin(p, xs).margin > -tol::bnd) continue;

    // The continuity claim assumes LICQ at the boundary point; corner
    // samples where the full active set is rank-deficient carry genuinely
    // non-unique multipliers and are excluded.
    const PrimalDualSolution oracle = solve_qp(p, xs);
    if (oracle.status != SolveStatus::Optimal) continue;
    if (row_rank(p.G().select_rows(oracle.active_set.indices()), tol::licq) !=
        oracle.active_set.size())
      continue;

    const Vector ga = neg_selected_st_lambda(p, ra.active_set, ra.lambda_map(xs));
    const Vector gb = neg_selected_st_lambda(p, rb.active_set, rb.lambda_map(xs));
    report.max_discrepancy = std::max(report.max_discrepancy, inf_norm(ga - gb));
    ++report.samples_used;
  }
  return report;
}

double duality_value_identity(const Problem& p, const Vector& x) {
  const PrimalDualSolution sol = solve_qp(p, x);
  if (sol.status != SolveStatus::Optimal)
    throw InfeasibleParameter("duality_value_identity: infeasible parameter");
  const Vector& lam = sol.lambda_star;
  const double quad = 0.5 * dot(lam, p.dual_hessian() * lam);
  const double lin = dot(lam, p.rhs(x));
  return std::fabs(sol.objective - (-quad - lin));
}

GradientResult evaluate_gradient(const ExplicitSolution& sol, const Vector& x,
                                 GradientRoute route) {
  const Problem& p = sol.problem;
  const LocateResult loc = locate(sol, x);  // throws OutsideFeasibleSet
  const CriticalRegion& region = sol.regions[loc.region_index];

  GradientResult out;
  out.route = route;
  out.x = x;
  out.region_index = loc.region_index;
  out.boundary = loc.containment == Containment::Boundary;

  switch (route) {
    case GradientRoute::RegionClosedForm:
      out.gradient = neg_selected_st_lambda(p, region.active_set, region.lambda_map(x));
      break;
    case GradientRoute::MultiplierFormula: {
      const PrimalDualSolution qp = solve_qp(p, x);
      if (qp.status != SolveStatus::Optimal)
        throw InfeasibleParameter("evaluate_gradient: infeasible parameter");
      out.gradient = gradient_from_multipliers(p, qp.lambda_star);
      break;
    }
    case GradientRoute::GenericFormula: {
      const PrimalDualSolution qp = solve_qp(p, x);
      if (qp.status != SolveStatus::Optimal)
        throw InfeasibleParameter("evaluate_gradient: infeasible parameter");
      const GenericProblem gp = make_generic(p);
      out.gradient = gradient_generic(gp, x, qp.z_star, qp.lambda_star, qp.active_set);
      break;
    }
    case GradientRoute::FiniteDifference:
      out.gradient = finite_difference_gradient(
          [&p](const Vector& xx) { return value_at(p, xx); }, x, tol::fd_step);
      break;
  }
  return out;
}

}  // namespace mpqp
