#include "mpqp/explicit_solution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "mpqp/errors.hpp"
#include "mpqp/linalg.hpp"
#include "mpqp/tolerances.hpp"

namespace mpqp {

namespace {

using json = nlohmann::ordered_json;

// Rows that are numerically constant (zero normal) are either redundant or
// contradictory; below this threshold a normal counts as zero.
constexpr double kZeroNormal = 1e-10;

// Canonical empty polyhedron in n dimensions: x_1 <= -1 and -x_1 <= -1.
Polyhedron canonical_empty(std::size_t n) {
  Matrix A(2, n);
  A(0, 0) = 1.0;
  A(1, 0) = -1.0;
  return Polyhedron(std::move(A), Vector{-1.0, -1.0});
}

Polyhedron centered_box(std::size_t n, double radius) {
  Matrix A(2 * n, n);
  Vector b(2 * n, radius);
  for (std::size_t j = 0; j < n; ++j) {
    A(2 * j, j) = 1.0;
    A(2 * j + 1, j) = -1.0;
  }
  return Polyhedron(std::move(A), std::move(b));
}

// The raw Chebyshev center of an unbounded region sits near the radius cap
// of the interior LP.  Re-center inside the smallest origin-centered box
// that still holds a full-dimensional slice, so downstream consumers get a
// representative point at problem scale.
Vector representative_center(const Polyhedron& region, const Vector& fallback) {
  for (double r : {1e1, 1e2, 1e3, 1e4, 1e6, 1e8}) {
    const ChebyshevResult boxed = chebyshev_center(intersect(region, centered_box(region.dim(), r)));
    if (boxed.feasible && boxed.radius > tol::dim) return boxed.center;
  }
  return fallback;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j) == 0.0 ? 0.0 : m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (double x : v) out.push_back(x == 0.0 ? 0.0 : x);
  return out;
}

}  // namespace

Vector AffineMap::operator()(const Vector& x) const {
  if (F.rows() == 0) return {};
  Vector y = F * x;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += c[i];
  return y;
}

double QuadraticForm::value(const Vector& x) const {
  double v = r + dot(q, x);
  const Vector qx = Q * x;
  v += 0.5 * dot(x, qx);
  return v;
}

Vector QuadraticForm::gradient(const Vector& x) const {
  Vector g = Q * x;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += q[i];
  return g;
}

Vector CriticalRegion::full_lambda(const Vector& x, std::size_t m) const {
  Vector lam = zeros(m);
  const Vector lam_e = lambda_map(x);
  const auto& idx = active_set.indices();
  for (std::size_t a = 0; a < idx.size(); ++a) lam[idx[a]] = lam_e[a];
  return lam;
}

AffineMap multipliers_for_active_set(const Problem& p, const ActiveSet& E) {
  const std::size_t n = p.num_params();
  if (E.empty()) return {Matrix(0, n), {}};

  const Matrix G_E = p.G().select_rows(E.indices());
  if (row_rank(G_E, tol::licq) != E.size())
    throw LicqViolated("multipliers_for_active_set: active-constraint rows are dependent");

  Matrix gram(E.size(), E.size());
  const auto& idx = E.indices();
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) gram(a, b) = p.dual_hessian()(idx[a], idx[b]);

  CholeskyFactor chol;
  try {
    chol = cholesky_spd(gram);
  } catch (const NotPositiveDefinite&) {
    throw SingularGram(
        "multipliers_for_active_set: Gram matrix not factorizable despite passing the rank test");
  }

  // F_λ = -(G_E H⁻¹G_Eᵀ)⁻¹ S_E, c_λ = -(G_E H⁻¹G_Eᵀ)⁻¹ W_E.
  const Matrix S_E = p.S().select_rows(idx);
  const Vector W_E = select(p.W(), idx);
  Matrix F = chol.solve(S_E);
  Vector c = chol.solve(W_E);
  for (std::size_t i = 0; i < F.rows(); ++i) {
    for (std::size_t j = 0; j < F.cols(); ++j) F(i, j) = -F(i, j);
    c[i] = -c[i];
  }
  return {std::move(F), std::move(c)};
}

AffineMap optimizer_for_active_set(const Problem& p, const ActiveSet& E,
                                   const AffineMap& lambda_map) {
  const std::size_t s = p.num_vars();
  const std::size_t n = p.num_params();
  if (E.empty()) return {Matrix(s, n), zeros(s)};
  if (lambda_map.out_dim() != E.size())
    throw DimensionMismatch("optimizer_for_active_set: map/active-set size mismatch");

  // z* = -H⁻¹G_Eᵀ λ*_E(x): compose with the columns of K = H⁻¹Gᵀ.
  const Matrix& K = p.h_inv_gt();
  const auto& idx = E.indices();
  Matrix F(s, n);
  Vector c = zeros(s);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const double k = K(i, idx[a]);
      for (std::size_t j = 0; j < n; ++j) F(i, j) -= k * lambda_map.F(a, j);
      c[i] -= k * lambda_map.c[a];
    }
  }
  return {std::move(F), std::move(c)};
}

Polyhedron region_polyhedron(const Problem& p, const ActiveSet& E, const AffineMap& lambda_map,
                             const AffineMap& z_map) {
  const std::size_t n = p.num_params();
  Matrix rows(E.size() + (p.num_constraints() - E.size()), n);
  Vector rhs(rows.rows());
  std::size_t r = 0;

  // Dual feasibility: λ*_E(x) >= 0, written as -F_λ x <= c_λ.
  for (std::size_t a = 0; a < E.size(); ++a) {
    for (std::size_t j = 0; j < n; ++j) rows(r, j) = -lambda_map.F(a, j);
    rhs[r] = lambda_map.c[a];
    ++r;
  }

  // Primal feasibility of inactive rows at z*(x):
  // (G_j F_z - S_j) x <= W_j - G_j c_z.
  for (std::size_t jrow : E.complement(p.num_constraints())) {
    double gc = 0.0;
    for (std::size_t k = 0; k < p.num_vars(); ++k) gc += p.G()(jrow, k) * z_map.c[k];
    for (std::size_t j = 0; j < n; ++j) {
      double v = -p.S()(jrow, j);
      for (std::size_t k = 0; k < p.num_vars(); ++k) v += p.G()(jrow, k) * z_map.F(k, j);
      rows(r, j) = v;
    }
    rhs[r] = p.W()[jrow] - gc;
    ++r;
  }

  // Normalize, dropping trivially true zero rows; a trivially false zero
  // row makes the whole region empty.
  Matrix A(rows.rows(), n);
  Vector b(rows.rows());
  std::size_t kept = 0;
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    double nrm = 0.0;
    for (std::size_t j = 0; j < n; ++j) nrm += rows(i, j) * rows(i, j);
    nrm = std::sqrt(nrm);
    if (nrm <= kZeroNormal) {
      if (rhs[i] < -tol::lp) return canonical_empty(n);
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) A(kept, j) = rows(i, j) / nrm;
    b[kept] = rhs[i] / nrm;
    ++kept;
  }
  Matrix A_kept(kept, n);
  Vector b_kept(kept);
  for (std::size_t i = 0; i < kept; ++i) {
    for (std::size_t j = 0; j < n; ++j) A_kept(i, j) = A(i, j);
    b_kept[i] = b[i];
  }
  return Polyhedron(std::move(A_kept), std::move(b_kept));
}

QuadraticForm value_form_for_region(const Problem& p, const AffineMap& z_map) {
  const Matrix HFz = p.H() * z_map.F;
  QuadraticForm out;
  out.Q = z_map.F.transposed() * HFz;
  out.q = transpose_times(HFz, z_map.c);
  out.r = 0.5 * dot(z_map.c, p.H() * z_map.c);
  // Symmetrize away factored roundoff.
  for (std::size_t i = 0; i < out.Q.rows(); ++i)
    for (std::size_t j = i + 1; j < out.Q.cols(); ++j) {
      const double v = 0.5 * (out.Q(i, j) + out.Q(j, i));
      out.Q(i, j) = v;
      out.Q(j, i) = v;
    }
  return out;
}

ExplicitSolution enumerate_regions(const Problem& p) {
  const std::size_t m = p.num_constraints();
  const std::size_t s = p.num_vars();
  if (m > 24)
    throw InvalidInput("enumerate_regions: exhaustive enumeration is limited to m <= 24");

  ExplicitSolution sol{p, {}, {}, {}};

  const std::size_t max_card = std::min(m, s);
  std::vector<std::size_t> picked;

  // Depth-first subset enumeration emits candidates in lexicographic
  // order ({} before {1} before {1,2} before {2}).
  auto consider = [&](const ActiveSet& E) {
    AffineMap lambda_map;
    try {
      lambda_map = multipliers_for_active_set(p, E);
    } catch (const LicqViolated&) {
      sol.skipped.push_back({E, SkipReason::LicqViolated});
      return;
    } catch (const SingularGram&) {
      sol.skipped.push_back({E, SkipReason::SingularGram});
      return;
    }
    AffineMap z_map = optimizer_for_active_set(p, E, lambda_map);
    Polyhedron region = region_polyhedron(p, E, lambda_map, z_map);
    ChebyshevResult ball = chebyshev_center(region);
    if (!ball.feasible) {
      sol.skipped.push_back({E, SkipReason::EmptyRegion});
      return;
    }
    if (ball.radius <= tol::dim) {
      sol.skipped.push_back({E, SkipReason::LowerDimensional});
      return;
    }
    if (!std::isfinite(ball.radius)) ball.center = representative_center(region, ball.center);
    QuadraticForm vf = value_form_for_region(p, z_map);
    sol.regions.push_back({E, std::move(lambda_map), std::move(z_map), std::move(region),
                           std::move(vf), ball.center, ball.radius});
  };

  auto recurse = [&](auto&& self, std::size_t next) -> void {
    consider(ActiveSet(picked));
    if (picked.size() == max_card) return;
    for (std::size_t i = next; i < m; ++i) {
      picked.push_back(i);
      self(self, i + 1);
      picked.pop_back();
    }
  };
  recurse(recurse, 0);

  sol.adjacency = neighbors(sol);
  return sol;
}

LocateResult locate(const ExplicitSolution& sol, const Vector& x) {
  if (x.size() != sol.problem.num_params())
    throw DimensionMismatch("locate: parameter dimension mismatch");

  std::size_t best = sol.regions.size();
  for (std::size_t i = 0; i < sol.regions.size(); ++i) {
    if (!sol.regions[i].region.contains(x, tol::lp)) continue;
    if (best == sol.regions.size()) {
      best = i;
      continue;
    }
    // Tie-break: smallest cardinality, then lexicographic. Regions are
    // stored lexicographically, so only cardinality can re-order.
    if (sol.regions[i].active_set.size() < sol.regions[best].active_set.size()) best = i;
  }
  if (best == sol.regions.size())
    throw OutsideFeasibleSet("locate: no critical region contains this parameter");

  const double slack = sol.regions[best].region.min_slack(x);
  const Containment c = slack <= tol::bnd ? Containment::Boundary : Containment::Interior;
  return {best, c};
}

std::vector<std::pair<std::size_t, std::size_t>> neighbors(const ExplicitSolution& sol) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const std::size_t nreg = sol.regions.size();
  for (std::size_t i = 0; i < nreg; ++i) {
    for (std::size_t j = i + 1; j < nreg; ++j) {
      const Polyhedron both = intersect(sol.regions[i].region, sol.regions[j].region);
      const Vector c = zeros(both.dim());
      if (simplex_solve(c, both).status == LpStatus::Optimal) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

std::string save_explicit_solution(const ExplicitSolution& sol) {
  json doc;
  doc["index_base"] = 1;
  doc["s"] = sol.problem.num_vars();
  doc["m"] = sol.problem.num_constraints();
  doc["n"] = sol.problem.num_params();
  json regions = json::array();
  for (const auto& reg : sol.regions) {
    json r;
    r["active_set"] = reg.active_set.one_based();
    r["F_lambda"] = matrix_to_json(reg.lambda_map.F);
    r["c_lambda"] = vector_to_json(reg.lambda_map.c);
    r["F_z"] = matrix_to_json(reg.z_map.F);
    r["c_z"] = vector_to_json(reg.z_map.c);
    r["region_A"] = matrix_to_json(reg.region.A);
    r["region_b"] = vector_to_json(reg.region.b);
    r["Q"] = matrix_to_json(reg.value_form.Q);
    r["q"] = vector_to_json(reg.value_form.q);
    r["r"] = reg.value_form.r == 0.0 ? 0.0 : reg.value_form.r;
    r["chebyshev_center"] = vector_to_json(reg.chebyshev_center);
    if (std::isfinite(reg.chebyshev_radius)) {
      r["chebyshev_radius"] = reg.chebyshev_radius;
    } else {
      r["chebyshev_radius"] = nullptr;
    }
    regions.push_back(std::move(r));
  }
  doc["regions"] = std::move(regions);
  json adj = json::array();
  for (const auto& [i, j] : sol.adjacency) adj.push_back(json::array({i, j}));
  doc["adjacency"] = std::move(adj);
  return doc.dump(2) + "\n";
}

}  // namespace mpqp
