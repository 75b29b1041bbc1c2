#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include <json.hpp>

#include "mpqp/errors.hpp"
#include "mpqp/explicit_solution.hpp"
#include "mpqp/qp_oracle.hpp"
#include "mpqp/tolerances.hpp"
#include "test_support.hpp"

using namespace mpqp;
using namespace mpqp_test;

TEST_CASE("multiplier map for P1 and the empty set") {
  const Problem p1 = make_p1();

  const AffineMap active = multipliers_for_active_set(p1, ActiveSet({0}));
  CHECK(active.F(0, 0) == doctest::Approx(1.0));   // λ*(x) = x
  CHECK(active.c[0] == doctest::Approx(0.0));

  const AffineMap none = multipliers_for_active_set(p1, ActiveSet());
  CHECK(none.out_dim() == 0);
}

TEST_CASE("multiplier map for P2 single active row") {
  const AffineMap map = multipliers_for_active_set(make_p2(), ActiveSet({0}));
  // λ₁*(x) = -(1 + x₁).
  CHECK(map.F(0, 0) == doctest::Approx(-1.0));
  CHECK(map.F(0, 1) == doctest::Approx(0.0));
  CHECK(map.c[0] == doctest::Approx(-1.0));
}

TEST_CASE("multiplier map rejects dependent active sets") {
  CHECK_THROWS_AS(multipliers_for_active_set(make_duplicated(), ActiveSet({0, 1})),
                  LicqViolated);
}

TEST_CASE("optimizer map composes through the multipliers") {
  const Problem p1 = make_p1();
  const AffineMap lam = multipliers_for_active_set(p1, ActiveSet({0}));
  const AffineMap z = optimizer_for_active_set(p1, ActiveSet({0}), lam);
  CHECK(z.F(0, 0) == doctest::Approx(1.0));  // z*(x) = x
  CHECK(z.c[0] == doctest::Approx(0.0));

  const AffineMap z_empty = optimizer_for_active_set(p1, ActiveSet(), AffineMap{Matrix(0, 1), {}});
  CHECK(z_empty.F(0, 0) == 0.0);
  CHECK(z_empty.c[0] == 0.0);

  const Problem p2 = make_p2();
  const AffineMap lam2 = multipliers_for_active_set(p2, ActiveSet({0}));
  const AffineMap z2 = optimizer_for_active_set(p2, ActiveSet({0}), lam2);
  // z*(x) = (1 + x₁, 0).
  CHECK(z2.F(0, 0) == doctest::Approx(1.0));
  CHECK(z2.F(1, 0) == doctest::Approx(0.0));
  CHECK(z2.c[0] == doctest::Approx(1.0));
  CHECK(z2.c[1] == doctest::Approx(0.0));
}

TEST_CASE("region polyhedra for P1 and P2") {
  const Problem p1 = make_p1();
  const AffineMap lam = multipliers_for_active_set(p1, ActiveSet({0}));
  const AffineMap z = optimizer_for_active_set(p1, ActiveSet({0}), lam);

  // Active region: λ*(x) = x >= 0, i.e. -x <= 0; no inactive rows.
  const Polyhedron active = region_polyhedron(p1, ActiveSet({0}), lam, z);
  REQUIRE(active.facets() == 1);
  CHECK(active.A(0, 0) == doctest::Approx(-1.0));
  CHECK(active.b[0] == doctest::Approx(0.0));

  // Empty set: primal feasibility of z = 0 gives x <= 0.
  const AffineMap lam0{Matrix(0, 1), {}};
  const AffineMap z0 = optimizer_for_active_set(p1, ActiveSet(), lam0);
  const Polyhedron inactive = region_polyhedron(p1, ActiveSet(), lam0, z0);
  REQUIRE(inactive.facets() == 1);
  CHECK(inactive.A(0, 0) == doctest::Approx(1.0));
  CHECK(inactive.b[0] == doctest::Approx(0.0));

  // P2 empty set: 0 <= 1 + x_i, normalized rows -x_i <= 1.
  const Problem p2 = make_p2();
  const AffineMap z0_2 = optimizer_for_active_set(p2, ActiveSet(), AffineMap{Matrix(0, 2), {}});
  const Polyhedron r2 = region_polyhedron(p2, ActiveSet(), AffineMap{Matrix(0, 2), {}}, z0_2);
  REQUIRE(r2.facets() == 2);
  CHECK(r2.A(0, 0) == doctest::Approx(-1.0));
  CHECK(r2.b[0] == doctest::Approx(1.0));
  CHECK(r2.A(1, 1) == doctest::Approx(-1.0));
  CHECK(r2.b[1] == doctest::Approx(1.0));
}

TEST_CASE("trivially satisfied region rows are dropped") {
  // Constraint z <= 1 with no parameter coupling: the inactive row of the
  // empty active set is 0·x <= 1 and must vanish from the region.
  const Problem p(Matrix{{1.0}}, Matrix{{1.0}}, Vector{1.0}, Matrix{{0.0}});
  const AffineMap lam{Matrix(0, 1), {}};
  const AffineMap z = optimizer_for_active_set(p, ActiveSet(), lam);
  const Polyhedron region = region_polyhedron(p, ActiveSet(), lam, z);
  CHECK(region.facets() == 0);

  const ExplicitSolution sol = enumerate_regions(p);
  REQUIRE(sol.regions.size() == 1);
  CHECK(sol.regions[0].active_set.empty());
}

TEST_CASE("value forms for P1 and P2 regions") {
  const Problem p1 = make_p1();
  const AffineMap lam = multipliers_for_active_set(p1, ActiveSet({0}));
  const AffineMap z = optimizer_for_active_set(p1, ActiveSet({0}), lam);
  const QuadraticForm vf = value_form_for_region(p1, z);
  CHECK(vf.Q(0, 0) == doctest::Approx(1.0));  // V = ½x²
  CHECK(vf.q[0] == doctest::Approx(0.0));
  CHECK(vf.r == doctest::Approx(0.0));

  const AffineMap z0 = optimizer_for_active_set(p1, ActiveSet(), AffineMap{Matrix(0, 1), {}});
  const QuadraticForm vf0 = value_form_for_region(p1, z0);
  CHECK(vf0.Q(0, 0) == 0.0);
  CHECK(vf0.q[0] == 0.0);
  CHECK(vf0.r == 0.0);

  const Problem p2 = make_p2();
  const AffineMap lam2 = multipliers_for_active_set(p2, ActiveSet({0}));
  const AffineMap z2 = optimizer_for_active_set(p2, ActiveSet({0}), lam2);
  const QuadraticForm vf2 = value_form_for_region(p2, z2);
  // V = ½(1+x₁)² = ½x₁² + x₁ + ½.
  CHECK(vf2.Q(0, 0) == doctest::Approx(1.0));
  CHECK(vf2.Q(0, 1) == doctest::Approx(0.0));
  CHECK(vf2.Q(1, 1) == doctest::Approx(0.0));
  CHECK(vf2.q[0] == doctest::Approx(1.0));
  CHECK(vf2.q[1] == doctest::Approx(0.0));
  CHECK(vf2.r == doctest::Approx(0.5));
}

TEST_CASE("P1 enumerates to its two hand-derived regions") {
  const ExplicitSolution sol = enumerate_regions(make_p1());
  REQUIRE(sol.regions.size() == 2);
  CHECK(sol.regions[0].active_set.empty());
  CHECK(sol.regions[1].active_set == ActiveSet({0}));
  CHECK(sol.adjacency.size() == 1);
  CHECK(sol.adjacency[0] == std::pair<std::size_t, std::size_t>{0, 1});
}

TEST_CASE("P2 enumerates to four regions with full adjacency") {
  const ExplicitSolution sol = enumerate_regions(make_p2());
  REQUIRE(sol.regions.size() == 4);

  std::set<std::vector<std::size_t>> seen;
  for (const auto& reg : sol.regions) seen.insert(reg.active_set.one_based());
  CHECK(seen == std::set<std::vector<std::size_t>>{{}, {1}, {2}, {1, 2}});

  // All pairs of closures meet (four edges plus the corner (-1,-1)).
  CHECK(sol.adjacency.size() == 6);
}

TEST_CASE("unconstrained problems produce the single empty region") {
  const Problem p(Matrix::identity(2), Matrix(0, 2), Vector{}, Matrix(0, 3));
  const ExplicitSolution sol = enumerate_regions(p);
  REQUIRE(sol.regions.size() == 1);
  CHECK(sol.regions[0].active_set.empty());
  CHECK(sol.regions[0].region.facets() == 0);
  CHECK(std::isinf(sol.regions[0].chebyshev_radius));
  CHECK(neighbors(sol).empty());
}

TEST_CASE("locate on P1") {
  const ExplicitSolution sol = enumerate_regions(make_p1());

  const LocateResult inside = locate(sol, {3.0});
  CHECK(sol.regions[inside.region_index].active_set == ActiveSet({0}));
  CHECK(inside.containment == Containment::Interior);

  // x = 0 sits in both closures; the tie-break picks the smaller active
  // set and flags the boundary.
  const LocateResult border = locate(sol, {0.0});
  CHECK(sol.regions[border.region_index].active_set.empty());
  CHECK(border.containment == Containment::Boundary);

  const LocateResult low = locate(sol, {-4.0});
  CHECK(sol.regions[low.region_index].active_set.empty());
  CHECK(low.containment == Containment::Interior);
}

TEST_CASE("locate agrees with the oracle active set at random points") {
  const Problem p1 = make_p1();
  const ExplicitSolution sol = enumerate_regions(p1);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x{dist(rng)};
    const LocateResult loc = locate(sol, x);
    if (loc.containment == Containment::Boundary) continue;
    const PrimalDualSolution oracle = solve_qp(p1, x);
    REQUIRE(oracle.status == SolveStatus::Optimal);
    CHECK(sol.regions[loc.region_index].active_set == oracle.active_set);
  }
}

TEST_CASE("locate reports parameters outside the feasible set") {
  const ExplicitSolution sol = enumerate_regions(make_p3());
  CHECK_THROWS_AS(locate(sol, {-2.0}), OutsideFeasibleSet);
}

TEST_CASE("region invariants: multipliers nonnegative at the center, maps consistent") {
  for (std::uint64_t seed : {2u, 5u, 9u, 13u}) {
    const Problem p = random_problem(seed);
    const ExplicitSolution sol = enumerate_regions(p);
    REQUIRE(!sol.regions.empty());
    for (const auto& reg : sol.regions) {
      CHECK(reg.chebyshev_radius > tol::dim);
      const Vector& c = reg.chebyshev_center;
      REQUIRE(all_finite(c));
      CHECK(reg.region.contains(c, tol::lp));

      const Vector lam = reg.lambda_map(c);
      for (double l : lam) CHECK(l >= -tol::dual_sign);

      // z_map must equal -H⁻¹G_Eᵀ λ_E as maps; spot-check at the center.
      const Vector z = reg.z_map(c);
      Vector z_from_lambda = zeros(p.num_vars());
      const auto& idx = reg.active_set.indices();
      for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t i = 0; i < p.num_vars(); ++i)
          z_from_lambda[i] -= p.h_inv_gt()(i, idx[a]) * lam[a];
      CHECK(inf_norm(z - z_from_lambda) <= 1e-9);

      // Value form and KKT residuals at the center.
      const double v_form = reg.value_form.value(c);
      const double v_oracle = value_at(p, c);
      CHECK(std::fabs(v_form - v_oracle) <= 1e-8);
      const KktResiduals res =
          kkt_residuals(p, c, z, reg.full_lambda(c, p.num_constraints()));
      CHECK(res.max() <= tol::kkt);
    }
  }
}

TEST_CASE("explicit solution reproduces the oracle at random interior points") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> dist(-4.0, 4.0);
  for (std::uint64_t seed : {4u, 7u, 21u}) {
    const Problem p = random_problem(seed);
    const ExplicitSolution sol = enumerate_regions(p);
    int compared = 0;
    for (int trial = 0; trial < 200 && compared < 60; ++trial) {
      Vector x(p.num_params());
      for (double& v : x) v = dist(rng);
      const PrimalDualSolution oracle = solve_qp(p, x);
      if (oracle.status != SolveStatus::Optimal) continue;
      LocateResult loc{};
      try {
        loc = locate(sol, x);
      } catch (const OutsideFeasibleSet&) {
        continue;  // boundary-band point; coverage is tested separately
      }
      if (loc.containment != Containment::Interior) continue;
      const CriticalRegion& reg = sol.regions[loc.region_index];
      CHECK(inf_norm(reg.z_map(x) - oracle.z_star) <= 1e-6);
      CHECK(inf_norm(reg.full_lambda(x, p.num_constraints()) - oracle.lambda_star) <= 1e-6);
      ++compared;
    }
    CHECK(compared >= 30);
  }
}

TEST_CASE("every solvable parameter lies in some region closure") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> dist(-4.0, 4.0);
  const Problem p = make_p3();
  const ExplicitSolution sol = enumerate_regions(p);
  for (int trial = 0; trial < 200; ++trial) {
    const Vector x{dist(rng)};
    if (solve_qp(p, x).status != SolveStatus::Optimal) continue;
    bool covered = false;
    for (const auto& reg : sol.regions) covered = covered || reg.region.contains(x, tol::lp);
    CHECK(covered);
  }
}

TEST_CASE("explicit-solution JSON carries the documented fields") {
  const ExplicitSolution sol = enumerate_regions(make_p1());
  const auto doc = nlohmann::json::parse(save_explicit_solution(sol));

  CHECK(doc.at("index_base") == 1);
  REQUIRE(doc.at("regions").size() == 2);
  const auto& unconstrained = doc.at("regions").at(0);
  CHECK(unconstrained.at("active_set").empty());
  CHECK(unconstrained.at("Q").at(0).at(0) == 0.0);
  const auto& active = doc.at("regions").at(1);
  CHECK(active.at("active_set").at(0) == 1);  // 1-based
  CHECK(active.at("F_lambda").at(0).at(0) == 1.0);
  CHECK(active.at("c_lambda").at(0) == 0.0);
  CHECK(active.at("F_z").at(0).at(0) == 1.0);
  CHECK(active.at("Q").at(0).at(0) == 1.0);
  CHECK(active.at("r") == 0.0);
  CHECK(active.at("chebyshev_radius").is_null());  // unbounded region
  CHECK(active.at("region_A").at(0).at(0) == -1.0);
  CHECK(active.at("region_b").at(0) == 0.0);
  REQUIRE(doc.at("adjacency").size() == 1);
  CHECK(doc.at("adjacency").at(0).at(0) == 0);
  CHECK(doc.at("adjacency").at(0).at(1) == 1);
}

TEST_CASE("exhaustive enumeration refuses oversized problems") {
  const std::size_t m = 25;
  Matrix g(m, 1), smat(m, 1);
  Vector w(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    g(i, 0) = 1.0 + 0.01 * static_cast<double>(i);
    smat(i, 0) = 1.0;
  }
  const Problem p(Matrix{{1.0}}, std::move(g), std::move(w), std::move(smat));
  CHECK_THROWS_AS(enumerate_regions(p), InvalidInput);
}

TEST_CASE("lower-dimensional candidates are skipped with reasons") {
  // P3's {1,2} candidate pins x to -1 (a lower-dimensional region) and its
  // G rows are dependent, so it is LICQ-skipped; {1} and {2} survive only
  // as lower-dimensional slivers or empty sets.
  const ExplicitSolution sol = enumerate_regions(make_p3());
  REQUIRE(sol.regions.size() == 1);
  CHECK(sol.regions[0].active_set.empty());
  CHECK(!sol.skipped.empty());
}
