#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mpqp/errors.hpp"
#include "mpqp/linalg.hpp"
#include "mpqp/lp.hpp"
#include "mpqp/matrix.hpp"
#include "mpqp/polyhedron.hpp"
#include "mpqp/tolerances.hpp"
#include "test_support.hpp"

using namespace mpqp;
using namespace mpqp_test;

TEST_CASE("matrix basics") {
  Matrix a{{1.0, 2.0}, {3.0, 4.0}};
  CHECK(a.rows() == 2);
  CHECK(a(1, 0) == 3.0);
  CHECK(a.transposed()(0, 1) == 3.0);

  const Vector v{1.0, 1.0};
  const Vector av = a * v;
  CHECK(av[0] == doctest::Approx(3.0));
  CHECK(av[1] == doctest::Approx(7.0));

  CHECK_THROWS_AS(a * Vector{1.0}, DimensionMismatch);
  CHECK_THROWS_AS((Matrix{{1.0}, {2.0, 3.0}}), DimensionMismatch);
}

TEST_CASE("cholesky of the identity is the identity") {
  const Matrix eye = Matrix::identity(2);
  const CholeskyFactor f = cholesky_spd(eye);
  CHECK(f.L == eye);
}

TEST_CASE("cholesky hand example [[4,2],[2,3]]") {
  const Matrix a{{4.0, 2.0}, {2.0, 3.0}};
  const CholeskyFactor f = cholesky_spd(a);
  CHECK(f.L(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.L(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.L(1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(f.L(0, 1) == 0.0);

  // Reconstruction by direct multiplication.
  const Matrix back = f.L * f.L.transposed();
  CHECK(max_abs(back - a) <= tol::factor * max_abs(a));
}

TEST_CASE("cholesky rejects indefinite and asymmetric input") {
  CHECK_THROWS_AS(cholesky_spd(Matrix{{1.0, 2.0}, {2.0, 1.0}}), NotPositiveDefinite);
  CHECK_THROWS_AS(cholesky_spd(Matrix{{1.0, 2.0}, {0.0, 1.0}}), NotSymmetric);
  CHECK_THROWS_AS(cholesky_spd(Matrix{{1.0, 2.0}}), DimensionMismatch);
}

TEST_CASE("cholesky reconstruction on random SPD matrices") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 1 + trial % 6;
    const Matrix a = random_spd(rng, dim, 0.1);
    const CholeskyFactor f = cholesky_spd(a);
    CHECK(max_abs(f.L * f.L.transposed() - a) <= tol::factor * std::max(1.0, max_abs(a)));
  }
}

TEST_CASE("solve_spd identity and scalar cases") {
  const Matrix b{{1.0, 2.0}, {3.0, 4.0}};
  CHECK(solve_spd(Matrix::identity(2), b) == b);

  const Matrix scalar = solve_spd(Matrix{{2.0}}, Matrix{{6.0}});
  CHECK(scalar(0, 0) == doctest::Approx(3.0));
}

TEST_CASE("solve_spd hand example against multiply-back") {
  const Matrix a{{4.0, 2.0}, {2.0, 3.0}};
  const Vector x = solve_spd(a, Vector{1.0, 0.0});
  CHECK(x[0] == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(x[1] == doctest::Approx(-0.25).epsilon(1e-12));
  const Vector back = a * x;
  CHECK(back[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(back[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("solve_spd recovers random solutions") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 1 + trial % 5;
    const Matrix a = random_spd(rng, dim, 0.1);
    const Matrix x0 = random_matrix(rng, dim, 2);
    const Matrix x = solve_spd(a, a * x0);
    CHECK(max_abs(x - x0) <= tol::solve * std::max(1.0, max_abs(a) * max_abs(x0)) * 100);
  }
}

TEST_CASE("row_rank on hand examples") {
  CHECK(row_rank(Matrix::identity(3), 1e-9) == 3);
  CHECK(row_rank(Matrix{{1.0, 2.0}, {2.0, 4.0}}, 1e-9) == 1);
  CHECK(row_rank(Matrix{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}, 1e-9) == 2);
  CHECK(row_rank(Matrix(2, 3), 1e-9) == 0);
  CHECK_THROWS_AS(row_rank(Matrix::identity(2), 0.0), InvalidInput);
}

TEST_CASE("polyhedron shape validation and zero-normal rejection") {
  CHECK_THROWS_AS(Polyhedron(Matrix::identity(2), Vector{1.0}), DimensionMismatch);
  const Polyhedron with_zero_row(Matrix{{0.0, 0.0}, {1.0, 0.0}}, Vector{1.0, 1.0});
  CHECK_THROWS_AS(normalized(with_zero_row), InvalidInput);
  CHECK_THROWS_AS(chebyshev_center(with_zero_row), InvalidInput);
  CHECK_THROWS_AS(simplex_solve(Vector{1.0, 0.0}, with_zero_row), InvalidInput);
}

namespace {

Polyhedron unit_box_2d() {
  return Polyhedron(Matrix{{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}},
                    Vector{1.0, 1.0, 1.0, 1.0});
}

}  // namespace

TEST_CASE("simplex on hand examples") {
  // min x over 0 <= x <= 1.
  const LpResult lo = simplex_solve(Vector{1.0}, Polyhedron(Matrix{{1.0}, {-1.0}}, {1.0, 0.0}));
  CHECK(lo.status == LpStatus::Optimal);
  CHECK(lo.x[0] == doctest::Approx(0.0));
  CHECK(lo.value == doctest::Approx(0.0));

  // min -x-y over [0,1]^2.
  const LpResult corner = simplex_solve(
      Vector{-1.0, -1.0},
      Polyhedron(Matrix{{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}, {1.0, 0.0, 1.0, 0.0}));
  CHECK(corner.status == LpStatus::Optimal);
  CHECK(corner.value == doctest::Approx(-2.0));
  CHECK(corner.x[0] == doctest::Approx(1.0));
  CHECK(corner.x[1] == doctest::Approx(1.0));

  // min x+2y over x,y >= 0, x+y >= 1: vertex enumeration agrees.
  const Polyhedron tri(Matrix{{-1.0, 0.0}, {0.0, -1.0}, {-1.0, -1.0}}, {0.0, 0.0, -1.0});
  const Vector c{1.0, 2.0};
  const LpResult lp = simplex_solve(c, tri);
  CHECK(lp.status == LpStatus::Optimal);
  const auto oracle = vertex_enumeration_minimize(c, tri);
  REQUIRE(oracle.has_value());
  CHECK(lp.value == doctest::Approx(oracle->second).epsilon(1e-9));
  CHECK(lp.value == doctest::Approx(1.0));
  CHECK(lp.x[0] == doctest::Approx(1.0));
  CHECK(lp.x[1] == doctest::Approx(0.0));
}

TEST_CASE("simplex detects infeasible and unbounded problems") {
  // x <= 0 and x >= 1.
  const LpResult bad = simplex_solve(Vector{1.0}, Polyhedron(Matrix{{1.0}, {-1.0}}, {0.0, -1.0}));
  CHECK(bad.status == LpStatus::Infeasible);

  // min -x with only x >= 0.
  const LpResult unb = simplex_solve(Vector{-1.0}, Polyhedron(Matrix{{-1.0}}, {0.0}));
  CHECK(unb.status == LpStatus::Unbounded);
}

TEST_CASE("simplex matches vertex enumeration on random bounded polyhedra") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::size_t> dim_dist(1, 3);
  std::uniform_real_distribution<double> off(0.2, 1.5);
  int solved = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = dim_dist(rng);
    // A box keeps everything bounded; extra random cuts (at most 8 facets
    // total) shrink it.
    Matrix a(2 * n + 2, n);
    Vector b(2 * n + 2);
    for (std::size_t j = 0; j < n; ++j) {
      a(2 * j, j) = 1.0;
      b[2 * j] = off(rng);
      a(2 * j + 1, j) = -1.0;
      b[2 * j + 1] = off(rng);
    }
    for (std::size_t i = 2 * n; i < 2 * n + 2; ++i) {
      double norm = 0.0;
      do {
        norm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          a(i, j) = off(rng) - 0.85;
          norm += a(i, j) * a(i, j);
        }
      } while (norm < 1e-2);
      b[i] = off(rng) - 0.5;
    }
    const Polyhedron poly(std::move(a), std::move(b));
    Vector c(n);
    for (double& v : c) v = off(rng) - 0.85;

    const LpResult lp = simplex_solve(c, poly);
    const auto oracle = vertex_enumeration_minimize(c, poly);
    if (!oracle) {
      CHECK(lp.status == LpStatus::Infeasible);
      continue;
    }
    REQUIRE(lp.status == LpStatus::Optimal);
    CHECK(lp.value == doctest::Approx(oracle->second).epsilon(1e-8));
    CHECK(poly.max_violation(lp.x) <= tol::lp);
    ++solved;
  }
  CHECK(solved > 40);  // the generator must actually exercise the solver
}

TEST_CASE("chebyshev center of the unit box") {
  const ChebyshevResult ball = chebyshev_center(unit_box_2d());
  REQUIRE(ball.feasible);
  CHECK(ball.radius == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::fabs(ball.center[0]) <= 1e-9);
  CHECK(std::fabs(ball.center[1]) <= 1e-9);
}

TEST_CASE("chebyshev center reports empty polyhedra") {
  const ChebyshevResult ball =
      chebyshev_center(Polyhedron(Matrix{{1.0}, {-1.0}}, Vector{0.0, -1.0}));
  CHECK_FALSE(ball.feasible);
}

TEST_CASE("chebyshev center of the triangle matches the grid oracle") {
  const Polyhedron tri(Matrix{{-1.0, 0.0}, {0.0, -1.0}, {1.0, 1.0}}, Vector{0.0, 0.0, 1.0});
  const ChebyshevResult ball = chebyshev_center(tri);
  REQUIRE(ball.feasible);

  const double expected = 1.0 / (2.0 + std::sqrt(2.0));
  CHECK(ball.radius == doctest::Approx(expected).epsilon(1e-9));

  const double oracle = grid_chebyshev_radius(tri, 0.0, 1.0, 1e-3);
  CHECK(std::fabs(ball.radius - oracle) <= 2e-3);
}

TEST_CASE("chebyshev ball is contained in the polyhedron") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> off(0.2, 2.0);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 3;
    Matrix a(2 * n + 1, n);
    Vector b(2 * n + 1);
    for (std::size_t j = 0; j < n; ++j) {
      a(2 * j, j) = 1.0;
      b[2 * j] = off(rng);
      a(2 * j + 1, j) = -1.0;
      b[2 * j + 1] = off(rng);
    }
    for (std::size_t j = 0; j < n; ++j) a(2 * n, j) = off(rng) - 1.0;
    bool zero = true;
    for (std::size_t j = 0; j < n; ++j) zero = zero && a(2 * n, j) == 0.0;
    if (zero) a(2 * n, 0) = 1.0;
    b[2 * n] = off(rng);
    const Polyhedron poly(std::move(a), std::move(b));

    const ChebyshevResult ball = chebyshev_center(poly);
    REQUIRE(ball.feasible);
    REQUIRE(std::isfinite(ball.radius));
    for (std::size_t i = 0; i < poly.facets(); ++i) {
      double ax = 0.0, norm = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        ax += poly.A(i, j) * ball.center[j];
        norm += poly.A(i, j) * poly.A(i, j);
      }
      CHECK(ax + ball.radius * std::sqrt(norm) <= poly.b[i] + tol::lp);
    }
  }
}

TEST_CASE("chebyshev radius is +inf on unbounded polyhedra and all of R^n") {
  const ChebyshevResult half = chebyshev_center(Polyhedron(Matrix{{-1.0}}, Vector{0.0}));
  REQUIRE(half.feasible);
  CHECK(std::isinf(half.radius));

  const ChebyshevResult all = chebyshev_center(Polyhedron(Matrix(0, 2), Vector{}));
  REQUIRE(all.feasible);
  CHECK(std::isinf(all.radius));
  CHECK(all.center == Vector{0.0, 0.0});
}
