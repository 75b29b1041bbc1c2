#include "mpqp/linalg.hpp"

#include <cmath>

#include "mpqp/errors.hpp"
#include "mpqp/tolerances.hpp"

namespace mpqp {

Vector CholeskyFactor::solve(const Vector& b) const {
  const std::size_t n = dim();
  if (b.size() != n) throw DimensionMismatch("CholeskyFactor::solve: length mismatch");
  // Forward substitution L y = b.
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t j = 0; j < i; ++j) s -= L(i, j) * y[j];
    y[i] = s / L(i, i);
  }
  // Back substitution Lᵀ x = y.
  Vector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= L(j, ii) * x[j];
    x[ii] = s / L(ii, ii);
  }
  return x;
}

Matrix CholeskyFactor::solve(const Matrix& B) const {
  if (B.rows() != dim()) throw DimensionMismatch("CholeskyFactor::solve: row mismatch");
  Matrix X(B.rows(), B.cols());
  Vector col(B.rows());
  for (std::size_t j = 0; j < B.cols(); ++j) {
    for (std::size_t i = 0; i < B.rows(); ++i) col[i] = B(i, j);
    Vector x = solve(col);
    for (std::size_t i = 0; i < B.rows(); ++i) X(i, j) = x[i];
  }
  return X;
}

CholeskyFactor cholesky_spd(const Matrix& A) {
  const std::size_t n = A.rows();
  if (A.cols() != n) throw DimensionMismatch("cholesky_spd: matrix not square");

  const double scale = max_abs(A);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::fabs(A(i, j) - A(j, i)) > tol::sym * std::max(1.0, scale))
        throw NotSymmetric("cholesky_spd: matrix is not symmetric");

  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, A(i, i));
  const double pivot_floor = tol::pd * std::max(1.0, max_diag);

  Matrix L(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = A(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    if (d <= pivot_floor) {
      throw NotPositiveDefinite("cholesky_spd: pivot below positive-definiteness threshold");
    }
    L(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = A(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      L(i, j) = s / L(j, j);
    }
  }
  return CholeskyFactor{std::move(L)};
}

Vector solve_spd(const Matrix& A, const Vector& b) { return cholesky_spd(A).solve(b); }

Matrix solve_spd(const Matrix& A, const Matrix& B) { return cholesky_spd(A).solve(B); }

std::size_t row_rank(Matrix M, double tol) {
  if (tol <= 0.0) throw InvalidInput("row_rank: tolerance must be positive");
  const std::size_t r = M.rows(), c = M.cols();
  const std::size_t steps = std::min(r, c);

  std::size_t rank = 0;
  double largest_pivot = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    // Complete pivoting: largest remaining entry.
    std::size_t pi = k, pj = k;
    double pmax = 0.0;
    for (std::size_t i = k; i < r; ++i)
      for (std::size_t j = k; j < c; ++j)
        if (std::fabs(M(i, j)) > pmax) {
          pmax = std::fabs(M(i, j));
          pi = i;
          pj = j;
        }
    largest_pivot = std::max(largest_pivot, pmax);
    if (pmax <= tol * largest_pivot || pmax == 0.0) break;

    if (pi != k)
      for (std::size_t j = 0; j < c; ++j) std::swap(M(k, j), M(pi, j));
    if (pj != k)
      for (std::size_t i = 0; i < r; ++i) std::swap(M(i, k), M(i, pj));

    for (std::size_t i = k + 1; i < r; ++i) {
      const double f = M(i, k) / M(k, k);
      for (std::size_t j = k; j < c; ++j) M(i, j) -= f * M(k, j);
    }
    ++rank;
  }
  return rank;
}

}  // namespace mpqp
