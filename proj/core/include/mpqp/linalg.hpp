#ifndef MPQP_LINALG_HPP_
#define MPQP_LINALG_HPP_

/**
 * @file linalg.hpp
 * @brief Dense Cholesky factorization, SPD solves and a numerical rank test.
 */

#include "mpqp/matrix.hpp"

namespace mpqp {

/// Lower-triangular Cholesky factor L with L·Lᵀ equal to the factored matrix.
struct CholeskyFactor {
  Matrix L;

  std::size_t dim() const { return L.rows(); }

  /// Solves A x = b where A = L·Lᵀ.
  Vector solve(const Vector& b) const;

  /// Solves A X = B column by column.
  Matrix solve(const Matrix& B) const;
};

/// Factors a symmetric positive definite matrix.
///
/// Throws NotSymmetric when |A - Aᵀ| exceeds tol::sym relative to |A|, and
/// NotPositiveDefinite when a pivot falls below tol::pd times the largest
/// diagonal entry.
CholeskyFactor cholesky_spd(const Matrix& A);

Vector solve_spd(const Matrix& A, const Vector& b);
Matrix solve_spd(const Matrix& A, const Matrix& B);

/// Numerical row rank via Gaussian elimination with complete pivoting.
/// Pivots below tol times the largest pivot count as zero.
std::size_t row_rank(Matrix M, double tol);

}  // namespace mpqp

#endif  // MPQP_LINALG_HPP_
