#ifndef MPQP_MATRIX_HPP_
#define MPQP_MATRIX_HPP_

/**
 * @file matrix.hpp
 * @brief Small dense row-major matrix and vector helpers.
 *
 * Everything in the library runs at desk scale (a handful of variables,
 * constraints and parameters), so the representation favors simplicity and
 * value semantics over performance.
 */

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace mpqp {

using Vector = std::vector<double>;

class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }

  Matrix transposed() const;
  Vector row(std::size_t i) const;
  void set_row(std::size_t i, const Vector& r);

  /// Rows of this matrix indexed by `idx`, in the given order.
  Matrix select_rows(const std::vector<std::size_t>& idx) const;

  bool all_finite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& v);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& v);

double dot(const Vector& a, const Vector& b);
double inf_norm(const Vector& v);
double two_norm(const Vector& v);
double max_abs(const Matrix& a);

/// y = Aᵀ v for A with rows matching v.
Vector transpose_times(const Matrix& a, const Vector& v);

Vector select(const Vector& v, const std::vector<std::size_t>& idx);
Vector zeros(std::size_t n);
bool all_finite(const Vector& v);

}  // namespace mpqp

#endif  // MPQP_MATRIX_HPP_
