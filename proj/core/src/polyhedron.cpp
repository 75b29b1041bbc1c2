#include "mpqp/polyhedron.hpp"

#include <cmath>
#include <limits>

#include "mpqp/errors.hpp"

namespace mpqp {

Polyhedron::Polyhedron(Matrix A_in, Vector b_in) : A(std::move(A_in)), b(std::move(b_in)) {
  if (A.rows() != b.size()) throw DimensionMismatch("Polyhedron: A rows and b length differ");
  if (!A.all_finite() || !all_finite(b)) throw InvalidInput("Polyhedron: entries must be finite");
}

double Polyhedron::max_violation(const Vector& x) const {
  if (x.size() != dim()) throw DimensionMismatch("Polyhedron: point dimension mismatch");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < facets(); ++i) {
    double r = -b[i];
    for (std::size_t j = 0; j < dim(); ++j) r += A(i, j) * x[j];
    worst = std::max(worst, r);
  }
  return worst;
}

double Polyhedron::min_slack(const Vector& x) const {
  if (x.size() != dim()) throw DimensionMismatch("Polyhedron: point dimension mismatch");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < facets(); ++i) {
    double r = b[i];
    for (std::size_t j = 0; j < dim(); ++j) r -= A(i, j) * x[j];
    best = std::min(best, r);
  }
  return best;
}

Polyhedron normalized(const Polyhedron& p) {
  Matrix A = p.A;
  Vector b = p.b;
  for (std::size_t i = 0; i < A.rows(); ++i) {
    double nrm = 0.0;
    for (std::size_t j = 0; j < A.cols(); ++j) nrm += A(i, j) * A(i, j);
    nrm = std::sqrt(nrm);
    if (nrm < 1e-300) throw InvalidInput("normalized: row has zero normal");
    for (std::size_t j = 0; j < A.cols(); ++j) A(i, j) /= nrm;
    b[i] /= nrm;
  }
  return Polyhedron(std::move(A), std::move(b));
}

Polyhedron intersect(const Polyhedron& p, const Polyhedron& q) {
  if (p.dim() != q.dim()) throw DimensionMismatch("intersect: ambient dimensions differ");
  Matrix A(p.facets() + q.facets(), p.dim());
  Vector b(p.facets() + q.facets());
  for (std::size_t i = 0; i < p.facets(); ++i) {
    for (std::size_t j = 0; j < p.dim(); ++j) A(i, j) = p.A(i, j);
    b[i] = p.b[i];
  }
  for (std::size_t i = 0; i < q.facets(); ++i) {
    for (std::size_t j = 0; j < q.dim(); ++j) A(p.facets() + i, j) = q.A(i, j);
    b[p.facets() + i] = q.b[i];
  }
  return Polyhedron(std::move(A), std::move(b));
}

}  // namespace mpqp
