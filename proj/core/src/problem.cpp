#include "mpqp/problem.hpp"

#include <memory>

#include "mpqp/errors.hpp"

namespace mpqp {

Problem::Problem(Matrix H, Matrix G, Vector W, Matrix S)
    : s_(H.rows()),
      m_(G.rows()),
      n_(S.cols()),
      H_(std::move(H)),
      G_(std::move(G)),
      S_(std::move(S)),
      W_(std::move(W)) {
  if (s_ == 0) throw DimensionMismatch("Problem: need at least one optimization variable");
  if (H_.cols() != s_) throw DimensionMismatch("Problem: H must be square");
  if (G_.cols() != s_ && m_ > 0)
    throw DimensionMismatch("Problem: G column count must equal H dimension");
  if (m_ == 0 && G_.cols() == 0) G_ = Matrix(0, s_);
  if (W_.size() != m_) throw DimensionMismatch("Problem: W length must equal G row count");
  if (S_.rows() != m_) throw DimensionMismatch("Problem: S row count must equal G row count");
  if (n_ == 0) throw DimensionMismatch("Problem: need at least one parameter");
  if (!H_.all_finite() || !G_.all_finite() || !S_.all_finite() || !all_finite(W_))
    throw InvalidInput("Problem: entries must be finite");

  h_chol_ = cholesky_spd(H_);  // throws NotSymmetric / NotPositiveDefinite
  h_inv_gt_ = h_chol_.solve(G_.transposed());
  dual_hess_ = G_ * h_inv_gt_;
}

Vector Problem::constraint_values(const Vector& z, const Vector& x) const {
  if (z.size() != s_) throw DimensionMismatch("constraint_values: z dimension mismatch");
  if (x.size() != n_) throw DimensionMismatch("constraint_values: x dimension mismatch");
  Vector g(m_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    double v = -W_[i];
    for (std::size_t j = 0; j < s_; ++j) v += G_(i, j) * z[j];
    for (std::size_t j = 0; j < n_; ++j) v -= S_(i, j) * x[j];
    g[i] = v;
  }
  return g;
}

Vector Problem::rhs(const Vector& x) const {
  if (x.size() != n_) throw DimensionMismatch("rhs: x dimension mismatch");
  Vector r = W_;
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < n_; ++j) r[i] += S_(i, j) * x[j];
  return r;
}

double Problem::objective(const Vector& z) const {
  if (z.size() != s_) throw DimensionMismatch("objective: z dimension mismatch");
  double v = 0.0;
  for (std::size_t i = 0; i < s_; ++i)
    for (std::size_t j = 0; j < s_; ++j) v += z[i] * H_(i, j) * z[j];
  return 0.5 * v;
}

bool is_feasible_point(const Problem& p, const Vector& x, const Vector& z, double feas_tol) {
  const Vector g = p.constraint_values(z, x);
  for (double gi : g)
    if (gi > feas_tol) return false;
  return true;
}

GenericProblem make_generic(const Problem& p) {
  // Shared copy so the evaluators stay valid past the caller's Problem.
  auto sp = std::make_shared<const Problem>(p);
  GenericProblem gp;
  gp.num_vars = sp->num_vars();
  gp.num_constraints = sp->num_constraints();
  gp.num_params = sp->num_params();
  gp.f = [sp](const Vector& z, const Vector&) { return sp->objective(z); };
  gp.g = [sp](const Vector& z, const Vector& x) { return sp->constraint_values(z, x); };
  gp.df_dx = [sp](const Vector&, const Vector&) { return zeros(sp->num_params()); };
  gp.dg_dx = [sp](const Vector&, const Vector&) { return -1.0 * sp->S(); };
  return gp;
}

}  // namespace mpqp
