#ifndef MPQP_SWEEP_HPP_
#define MPQP_SWEEP_HPP_

#include <string>

#include "mpqp/explicit_solution.hpp"

namespace mpqp {

/// A line segment in parameter space evaluated at `steps` points,
/// endpoints included.
struct SweepSpec {
  Vector x_start;
  Vector x_end;
  std::size_t steps = 2;
};

/// CSV with columns t, x_1..x_n, V, gradV_1..gradV_n, region_active_set,
/// boundary_flag. V and the gradient come from the located region's value
/// form and closed-form multiplier map; infeasible points leave the V,
/// gradient and active-set fields empty. Floats print with 17 significant
/// digits so the output is byte-stable.
std::string run_sweep(const ExplicitSolution& sol, const SweepSpec& spec);

}  // namespace mpqp

#endif  // MPQP_SWEEP_HPP_
