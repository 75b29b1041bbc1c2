#include "mpqp/sweep.hpp"

#include <cstdio>

#include "mpqp/errors.hpp"
#include "mpqp/tolerances.hpp"
#include "mpqp/value_gradient.hpp"

namespace mpqp {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace

std::string run_sweep(const ExplicitSolution& sol, const SweepSpec& spec) {
  const std::size_t n = sol.problem.num_params();
  if (spec.x_start.size() != n || spec.x_end.size() != n)
    throw DimensionMismatch("run_sweep: endpoint dimension mismatch");
  if (spec.steps < 2) throw InvalidInput("run_sweep: need at least two steps");

  std::string csv = "t";
  for (std::size_t j = 0; j < n; ++j) csv += ",x_" + std::to_string(j + 1);
  csv += ",V";
  for (std::size_t j = 0; j < n; ++j) csv += ",gradV_" + std::to_string(j + 1);
  csv += ",region_active_set,boundary_flag\n";

  for (std::size_t i = 0; i < spec.steps; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(spec.steps - 1);
    Vector x(n);
    for (std::size_t j = 0; j < n; ++j)
      x[j] = spec.x_start[j] + t * (spec.x_end[j] - spec.x_start[j]);

    csv += fmt(t);
    for (std::size_t j = 0; j < n; ++j) csv += "," + fmt(x[j]);

    bool located = true;
    LocateResult loc{};
    try {
      loc = locate(sol, x);
    } catch (const OutsideFeasibleSet&) {
      located = false;
    }

    if (!located) {
      // Infeasible point: leave value/gradient/active-set fields empty.
      csv += ",";
      for (std::size_t j = 0; j < n; ++j) csv += ",";
      csv += ",,0\n";
      continue;
    }

    const CriticalRegion& reg = sol.regions[loc.region_index];
    csv += "," + fmt(reg.value_form.value(x));
    const Vector grad = evaluate_gradient(sol, x, GradientRoute::RegionClosedForm).gradient;
    for (std::size_t j = 0; j < n; ++j) csv += "," + fmt(grad[j]);
    csv += "," + reg.active_set.to_string(';');
    csv += loc.containment == Containment::Boundary ? ",1\n" : ",0\n";
  }
  return csv;
}

}  // namespace mpqp
