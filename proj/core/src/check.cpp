#include "mpqp/check.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include <json.hpp>

#include "mpqp/errors.hpp"
#include "mpqp/explicit_solution.hpp"
#include "mpqp/qp_oracle.hpp"
#include "mpqp/tolerances.hpp"
#include "mpqp/value_gradient.hpp"

namespace mpqp {

namespace {

constexpr double kAgreementTol = 1e-6;  // explicit-vs-oracle and primal-vs-dual
constexpr double kRouteTol = 1e-7;
constexpr double kFdTol = 1e-6;
constexpr double kConvexitySlack = 1e-8;

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

struct SamplePoint {
  Vector x;
  PrimalDualSolution oracle;
  std::size_t region = 0;
  bool interior = false;
};

struct SampleSet {
  std::vector<SamplePoint> feasible;   // oracle status Optimal
  std::vector<std::size_t> interiors;  // indices into `feasible`
  bool licq_ok = true;
};

// Box around the region geometry to draw parameters from.
std::pair<Vector, Vector> sampling_box(const ExplicitSolution& sol) {
  const std::size_t n = sol.problem.num_params();
  Vector lo(n, -5.0), hi(n, 5.0);
  bool seen = false;
  for (const auto& reg : sol.regions) {
    for (std::size_t j = 0; j < n; ++j) {
      const double c = reg.chebyshev_center[j];
      if (!std::isfinite(c)) continue;
      if (!seen) {
        lo[j] = c;
        hi[j] = c;
      } else {
        lo[j] = std::min(lo[j], c);
        hi[j] = std::max(hi[j], c);
      }
    }
    seen = true;
  }
  for (std::size_t j = 0; j < n; ++j) {
    // Clamp to problem scale so finite differences stay meaningful: at
    // |V| ~ 1e6 double rounding alone would swamp the thresholds.
    lo[j] = std::max(lo[j] - 3.0, -8.0);
    hi[j] = std::min(hi[j] + 3.0, 8.0);
    if (hi[j] <= lo[j]) {
      lo[j] = -8.0;
      hi[j] = 8.0;
    }
    if (hi[j] - lo[j] < 6.0) {
      const double mid = 0.5 * (lo[j] + hi[j]);
      lo[j] = mid - 3.0;
      hi[j] = mid + 3.0;
    }
  }
  return {lo, hi};
}

SampleSet draw_samples(const ExplicitSolution& sol, std::mt19937_64& rng, std::size_t samples) {
  const Problem& p = sol.problem;
  const auto [lo, hi] = sampling_box(sol);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SampleSet set;
  const std::size_t max_attempts = 60 * samples + 60;
  for (std::size_t attempt = 0;
       attempt < max_attempts && set.interiors.size() < samples; ++attempt) {
    Vector x(p.num_params());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = lo[j] + (hi[j] - lo[j]) * unit(rng);

    PrimalDualSolution oracle;
    try {
      oracle = solve_qp(p, x);
    } catch (const MaxIterations&) {
      continue;
    }
    if (oracle.status != SolveStatus::Optimal) continue;

    SamplePoint pt;
    pt.x = std::move(x);
    pt.oracle = std::move(oracle);

    if (row_rank(p.G().select_rows(pt.oracle.active_set.indices()), tol::licq) !=
        pt.oracle.active_set.size())
      set.licq_ok = false;

    try {
      const LocateResult loc = locate(sol, pt.x);
      pt.region = loc.region_index;
      pt.interior = loc.containment == Containment::Interior;
    } catch (const OutsideFeasibleSet&) {
      pt.interior = false;
    }

    if (pt.interior) set.interiors.push_back(set.feasible.size());
    set.feasible.push_back(std::move(pt));
  }
  return set;
}

}  // namespace

bool CheckReport::all_passed() const {
  for (const auto& e : entries)
    if (e.status == CheckStatus::Fail) return false;
  return true;
}

std::size_t CheckReport::count(CheckStatus s) const {
  std::size_t c = 0;
  for (const auto& e : entries)
    if (e.status == s) ++c;
  return c;
}

CheckReport run_checks(const Problem& p, std::uint64_t seed, std::size_t samples) {
  CheckReport report;
  std::mt19937_64 rng(seed);

  const ExplicitSolution sol = enumerate_regions(p);
  SampleSet set = draw_samples(sol, rng, samples);

  auto push = [&report](std::string name, CheckStatus st, double measured, double threshold,
                        std::string detail) {
    report.entries.push_back(
        {std::move(name), st, measured, threshold, std::move(detail)});
  };
  auto push_measure = [&push](std::string name, double measured, double threshold,
                              std::string detail = "") {
    push(std::move(name), measured <= threshold ? CheckStatus::Pass : CheckStatus::Fail,
         measured, threshold, std::move(detail));
  };
  auto push_skip = [&push](std::string name, std::string reason) {
    push(std::move(name), CheckStatus::Skip, nan_value(), 0.0, std::move(reason));
  };

  if (set.feasible.empty()) {
    push_skip("kkt-residuals", "no feasible samples found in the sampling box");
    return report;
  }

  const std::string sample_note = std::to_string(set.feasible.size()) + " feasible / " +
                                  std::to_string(set.interiors.size()) + " interior samples";
  const std::string licq_note = "LICQ violated at sampled parameters";

  // Residual norms below are measured relative to their natural data
  // scales, so badly conditioned instances (multipliers in the 1e5 range)
  // are judged by achievable precision rather than failed on rounding.
  const auto point_scale = [](const SamplePoint& pt) {
    return 1.0 + inf_norm(pt.oracle.lambda_star) + std::fabs(pt.oracle.objective);
  };

  // KKT residuals at every oracle solution.
  {
    double worst = 0.0;
    for (const auto& pt : set.feasible)
      worst = std::max(
          worst, kkt_residuals(p, pt.x, pt.oracle.z_star, pt.oracle.lambda_star).max() /
                     point_scale(pt));
    push_measure("kkt-residuals", worst, tol::kkt, sample_note);
  }

  // Stationarity identity z* = -H⁻¹Gᵀλ*.
  {
    double worst = 0.0;
    for (const auto& pt : set.feasible) {
      Vector z = pt.oracle.z_star + p.h_inv_gt() * pt.oracle.lambda_star;
      worst = std::max(worst, inf_norm(z) / point_scale(pt));
    }
    push_measure("stationarity-identity", worst, tol::kkt);
  }

  // Strong duality and primal/dual multiplier agreement.
  {
    double worst_gap = 0.0, worst_mult = 0.0;
    bool dual_ok = true;
    for (const auto& pt : set.feasible) {
      const DualSolution dual = solve_dual_qp(p, pt.x);
      if (!dual.bounded) {
        dual_ok = false;
        break;
      }
      worst_gap = std::max(worst_gap, std::fabs(pt.oracle.objective - dual.value) /
                                          (1.0 + std::fabs(pt.oracle.objective)));
      worst_mult = std::max(worst_mult, inf_norm(pt.oracle.lambda_star - dual.lambda) /
                                            (1.0 + inf_norm(pt.oracle.lambda_star)));
    }
    if (!dual_ok) {
      push("strong-duality", CheckStatus::Fail, nan_value(), tol::duality,
           "dual reported unbounded at a primal-feasible parameter");
    } else {
      push_measure("strong-duality", worst_gap, tol::duality);
      if (set.licq_ok) {
        push_measure("multiplier-agreement", worst_mult, kAgreementTol);
      } else {
        push_skip("multiplier-agreement", licq_note);
      }
    }
  }

  // Strong-duality identity evaluated with the primal multipliers.
  {
    double worst = 0.0;
    for (const auto& pt : set.feasible)
      worst = std::max(worst, duality_value_identity(p, pt.x) /
                                  (1.0 + std::fabs(pt.oracle.objective)));
    push_measure("duality-value-identity", worst, tol::duality);
  }

  // Explicit solution vs oracle at interior points.
  if (set.interiors.empty()) {
    push_skip("explicit-oracle-z", "no interior samples");
  } else {
    double worst_z = 0.0, worst_l = 0.0;
    for (std::size_t k : set.interiors) {
      const auto& pt = set.feasible[k];
      const CriticalRegion& reg = sol.regions[pt.region];
      worst_z = std::max(worst_z, inf_norm(reg.z_map(pt.x) - pt.oracle.z_star) /
                                      (1.0 + inf_norm(pt.oracle.z_star)));
      worst_l = std::max(worst_l,
                         inf_norm(reg.full_lambda(pt.x, p.num_constraints()) -
                                  pt.oracle.lambda_star) /
                             (1.0 + inf_norm(pt.oracle.lambda_star)));
    }
    push_measure("explicit-oracle-z", worst_z, kAgreementTol);
    if (set.licq_ok) {
      push_measure("explicit-oracle-lambda", worst_l, kAgreementTol);
    } else {
      push_skip("explicit-oracle-lambda", licq_note);
    }
  }

  // Gradient route agreement at interior points.
  if (!set.licq_ok) {
    push_skip("route-agreement", licq_note);
  } else if (set.interiors.empty()) {
    push_skip("route-agreement", "no interior samples");
  } else {
    double worst = 0.0;
    const GenericProblem gp = make_generic(p);
    for (std::size_t k : set.interiors) {
      const auto& pt = set.feasible[k];
      const Vector g_region =
          evaluate_gradient(sol, pt.x, GradientRoute::RegionClosedForm).gradient;
      const Vector g_mult = gradient_from_multipliers(p, pt.oracle.lambda_star);
      const Vector g_gen = gradient_generic(gp, pt.x, pt.oracle.z_star, pt.oracle.lambda_star,
                                            pt.oracle.active_set);
      const double scale = 1.0 + inf_norm(g_region);
      worst = std::max({worst, inf_norm(g_region - g_mult) / scale,
                        inf_norm(g_region - g_gen) / scale, inf_norm(g_mult - g_gen) / scale});
    }
    push_measure("route-agreement", worst, kRouteTol);
  }

  // Finite differences against the closed form, away from facets. Points
  // where |V| is large enough that bare double rounding divided by 2h
  // rivals the threshold cannot measure anything and are set aside.
  if (!set.licq_ok) {
    push_skip("fd-agreement", licq_note);
  } else {
    const double value_scale_cap = 0.25 * kFdTol * 2.0 * tol::fd_step / (32.0 * 2.22e-16);
    double worst = 0.0;
    std::size_t used = 0, out_of_scale = 0;
    for (std::size_t k : set.interiors) {
      const auto& pt = set.feasible[k];
      const CriticalRegion& reg = sol.regions[pt.region];
      if (reg.region.min_slack(pt.x) <= 10.0 * tol::fd_step) continue;
      if (std::fabs(pt.oracle.objective) > value_scale_cap) {
        ++out_of_scale;
        continue;
      }
      const Vector fd = finite_difference_gradient(
          [&p](const Vector& xx) { return value_at(p, xx); }, pt.x, tol::fd_step);
      const Vector an = gradient_region_closed_form(p, reg, pt.x);
      worst = std::max(worst, inf_norm(fd - an));
      ++used;
    }
    if (used == 0) {
      push_skip("fd-agreement", out_of_scale > 0
                                    ? "objective magnitudes exceed finite-difference precision"
                                    : "no samples far enough from region facets");
    } else {
      push_measure("fd-agreement", worst, kFdTol,
                   std::to_string(used) + " points" +
                       (out_of_scale > 0
                            ? ", " + std::to_string(out_of_scale) + " beyond rounding scale"
                            : ""));
    }
  }

  // Cross-region gradient continuity on shared boundaries.
  if (sol.regions.size() < 2) {
    push_skip("continuity", "fewer than two regions");
  } else if (!set.licq_ok) {
    push_skip("continuity", licq_note);
  } else {
    double worst = 0.0;
    std::size_t sampled_pairs = 0;
    for (const auto& pair : sol.adjacency) {
      ContinuityReport cr;
      try {
        cr = check_gradient_continuity(sol, pair, 20, seed);
      } catch (const NoSharedBoundary&) {
        // Adjacency is decided within lp tolerance; a pair this marginal
        // has no robustly samplable shared points.
        continue;
      }
      if (cr.samples_used == 0) continue;
      worst = std::max(worst, cr.max_discrepancy);
      ++sampled_pairs;
    }
    if (sampled_pairs == 0) {
      push_skip("continuity", "no shared-boundary samples inside the feasible interior");
    } else {
      push_measure("continuity", worst, tol::cont,
                   std::to_string(sampled_pairs) + " adjacent pairs");
    }
  }

  // Value convexity along random chords.
  {
    std::uniform_real_distribution<double> theta_dist(0.05, 0.95);
    std::uniform_int_distribution<std::size_t> pick(0, set.feasible.size() - 1);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < samples; ++t) {
      const auto& a = set.feasible[pick(rng)];
      const auto& b = set.feasible[pick(rng)];
      const double theta = theta_dist(rng);
      const Vector mid = theta * a.x + (1.0 - theta) * b.x;
      const double v_mid = value_at(p, mid);
      worst = std::max(worst,
                       v_mid - theta * a.oracle.objective - (1.0 - theta) * b.oracle.objective);
    }
    push_measure("convexity", worst, kConvexitySlack);
  }

  // Gradient monotonicity (holds for any subgradient selection).
  if (set.interiors.size() < 2) {
    push_skip("gradient-monotonicity", "need at least two interior samples");
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, set.interiors.size() - 1);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < samples; ++t) {
      const auto& a = set.feasible[set.interiors[pick(rng)]];
      const auto& b = set.feasible[set.interiors[pick(rng)]];
      const Vector ga = sol.regions[a.region].value_form.gradient(a.x);
      const Vector gb = sol.regions[b.region].value_form.gradient(b.x);
      worst = std::max(worst, -dot(ga - gb, a.x - b.x));
    }
    push_measure("gradient-monotonicity", worst, kConvexitySlack);
  }

  // The empty-active-set region must carry an exactly zero gradient.
  {
    const CriticalRegion* empty_region = nullptr;
    for (const auto& reg : sol.regions)
      if (reg.active_set.empty()) empty_region = &reg;
    if (empty_region == nullptr) {
      push_skip("zero-region-gradient", "no empty-active-set region");
    } else {
      double worst = max_abs(empty_region->z_map.F);
      worst = std::max(worst, inf_norm(empty_region->z_map.c));
      worst = std::max(worst, max_abs(empty_region->value_form.Q));
      worst = std::max(worst, inf_norm(empty_region->value_form.q));
      worst = std::max(worst, std::fabs(empty_region->value_form.r));
      for (std::size_t k : set.interiors) {
        const auto& pt = set.feasible[k];
        if (&sol.regions[pt.region] != empty_region) continue;
        worst = std::max(
            worst, inf_norm(evaluate_gradient(sol, pt.x, GradientRoute::RegionClosedForm).gradient));
      }
      push_measure("zero-region-gradient", worst, 0.0);
    }
  }

  // Envelope property of the generic route: an O(1e-6) error in z* moves
  // the gradient by O(1e-6), not O(1).
  if (set.interiors.empty()) {
    push_skip("envelope-perturbation", "no interior samples");
  } else {
    const auto& pt = set.feasible[set.interiors.front()];
    const GenericProblem gp = make_generic(p);
    const Vector base = gradient_generic(gp, pt.x, pt.oracle.z_star, pt.oracle.lambda_star,
                                         pt.oracle.active_set);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Vector z_pert = pt.oracle.z_star;
    for (double& v : z_pert) v += 1e-6 * unit(rng);
    const Vector moved =
        gradient_generic(gp, pt.x, z_pert, pt.oracle.lambda_star, pt.oracle.active_set);
    push_measure("envelope-perturbation", inf_norm(moved - base), 1e-5);
  }

  // Partition: an interior point belongs to exactly one region interior.
  if (!set.licq_ok) {
    push_skip("partition-uniqueness", licq_note);
  } else {
    std::size_t bad = 0;
    for (std::size_t k : set.interiors) {
      const auto& pt = set.feasible[k];
      std::size_t owners = 0;
      for (const auto& reg : sol.regions)
        if (reg.region.contains(pt.x, tol::lp) && reg.region.min_slack(pt.x) > tol::bnd)
          ++owners;
      if (owners != 1) ++bad;
    }
    push_measure("partition-uniqueness", static_cast<double>(bad), 0.0,
                 std::to_string(set.interiors.size()) + " interior samples");
  }

  // Coverage: every solvable parameter lies in some region closure.
  {
    std::size_t uncovered = 0;
    for (const auto& pt : set.feasible) {
      bool covered = false;
      for (const auto& reg : sol.regions)
        if (reg.region.contains(pt.x, tol::lp)) {
          covered = true;
          break;
        }
      if (!covered) ++uncovered;
    }
    push_measure("coverage", static_cast<double>(uncovered), 0.0,
                 std::to_string(set.feasible.size()) + " feasible samples");
  }

  return report;
}

namespace {

std::string format_value(double v) {
  if (std::isnan(v)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "PASS";
    case CheckStatus::Fail:
      return "FAIL";
    case CheckStatus::Skip:
      return "SKIP";
  }
  return "?";
}

}  // namespace

std::string render_text(const CheckReport& report) {
  std::string out;
  for (const auto& e : report.entries) {
    out += "[";
    out += status_name(e.status);
    out += "] ";
    out += e.name;
    for (std::size_t pad = e.name.size(); pad < 26; ++pad) out += ' ';
    if (e.status == CheckStatus::Skip) {
      out += " reason=" + e.detail;
    } else {
      out += " measured=" + format_value(e.measured);
      out += " threshold=" + format_value(e.threshold);
      if (!e.detail.empty()) out += " (" + e.detail + ")";
    }
    out += "\n";
  }
  out += "result: ";
  out += report.all_passed() ? "PASS" : "FAIL";
  out += " (" + std::to_string(report.count(CheckStatus::Pass)) + " pass, " +
         std::to_string(report.count(CheckStatus::Fail)) + " fail, " +
         std::to_string(report.count(CheckStatus::Skip)) + " skip)\n";
  return out;
}

std::string render_json(const CheckReport& report) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& e : report.entries) {
    nlohmann::ordered_json c;
    c["name"] = e.name;
    c["status"] = status_name(e.status);
    if (std::isnan(e.measured)) {
      c["measured"] = nullptr;
    } else {
      c["measured"] = e.measured == 0.0 ? 0.0 : e.measured;
    }
    c["threshold"] = e.threshold;
    c["detail"] = e.detail;
    checks.push_back(std::move(c));
  }
  doc["checks"] = std::move(checks);
  doc["all_passed"] = report.all_passed();
  return doc.dump(2) + "\n";
}

}  // namespace mpqp
