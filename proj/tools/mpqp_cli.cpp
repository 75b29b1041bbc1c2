// Command-line front end: load a problem, solve at a parameter, build the
// explicit solution, evaluate gradients, run the verification suite, or
// sweep a segment to CSV.
//
// Exit codes: 0 success, 1 parse/validation/usage error, 2 infeasible
// parameter, 3 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mpqp/check.hpp"
#include "mpqp/errors.hpp"
#include "mpqp/explicit_solution.hpp"
#include "mpqp/problem_io.hpp"
#include "mpqp/qp_oracle.hpp"
#include "mpqp/sweep.hpp"
#include "mpqp/value_gradient.hpp"

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string join(const mpqp::Vector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ' ';
    s += fmt(v[i]);
  }
  return s;
}

mpqp::Vector parse_vector(const std::string& text, std::size_t expected, const char* flag) {
  mpqp::Vector out;
  std::string token;
  for (char c : text + ",") {
    if (c == ',') {
      if (token.empty()) continue;
      try {
        std::size_t used = 0;
        out.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw mpqp::ParseError(std::string(flag) + ": cannot parse \"" + token + "\" as a number");
      }
      token.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      token += c;
    }
  }
  if (out.size() != expected)
    throw mpqp::ParseError(std::string(flag) + ": expected " + std::to_string(expected) +
                           " comma-separated values, got " + std::to_string(out.size()));
  return out;
}

int cmd_solve(const mpqp::Problem& p, const std::string& x_text) {
  const mpqp::Vector x = parse_vector(x_text, p.num_params(), "--x");
  const mpqp::PrimalDualSolution sol = mpqp::solve_qp(p, x);
  if (sol.status != mpqp::SolveStatus::Optimal) {
    std::cout << "status: infeasible\n";
    return 2;
  }
  const mpqp::KktResiduals res = mpqp::kkt_residuals(p, x, sol.z_star, sol.lambda_star);
  std::cout << "status: optimal\n";
  std::cout << "z*: " << join(sol.z_star) << "\n";
  std::cout << "lambda*: " << join(sol.lambda_star) << "\n";
  std::cout << "V: " << fmt(sol.objective) << "\n";
  std::cout << "active_set: " << sol.active_set.to_string() << "\n";
  std::cout << "kkt: stationarity=" << fmt(res.stationarity) << " primal=" << fmt(res.primal)
            << " dual=" << fmt(res.dual) << " comp_slack=" << fmt(res.comp_slack) << "\n";
  return 0;
}

int cmd_regions(const mpqp::Problem& p) {
  const mpqp::ExplicitSolution sol = mpqp::enumerate_regions(p);
  std::cout << mpqp::save_explicit_solution(sol);
  std::cerr << "regions: " << sol.regions.size() << "\n";
  for (const auto& reg : sol.regions) {
    std::cerr << "  " << reg.active_set.to_string() << " radius="
              << (std::isfinite(reg.chebyshev_radius) ? fmt(reg.chebyshev_radius) : "inf")
              << "\n";
  }
  std::size_t licq = 0, gram = 0, empty = 0, lower = 0;
  for (const auto& skip : sol.skipped) {
    switch (skip.reason) {
      case mpqp::SkipReason::LicqViolated: ++licq; break;
      case mpqp::SkipReason::SingularGram: ++gram; break;
      case mpqp::SkipReason::EmptyRegion: ++empty; break;
      case mpqp::SkipReason::LowerDimensional: ++lower; break;
    }
  }
  std::cerr << "skipped candidates: " << sol.skipped.size() << " (licq=" << licq
            << " singular_gram=" << gram << " empty=" << empty << " lower_dim=" << lower
            << ")\n";
  return 0;
}

int cmd_grad(const mpqp::Problem& p, const std::string& x_text, const std::string& route_name) {
  const mpqp::Vector x = parse_vector(x_text, p.num_params(), "--x");
  mpqp::GradientRoute route;
  if (route_name == "region") {
    route = mpqp::GradientRoute::RegionClosedForm;
  } else if (route_name == "multiplier") {
    route = mpqp::GradientRoute::MultiplierFormula;
  } else if (route_name == "generic") {
    route = mpqp::GradientRoute::GenericFormula;
  } else if (route_name == "fd") {
    route = mpqp::GradientRoute::FiniteDifference;
  } else {
    throw mpqp::ParseError("--route: expected region|multiplier|generic|fd");
  }
  const mpqp::ExplicitSolution sol = mpqp::enumerate_regions(p);
  const mpqp::GradientResult g = mpqp::evaluate_gradient(sol, x, route);
  if (g.boundary)
    std::cerr << "warning: parameter lies on a region boundary; "
                 "tie-break region used for the closed form\n";
  std::cout << join(g.gradient) << "\n";
  return 0;
}

int cmd_check(const mpqp::Problem& p, std::uint64_t seed, std::size_t samples, bool as_json) {
  const mpqp::CheckReport report = mpqp::run_checks(p, seed, samples);
  std::cout << (as_json ? mpqp::render_json(report) : mpqp::render_text(report));
  return report.all_passed() ? 0 : 3;
}

int cmd_sweep(const mpqp::Problem& p, const std::string& from_text, const std::string& to_text,
              std::size_t steps, const std::string& out_path) {
  mpqp::SweepSpec spec;
  spec.x_start = parse_vector(from_text, p.num_params(), "--from");
  spec.x_end = parse_vector(to_text, p.num_params(), "--to");
  spec.steps = steps;
  const mpqp::ExplicitSolution sol = mpqp::enumerate_regions(p);
  const std::string csv = mpqp::run_sweep(sol, spec);
  if (out_path.empty() || out_path == "-") {
    std::cout << csv;
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 1;
  }
  out << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit solutions and value-function gradients for strictly convex "
               "parametric QPs"};
  app.require_subcommand(1);

  std::string problem_path, x_text, route_name = "region";
  std::string from_text, to_text, out_path;
  std::uint64_t seed = 42;
  std::size_t samples = 100, steps = 11;
  bool as_json = false;

  auto* solve = app.add_subcommand("solve", "Solve the QP at a fixed parameter");
  solve->add_option("problem", problem_path, "problem JSON file")->required();
  solve->add_option("--x", x_text, "parameter value, comma separated")->required();

  auto* regions = app.add_subcommand("regions", "Enumerate critical regions as JSON");
  regions->add_option("problem", problem_path, "problem JSON file")->required();

  auto* grad = app.add_subcommand("grad", "Evaluate the value-function gradient");
  grad->add_option("problem", problem_path, "problem JSON file")->required();
  grad->add_option("--x", x_text, "parameter value, comma separated")->required();
  grad->add_option("--route", route_name, "region|multiplier|generic|fd");

  auto* check = app.add_subcommand("check", "Run the verification suite");
  check->add_option("problem", problem_path, "problem JSON file")->required();
  check->add_option("--seed", seed, "RNG seed");
  check->add_option("--samples", samples, "parameter samples per check");
  check->add_flag("--json", as_json, "machine-readable report");

  auto* sweep = app.add_subcommand("sweep", "Evaluate V and its gradient along a segment");
  sweep->add_option("problem", problem_path, "problem JSON file")->required();
  sweep->add_option("--from", from_text, "segment start, comma separated")->required();
  sweep->add_option("--to", to_text, "segment end, comma separated")->required();
  sweep->add_option("--steps", steps, "number of points including endpoints");
  sweep->add_option("--out", out_path, "output CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    const mpqp::Problem p = mpqp::load_problem_file(problem_path);
    if (solve->parsed()) return cmd_solve(p, x_text);
    if (regions->parsed()) return cmd_regions(p);
    if (grad->parsed()) return cmd_grad(p, x_text, route_name);
    if (check->parsed()) return cmd_check(p, seed, samples, as_json);
    if (sweep->parsed()) return cmd_sweep(p, from_text, to_text, steps, out_path);
  } catch (const mpqp::InfeasibleParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const mpqp::OutsideFeasibleSet& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const mpqp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
