#include <benchmark/benchmark.h>

#include <random>

#include "mpqp/explicit_solution.hpp"
#include "mpqp/qp_oracle.hpp"
#include "mpqp/value_gradient.hpp"

namespace {

using mpqp::Matrix;
using mpqp::Problem;
using mpqp::Vector;

Problem make_problem(std::uint64_t seed, std::size_t s, std::size_t m, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  Matrix mat(s, s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) mat(i, j) = entry(rng);
  Matrix h = mat.transposed() * mat;
  for (std::size_t i = 0; i < s; ++i) h(i, i) += 1.0;

  Matrix g(m, s), smat(m, n);
  Vector w(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < s; ++j) g(i, j) = entry(rng);
    for (std::size_t j = 0; j < n; ++j) smat(i, j) = entry(rng);
    w[i] = 1.0 + 0.5 * entry(rng);
  }
  return Problem(std::move(h), std::move(g), std::move(w), std::move(smat));
}

Vector sample_x(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> entry(-2.0, 2.0);
  Vector x(n);
  for (double& v : x) v = entry(rng);
  return x;
}

void BM_SolveQp(benchmark::State& state) {
  const Problem p = make_problem(7, static_cast<std::size_t>(state.range(0)),
                                 static_cast<std::size_t>(state.range(1)), 2);
  std::mt19937_64 rng(11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mpqp::solve_qp(p, sample_x(rng, 2)));
  }
}
BENCHMARK(BM_SolveQp)->Args({2, 4})->Args({4, 8})->Args({6, 12});

void BM_SolveDualQp(benchmark::State& state) {
  const Problem p = make_problem(7, static_cast<std::size_t>(state.range(0)),
                                 static_cast<std::size_t>(state.range(1)), 2);
  std::mt19937_64 rng(13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mpqp::solve_dual_qp(p, sample_x(rng, 2)));
  }
}
BENCHMARK(BM_SolveDualQp)->Args({2, 4})->Args({4, 8});

void BM_EnumerateRegions(benchmark::State& state) {
  const Problem p = make_problem(5, 3, static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mpqp::enumerate_regions(p));
  }
}
BENCHMARK(BM_EnumerateRegions)->Arg(4)->Arg(6)->Arg(8);

void BM_Locate(benchmark::State& state) {
  const Problem p = make_problem(5, 3, 8, 2);
  const mpqp::ExplicitSolution sol = mpqp::enumerate_regions(p);
  std::mt19937_64 rng(17);
  Vector x = sample_x(rng, 2);
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(mpqp::locate(sol, x));
    } catch (const mpqp::OutsideFeasibleSet&) {
    }
    x = sample_x(rng, 2);
  }
}
BENCHMARK(BM_Locate);

void BM_GradientClosedForm(benchmark::State& state) {
  const Problem p = make_problem(5, 3, 8, 2);
  const mpqp::ExplicitSolution sol = mpqp::enumerate_regions(p);
  const Vector x = sol.regions.front().chebyshev_center;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mpqp::evaluate_gradient(sol, x, mpqp::GradientRoute::RegionClosedForm));
  }
}
BENCHMARK(BM_GradientClosedForm);

}  // namespace

BENCHMARK_MAIN();
