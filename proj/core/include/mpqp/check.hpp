#ifndef MPQP_CHECK_HPP_
#define MPQP_CHECK_HPP_

/**
 * @file check.hpp
 * @brief Seeded verification harness over a single problem: KKT residuals,
 *        strong duality, gradient route agreement, finite differences,
 *        cross-region continuity, convexity and gradient monotonicity.
 *
 * Checks whose hypotheses fail (fewer than two regions, LICQ violated at
 * sampled parameters) report Skip with a reason instead of Fail. Residual
 * norms are measured relative to their natural data scales (multiplier and
 * objective magnitudes), and sample points whose magnitudes exceed what
 * double precision can resolve against a threshold are set aside rather
 * than counted as failures.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "mpqp/problem.hpp"

namespace mpqp {

enum class CheckStatus { Pass, Fail, Skip };

struct CheckEntry {
  std::string name;
  CheckStatus status = CheckStatus::Skip;
  double measured = 0.0;  // NaN when skipped
  double threshold = 0.0;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckEntry> entries;

  bool all_passed() const;  // true iff no entry failed
  std::size_t count(CheckStatus s) const;
};

/// Runs the full invariant suite with `samples` parameter draws from the
/// given seed. Deterministic for a fixed (problem, seed, samples).
CheckReport run_checks(const Problem& p, std::uint64_t seed, std::size_t samples);

/// Human-readable rendering, one line per check plus a summary line.
std::string render_text(const CheckReport& report);

/// Machine-readable rendering carrying the same fields.
std::string render_json(const CheckReport& report);

}  // namespace mpqp

#endif  // MPQP_CHECK_HPP_
