#pragma once

#include <cstdint>
#include <span>

#include "totpos/distribution.hpp"
#include "totpos/lattice.hpp"
#include "totpos/report.hpp"

namespace totpos {

struct CheckOptions {
  double tol = 1e-12;
  /// Compare sums of logs instead of products.  log 0 = -inf; a -inf
  /// right-hand side can never be violated, a -inf left-hand side against a
  /// finite right-hand side always is.  Use for mass scales where products
  /// underflow.
  bool log_domain = false;
};

/// Pairwise two-by-two inequality in direction alpha: for every coordinate
/// pair, every fixed context of the remaining axes, and every index
/// quadruple (lo < hi on both axes) of the alpha-reflected lattice,
///   f(lo,lo) * f(hi,hi) >= f(hi,lo) * f(lo,hi)
/// up to the scaled tolerance.  Scans everything; the witness is the first
/// violation and min_margin the global minimum.
CheckReport check_pairs(const LatticeDensity& g, const Direction& alpha,
                        const CheckOptions& opts = {});

/// Join/meet inequality over every unordered pair of lattice points x, y of
/// the alpha-reflected lattice:
///   f(max(x,y)) * f(min(x,y)) >= f(x) * f(y)
/// with componentwise index max/min.  Refuses lattices with
/// cells^2 > pair_budget; raise the budget explicitly for larger scans.
CheckReport check_full(const LatticeDensity& g, const Direction& alpha,
                       const CheckOptions& opts = {},
                       std::uint64_t pair_budget = 100'000'000);

/// Telescoping split inequality: for every componentwise-ordered index pair
/// x <= x' of the alpha-reflected lattice and every split s in 1..d-1,
///   f(x) * f(x') >= f(x'_1..x'_s, x_{s+1}..x_d) * f(x_1..x_s, x'_{s+1}..x'_d).
/// Equivalent in verdict to check_pairs and check_full away from the
/// tolerance band.
CheckReport check_chain(const LatticeDensity& g, const Direction& alpha,
                        const CheckOptions& opts = {});

/// check_pairs with the inequality reversed (reverse-rule densities).
/// Margins are reported as rhs - lhs so that fail still means
/// min_margin < -tol.
CheckReport check_negative(const LatticeDensity& g, const Direction& alpha,
                           const CheckOptions& opts = {});

/// Pairwise inequality on the strict upper-orthant survival of the
/// alpha-reflected pmf.  A density passing check_pairs passes this check.
CheckReport check_survival(const LatticeDensity& g, const Direction& alpha,
                           const CheckOptions& opts = {});

/// Decreasing failure rate probe: for each y in y_grid the ratio
/// S(x+y)/S(x) must be nondecreasing along x_grid.  Grid points with zero
/// survival are skipped with a notice.  Witness coords give (x, x', y).
CheckReport dfr_check(const DistributionModel& model,
                      std::span<const double> x_grid,
                      std::span<const double> y_grid, double tol = 1e-12);

}  // namespace totpos
