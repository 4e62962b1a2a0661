#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "totpos/distribution.hpp"

namespace totpos {

/// Raised when panel doubling fails to reach the requested agreement.
struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 64-point Gauss-Legendre rule on [-1, 1], nodes ascending.  Computed once
/// by Newton iteration on the Legendre recurrence; accurate to ~1e-15.
struct GaussLegendre64 {
  std::array<double, 64> node;
  std::array<double, 64> weight;
};
const GaussLegendre64& gl64();

/// Integral of f over [a, b] with one 64-node panel.
double integrate_gl64(const std::function<double(double)>& f, double a, double b);

/// Integral of f over consecutive panels [bounds[k], bounds[k+1]].
double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& bounds);

/// Panel boundaries from lo to hi placed at equal probability increments of
/// the model between cdf(lo) and cdf(hi), so tails get geometrically finer
/// panels.  Falls back to equal widths when the probability range
/// degenerates.
std::vector<double> quantile_graded_bounds(const DistributionModel& model,
                                           double lo, double hi,
                                           std::size_t panels);

/// Panel boundaries from lo to hi placed at equal ratios of the model's
/// survival function (geometric in S).  Integrands that decay with a power
/// of S(z) keep a bounded share of their mass in every panel this way, even
/// for polynomial tails where equal-probability grading leaves one
/// unresolvable stretched panel.  Falls back to equal widths when the
/// survival range degenerates.
std::vector<double> survival_graded_bounds(const DistributionModel& model,
                                           double lo, double hi,
                                           std::size_t panels);

/// Panel-doubling driver: evaluates integrate_panels with bounds from
/// make_bounds(panels) for panels = 1, 2, 4, ... until two successive
/// estimates differ by less than agree_tol, then returns the last.  Throws
/// QuadratureError past max_panels.
double integrate_adaptive(const std::function<double(double)>& f,
                          const std::function<std::vector<double>(std::size_t)>& make_bounds,
                          double agree_tol, std::size_t max_panels = 4096);

}  // namespace totpos
