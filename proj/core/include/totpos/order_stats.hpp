#pragma once

#include <cstdint>
#include <span>

#include "totpos/distribution.hpp"
#include "totpos/lattice.hpp"
#include "totpos/report.hpp"

namespace totpos {

/// Sample size d with a pair of ranks 1 <= i < j <= d (1-based throughout).
struct OrderStatContext {
  int d;
  int i;
  int j;
  OrderStatContext(int d_, int i_, int j_);
};

/// Exact combinatorial coefficient d! / ((i-1)! (j-i-1)! (d-j)!).
/// Evaluated multiplicatively through binomials with 128-bit intermediates;
/// throws std::overflow_error if the result leaves 64 bits.
std::uint64_t m_coeff(const OrderStatContext& c);
std::uint64_t m_coeff(int d, int i, int j);

/// Joint density of the (i, j) order statistics at (x, y):
///   m * F(x)^(i-1) * (F(y)-F(x))^(j-i-1) * (1-F(y))^(d-j) * f(x) f(y)
/// on x <= y, zero elsewhere, with 0^0 = 1.
double pair_density(const DistributionModel& model, const OrderStatContext& c,
                    double x, double y);

/// Joint density of the k smallest order statistics (2 <= k <= d) at the
/// chain x_1 <= ... <= x_k:
///   d!/(d-k)! * (1 - F(x_k))^(d-k) * prod_l f(x_l)
/// zero off the chain.
double first_k_density(const DistributionModel& model, int d, int k,
                       std::span<const double> xs);

/// Regularized incomplete beta I_u(a, b) for a, b > 0 and u in [0, 1].
/// Continued fraction (modified Lentz) with the symmetry split at
/// u = (a+1)/(a+b+2); absolute error <= 1e-12.  Nondecreasing in u with
/// I_0 = 0 and I_1 = 1.
double reg_inc_beta(double u, double a, double b);

/// P[X_(j) - X_(i) > y | X_(i) = x] in closed form:
///   I_u(d-j+1, j-i) at u = S(x+y)/S(x).
/// Requires y >= 0 and S(x) > 0 (throws std::domain_error otherwise).
double gap_survival_closed(const DistributionModel& model,
                           const OrderStatContext& c, double x, double y);

/// The same probability by numerical integration of the conditional density
/// of X_(j) given X_(i) = x from x+y to the 1 - 1e-12 quantile, with
/// 64-node Gauss-Legendre panels doubled until successive estimates agree
/// to 1e-10.  Throws QuadratureError on non-convergence.
double gap_survival_quadrature(const DistributionModel& model,
                               const OrderStatContext& c, double x, double y);

/// Positive-regression-dependence probe: for each y in y_grid,
/// gap_survival_closed(x, y) must be nondecreasing along x_grid.  Grid
/// points with zero survival are skipped with a notice.
CheckReport prd_check(const DistributionModel& model, const OrderStatContext& c,
                      std::span<const double> x_grid,
                      std::span<const double> y_grid, double tol = 1e-12);

/// Likelihood-ratio-dependence margin for the (i, j) order-statistic pair:
///   h(x', y') h(x, y) - h(x', y) h(x, y')   for x <= x', y <= y'.
/// Nonnegative for every model.  Evaluated through the common-factor form
/// (shared separable factors times A^p - B^p) so that mathematically tied
/// products cancel exactly instead of through floating-point subtraction.
double plrd_margin(const DistributionModel& model, const OrderStatContext& c,
                   double x, double xp, double y, double yp);

/// The reduced nonnegativity certificate (F(x')-F(x)) * (F(y')-F(y)).
double plrd_certificate(const DistributionModel& model, double x, double xp,
                        double y, double yp);

/// P[X_(i) > x | X_(i-1) = x_prev, earlier order statistics arbitrary]:
///   (S(x)/S(x_prev))^(d-i+1) for x >= x_prev, else 1.
/// Requires 2 <= i <= d and S(x_prev) > 0.
double cis_cond_survival(const DistributionModel& model, int d, int i,
                         double x, double x_prev);

/// Spacing context: spacing rank i in 2..d with s the sum of the earlier
/// spacings (equivalently the conditioning value of X_(i-1)).
struct SpacingContext {
  int d;
  int i;
  double partial_sum;
  SpacingContext(int d_, int i_, double s);
};

/// P[spacing_i > x | earlier spacings summing to s]:
///   (S(s+x)/S(s))^(d-i+1) for x >= 0, else 1.
/// Nondecreasing in s exactly when the model has decreasing failure rate.
double spacing_cond_survival(const DistributionModel& model, int d, int i,
                             double x, double s);
double spacing_cond_survival(const DistributionModel& model,
                             const SpacingContext& c, double x);

/// Tabulate pair_density on x_grid times y_grid as a 2D density-samples
/// lattice (axes are the grids).
LatticeDensity discretize_pair_density(const DistributionModel& model,
                                       const OrderStatContext& c,
                                       std::span<const double> x_grid,
                                       std::span<const double> y_grid);

}  // namespace totpos
