#include "totpos/order_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "totpos/quadrature.hpp"

namespace totpos {

namespace {

constexpr double kTailQuantile = 1.0 - 1e-12;

double ipow(double base, int e) {
  // 0^0 = 1 by convention (e == 0 short-circuits).
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  const unsigned __int128 wide = static_cast<unsigned __int128>(a) * b;
  if (wide > std::numeric_limits<std::uint64_t>::max())
    throw std::overflow_error(std::string(what) + ": coefficient exceeds 64 bits");
  return static_cast<std::uint64_t>(wide);
}

// C(n, k), exact; the running product is an integer after each division.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k, const char* what) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t t = 1; t <= k; ++t) {
    const unsigned __int128 wide = static_cast<unsigned __int128>(r) * (n - k + t);
    const unsigned __int128 q = wide / t;
    if (q > std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error(std::string(what) + ": coefficient exceeds 64 bits");
    r = static_cast<std::uint64_t>(q);
  }
  return r;
}

// d! / (d-k)! exact.
std::uint64_t falling_factorial(int d, int k, const char* what) {
  std::uint64_t r = 1;
  for (int t = 0; t < k; ++t) r = checked_mul(r, static_cast<std::uint64_t>(d - t), what);
  return r;
}

double m_coeff_real(const OrderStatContext& c) {
  try {
    return static_cast<double>(m_coeff(c));
  } catch (const std::overflow_error&) {
    return std::exp(std::lgamma(c.d + 1.0) - std::lgamma(static_cast<double>(c.i)) -
                    std::lgamma(static_cast<double>(c.j - c.i)) -
                    std::lgamma(c.d - c.j + 1.0));
  }
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double x, double a, double b) {
  constexpr double eps = 1e-16, fpmin = 1e-300;
  constexpr int max_iter = 400;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  throw std::runtime_error("reg_inc_beta: continued fraction did not converge");
}

}  // namespace

OrderStatContext::OrderStatContext(int d_, int i_, int j_) : d(d_), i(i_), j(j_) {
  if (d < 2) throw std::invalid_argument("OrderStatContext: d must be >= 2");
  if (!(1 <= i && i < j && j <= d))
    throw std::invalid_argument("OrderStatContext: ranks must satisfy 1 <= i < j <= d");
}

std::uint64_t m_coeff(const OrderStatContext& c) {
  const auto d = static_cast<std::uint64_t>(c.d);
  const auto i = static_cast<std::uint64_t>(c.i);
  const auto j = static_cast<std::uint64_t>(c.j);
  // d!/((i-1)!(j-i-1)!(d-j)!) = d(d-1) * multinomial(d-2; i-1, j-i-1, d-j)
  std::uint64_t m = checked_mul(d, d - 1, "m_coeff");
  m = checked_mul(m, binomial(d - 2, i - 1, "m_coeff"), "m_coeff");
  m = checked_mul(m, binomial(d - 1 - i, j - i - 1, "m_coeff"), "m_coeff");
  return m;
}

std::uint64_t m_coeff(int d, int i, int j) { return m_coeff(OrderStatContext(d, i, j)); }

double pair_density(const DistributionModel& model, const OrderStatContext& c,
                    double x, double y) {
  if (x > y) return 0.0;
  const double fx = model.cdf(x);
  const double diff = std::max(0.0, model.cdf(y) - fx);
  return m_coeff_real(c) * ipow(fx, c.i - 1) * ipow(diff, c.j - c.i - 1) *
         ipow(model.survival(y), c.d - c.j) * model.pdf(x) * model.pdf(y);
}

double first_k_density(const DistributionModel& model, int d, int k,
                       std::span<const double> xs) {
  if (d < 2 || k < 2 || k > d)
    throw std::invalid_argument("first_k_density: requires 2 <= k <= d");
  if (xs.size() != static_cast<std::size_t>(k))
    throw std::invalid_argument("first_k_density: point dimension must equal k");
  for (int l = 0; l + 1 < k; ++l)
    if (xs[l] > xs[l + 1]) return 0.0;

  double prod = static_cast<double>(falling_factorial(d, k, "first_k_density")) *
                ipow(model.survival(xs[k - 1]), d - k);
  for (double x : xs) prod *= model.pdf(x);
  return prod;
}

double reg_inc_beta(double u, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("reg_inc_beta: a and b must be positive");
  if (!(u >= 0.0 && u <= 1.0))
    throw std::domain_error("reg_inc_beta: u must lie in [0, 1]");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return 1.0;

  const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double front = std::exp(a * std::log(u) + b * std::log1p(-u) - lbeta);
  if (u < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(u, a, b) / a;
  return 1.0 - front * beta_cf(1.0 - u, b, a) / b;
}

double gap_survival_closed(const DistributionModel& model,
                           const OrderStatContext& c, double x, double y) {
  if (!(y >= 0.0)) throw std::domain_error("gap_survival_closed: y must be >= 0");
  const double sx = model.survival(x);
  if (!(sx > 0.0))
    throw std::domain_error("gap_survival_closed: conditioning on zero survival");
  const double u = std::clamp(model.survival(x + y) / sx, 0.0, 1.0);
  return reg_inc_beta(u, static_cast<double>(c.d - c.j + 1),
                      static_cast<double>(c.j - c.i));
}

double gap_survival_quadrature(const DistributionModel& model,
                               const OrderStatContext& c, double x, double y) {
  if (!(y >= 0.0)) throw std::domain_error("gap_survival_quadrature: y must be >= 0");
  const double sx = model.survival(x);
  if (!(sx > 0.0))
    throw std::domain_error("gap_survival_quadrature: conditioning on zero survival");

  const double hi = model.quantile(kTailQuantile);
  const double lo = x + y;
  if (lo >= hi) return 0.0;

  const int d = c.d, i = c.i, j = c.j;
  const double coeff =
      static_cast<double>(falling_factorial(d - i, 1, "gap_survival_quadrature")) *
      static_cast<double>(binomial(d - i - 1, j - i - 1, "gap_survival_quadrature"));
  // coeff = (d-i) * C(d-i-1, j-i-1) = (d-i)! / ((j-i-1)! (d-j)!)
  auto integrand = [&](double z) {
    const double u = std::clamp(model.survival(z) / sx, 0.0, 1.0);
    return coeff * ipow(1.0 - u, j - i - 1) * ipow(u, d - j) * model.pdf(z) / sx;
  };
  // The integrand decays like a power of S(z), so grade the panels at equal
  // survival ratios; equal-probability grading leaves polynomial tails with
  // one stretched panel that 64-node panels never resolve.
  auto bounds = [&](std::size_t panels) {
    return survival_graded_bounds(model, lo, hi, panels);
  };
  return std::clamp(integrate_adaptive(integrand, bounds, 1e-10), 0.0, 1.0);
}

CheckReport prd_check(const DistributionModel& model, const OrderStatContext& c,
                      std::span<const double> x_grid,
                      std::span<const double> y_grid, double tol) {
  if (x_grid.size() < 2)
    throw std::invalid_argument("prd_check: x_grid needs at least two points");
  for (std::size_t k = 1; k < x_grid.size(); ++k)
    if (!(x_grid[k] > x_grid[k - 1]))
      throw std::invalid_argument("prd_check: x_grid must be strictly increasing");
  for (double y : y_grid)
    if (!(y >= 0)) throw std::invalid_argument("prd_check: y values must be >= 0");

  CheckReport rep;
  rep.mode = CheckMode::prd;
  rep.tolerance = tol;
  std::size_t skipped = 0;
  std::string first_skip;

  for (std::size_t yi = 0; yi < y_grid.size(); ++yi) {
    const double y = y_grid[yi];
    bool have_prev = false;
    std::size_t prev_k = 0;
    double prev_g = 0.0;
    for (std::size_t k = 0; k < x_grid.size(); ++k) {
      if (!(model.survival(x_grid[k]) > 0.0)) {
        ++skipped;
        if (first_skip.empty())
          first_skip = "x=" + std::to_string(x_grid[k]) + ", y=" + std::to_string(y);
        continue;
      }
      const double g = gap_survival_closed(model, c, x_grid[k], y);
      if (have_prev) {
        ++rep.quadruples_checked;
        const double margin = g - prev_g;
        if (margin < rep.min_margin) rep.min_margin = margin;
        const double scale = std::max({1.0, std::fabs(g), std::fabs(prev_g)});
        if (margin < -tol * scale && rep.verdict == Verdict::pass) {
          rep.verdict = Verdict::fail;
          Witness w;
          w.pair = {prev_k, k};
          w.context = {yi};
          w.coords = {x_grid[prev_k], x_grid[k], y};
          rep.witness = std::move(w);
        }
      }
      have_prev = true;
      prev_k = k;
      prev_g = g;
    }
  }
  if (skipped > 0)
    rep.notices.push_back("skipped " + std::to_string(skipped) +
                          " grid points with zero survival (first at " + first_skip + ")");
  return rep;
}

double plrd_margin(const DistributionModel& model, const OrderStatContext& c,
                   double x, double xp, double y, double yp) {
  if (!(x <= xp) || !(y <= yp))
    throw std::invalid_argument("plrd_margin: requires x <= x' and y <= y'");

  // h(x',y) vanishes unless x' <= y; then the right-hand product is zero and
  // the margin is the (nonnegative) left-hand product.
  if (xp > y) return pair_density(model, c, xp, yp) * pair_density(model, c, x, y);

  // All four points sit on the chain x <= x' <= y <= y'.  Shared separable
  // factors multiply both products identically, so only the middle powers
  // differ:  margin = common * (A^p - B^p), A >= B >= 0.
  const double fx = model.cdf(x), fxp = model.cdf(xp);
  const double fy = model.cdf(y), fyp = model.cdf(yp);
  const double sy = model.survival(y), syp = model.survival(yp);
  const double m = m_coeff_real(c);
  const double common = m * m * ipow(fx * fxp, c.i - 1) * ipow(sy * syp, c.d - c.j) *
                        model.pdf(x) * model.pdf(xp) * model.pdf(y) * model.pdf(yp);
  const int p = c.j - c.i - 1;
  if (p == 0) return 0.0;
  const double a = std::max(0.0, fy - fx) * std::max(0.0, fyp - fxp);
  const double b = std::max(0.0, fyp - fx) * std::max(0.0, fy - fxp);
  return common * (ipow(a, p) - ipow(b, p));
}

double plrd_certificate(const DistributionModel& model, double x, double xp,
                        double y, double yp) {
  if (!(x <= xp) || !(y <= yp))
    throw std::invalid_argument("plrd_certificate: requires x <= x' and y <= y'");
  return (model.cdf(xp) - model.cdf(x)) * (model.cdf(yp) - model.cdf(y));
}

double cis_cond_survival(const DistributionModel& model, int d, int i,
                         double x, double x_prev) {
  if (d < 2 || i < 2 || i > d)
    throw std::invalid_argument("cis_cond_survival: requires 2 <= i <= d");
  const double sp = model.survival(x_prev);
  if (!(sp > 0.0))
    throw std::domain_error("cis_cond_survival: conditioning on zero survival");
  if (x < x_prev) return 1.0;
  return ipow(model.survival(x) / sp, d - i + 1);
}

SpacingContext::SpacingContext(int d_, int i_, double s) : d(d_), i(i_), partial_sum(s) {
  if (d < 2 || i < 2 || i > d)
    throw std::invalid_argument("SpacingContext: requires 2 <= i <= d");
  if (!(s >= 0.0) || !std::isfinite(s))
    throw std::invalid_argument("SpacingContext: partial sum must be finite and >= 0");
}

double spacing_cond_survival(const DistributionModel& model, int d, int i,
                             double x, double s) {
  if (d < 2 || i < 2 || i > d)
    throw std::invalid_argument("spacing_cond_survival: requires 2 <= i <= d");
  const double ss = model.survival(s);
  if (!(ss > 0.0))
    throw std::domain_error("spacing_cond_survival: conditioning on zero survival");
  if (x < 0.0) return 1.0;
  return ipow(model.survival(s + x) / ss, d - i + 1);
}

double spacing_cond_survival(const DistributionModel& model,
                             const SpacingContext& c, double x) {
  return spacing_cond_survival(model, c.d, c.i, x, c.partial_sum);
}

LatticeDensity discretize_pair_density(const DistributionModel& model,
                                       const OrderStatContext& c,
                                       std::span<const double> x_grid,
                                       std::span<const double> y_grid) {
  std::vector<double> values(x_grid.size() * y_grid.size());
  for (std::size_t xi = 0; xi < x_grid.size(); ++xi)
    for (std::size_t yi = 0; yi < y_grid.size(); ++yi)
      values[xi * y_grid.size() + yi] = pair_density(model, c, x_grid[xi], y_grid[yi]);
  return LatticeDensity({x_grid.size(), y_grid.size()},
                        {{x_grid.begin(), x_grid.end()}, {y_grid.begin(), y_grid.end()}},
                        std::move(values), Interpretation::density_samples);
}

}  // namespace totpos
