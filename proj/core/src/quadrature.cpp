#include "totpos/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace totpos {

namespace {

GaussLegendre64 compute_gl64() {
  constexpr int n = 64;
  GaussLegendre64 rule{};
  for (int k = 0; k < (n + 1) / 2; ++k) {
    // Tricomi-style initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.node[k] = -x;  // guesses start from the right; store ascending
    rule.weight[k] = w;
    rule.node[n - 1 - k] = x;
    rule.weight[n - 1 - k] = w;
  }
  return rule;
}

}  // namespace

const GaussLegendre64& gl64() {
  static const GaussLegendre64 rule = compute_gl64();
  return rule;
}

double integrate_gl64(const std::function<double(double)>& f, double a, double b) {
  const auto& rule = gl64();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (int k = 0; k < 64; ++k) sum += rule.weight[k] * f(mid + half * rule.node[k]);
  return sum * half;
}

double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& bounds) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k)
    sum += integrate_gl64(f, bounds[k], bounds[k + 1]);
  return sum;
}

std::vector<double> quantile_graded_bounds(const DistributionModel& model,
                                           double lo, double hi,
                                           std::size_t panels) {
  std::vector<double> bounds(panels + 1);
  bounds[0] = lo;
  bounds[panels] = hi;
  const double qa = model.cdf(lo), qb = model.cdf(hi);
  const bool degenerate = !(qb > qa);
  for (std::size_t k = 1; k < panels; ++k) {
    double b;
    if (degenerate) {
      b = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(panels);
    } else {
      const double q = qa + (qb - qa) * static_cast<double>(k) / static_cast<double>(panels);
      b = model.quantile(q);
    }
    bounds[k] = std::clamp(b, bounds[k - 1], hi);
  }
  return bounds;
}

std::vector<double> survival_graded_bounds(const DistributionModel& model,
                                           double lo, double hi,
                                           std::size_t panels) {
  std::vector<double> bounds(panels + 1);
  bounds[0] = lo;
  bounds[panels] = hi;
  const double sa = model.survival(lo), sb = model.survival(hi);
  const bool degenerate = !(sa > sb) || !(sb > 0.0);
  const double log_ratio = degenerate ? 0.0 : std::log(sb / sa);
  for (std::size_t k = 1; k < panels; ++k) {
    double b;
    if (degenerate) {
      b = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(panels);
    } else {
      const double s =
          sa * std::exp(log_ratio * static_cast<double>(k) / static_cast<double>(panels));
      b = model.quantile(1.0 - s);
    }
    bounds[k] = std::clamp(b, bounds[k - 1], hi);
  }
  return bounds;
}

double integrate_adaptive(const std::function<double(double)>& f,
                          const std::function<std::vector<double>(std::size_t)>& make_bounds,
                          double agree_tol, std::size_t max_panels) {
  double prev = 0.0;
  bool have_prev = false;
  for (std::size_t panels = 1; panels <= max_panels; panels *= 2) {
    const double est = integrate_panels(f, make_bounds(panels));
    if (have_prev && std::fabs(est - prev) < agree_tol) return est;
    prev = est;
    have_prev = true;
  }
  throw QuadratureError("integrate_adaptive: estimates did not stabilize within " +
                        std::to_string(max_panels) + " panels");
}

}  // namespace totpos
