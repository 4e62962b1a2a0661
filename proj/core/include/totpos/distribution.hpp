#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace totpos {

enum class Family { uniform, exponential, pareto, weibull };

/// One-dimensional absolutely continuous model with closed-form cdf, pdf,
/// survival and quantile.  Families and spec strings:
///   uniform:a,b    flat on [a, b], b > a
///   exp:lambda     rate lambda > 0 on [0, inf)
///   pareto:xm,a    scale xm > 0, shape a > 0 on [xm, inf)
///   weibull:k,lam  shape k > 0, scale lam > 0 on [0, inf)
/// survival(x) agrees with 1 - cdf(x) to within 1e-15 but is computed
/// directly for tail accuracy.  quantile(u) is defined for u in [0, 1);
/// quantile(cdf-roundtrip) holds to 1e-10 on [1e-9, 1 - 1e-9].
class DistributionModel {
public:
  static DistributionModel uniform(double a, double b);
  static DistributionModel exponential(double lambda);
  static DistributionModel pareto(double xm, double shape);
  static DistributionModel weibull(double shape, double scale);

  /// Parse a spec string such as "exp:1" or "uniform:0,1".  Throws
  /// std::invalid_argument naming the offending part.
  static DistributionModel parse(std::string_view spec);

  double cdf(double x) const;
  double pdf(double x) const;
  double survival(double x) const;
  double quantile(double u) const;

  double support_lo() const;
  double support_hi() const;  // +inf for unbounded families

  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  std::string spec_string() const;

private:
  DistributionModel(Family f, std::vector<double> p);

  Family family_;
  std::vector<double> params_;
};

}  // namespace totpos
