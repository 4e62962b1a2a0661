#include "totpos/distribution.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace totpos {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_number(std::string_view text, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(std::string(text), &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("model spec: cannot parse " + what + " from '" +
                                std::string(text) + "'");
  }
}

}  // namespace

DistributionModel::DistributionModel(Family f, std::vector<double> p)
    : family_(f), params_(std::move(p)) {}

DistributionModel DistributionModel::uniform(double a, double b) {
  if (!(std::isfinite(a) && std::isfinite(b) && b > a))
    throw std::invalid_argument("uniform: requires finite a < b");
  return DistributionModel(Family::uniform, {a, b});
}

DistributionModel DistributionModel::exponential(double lambda) {
  if (!(std::isfinite(lambda) && lambda > 0))
    throw std::invalid_argument("exp: rate must be positive");
  return DistributionModel(Family::exponential, {lambda});
}

DistributionModel DistributionModel::pareto(double xm, double shape) {
  if (!(std::isfinite(xm) && xm > 0 && std::isfinite(shape) && shape > 0))
    throw std::invalid_argument("pareto: scale and shape must be positive");
  return DistributionModel(Family::pareto, {xm, shape});
}

DistributionModel DistributionModel::weibull(double shape, double scale) {
  if (!(std::isfinite(shape) && shape > 0 && std::isfinite(scale) && scale > 0))
    throw std::invalid_argument("weibull: shape and scale must be positive");
  return DistributionModel(Family::weibull, {shape, scale});
}

DistributionModel DistributionModel::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("model spec: expected 'family:params' in '" +
                                std::string(spec) + "'");
  const std::string_view name = spec.substr(0, colon);
  const std::string_view args = spec.substr(colon + 1);
  const auto comma = args.find(',');

  auto one = [&](const char* what) {
    if (comma != std::string_view::npos)
      throw std::invalid_argument("model spec: " + std::string(name) +
                                  " takes one parameter");
    return parse_number(args, what);
  };
  auto two = [&](const char* w1, const char* w2) {
    if (comma == std::string_view::npos)
      throw std::invalid_argument("model spec: " + std::string(name) +
                                  " takes two parameters");
    return std::pair<double, double>{parse_number(args.substr(0, comma), w1),
                                     parse_number(args.substr(comma + 1), w2)};
  };

  if (name == "exp") return exponential(one("rate"));
  if (name == "uniform") {
    auto [a, b] = two("a", "b");
    return uniform(a, b);
  }
  if (name == "pareto") {
    auto [xm, a] = two("xm", "shape");
    return pareto(xm, a);
  }
  if (name == "weibull") {
    auto [k, lam] = two("shape", "scale");
    return weibull(k, lam);
  }
  throw std::invalid_argument("model spec: unknown family '" + std::string(name) + "'");
}

double DistributionModel::cdf(double x) const {
  switch (family_) {
    case Family::uniform: {
      const double a = params_[0], b = params_[1];
      if (x <= a) return 0.0;
      if (x >= b) return 1.0;
      return (x - a) / (b - a);
    }
    case Family::exponential:
      return x <= 0 ? 0.0 : -std::expm1(-params_[0] * x);
    case Family::pareto: {
      const double xm = params_[0], a = params_[1];
      return x <= xm ? 0.0 : -std::expm1(a * std::log(xm / x));
    }
    case Family::weibull: {
      const double k = params_[0], lam = params_[1];
      return x <= 0 ? 0.0 : -std::expm1(-std::pow(x / lam, k));
    }
  }
  return 0.0;
}

double DistributionModel::survival(double x) const {
  switch (family_) {
    case Family::uniform: {
      const double a = params_[0], b = params_[1];
      if (x <= a) return 1.0;
      if (x >= b) return 0.0;
      return (b - x) / (b - a);
    }
    case Family::exponential:
      return x <= 0 ? 1.0 : std::exp(-params_[0] * x);
    case Family::pareto: {
      const double xm = params_[0], a = params_[1];
      return x <= xm ? 1.0 : std::exp(a * std::log(xm / x));
    }
    case Family::weibull: {
      const double k = params_[0], lam = params_[1];
      return x <= 0 ? 1.0 : std::exp(-std::pow(x / lam, k));
    }
  }
  return 0.0;
}

double DistributionModel::pdf(double x) const {
  switch (family_) {
    case Family::uniform: {
      const double a = params_[0], b = params_[1];
      return (x < a || x > b) ? 0.0 : 1.0 / (b - a);
    }
    case Family::exponential:
      return x < 0 ? 0.0 : params_[0] * std::exp(-params_[0] * x);
    case Family::pareto: {
      const double xm = params_[0], a = params_[1];
      return x < xm ? 0.0 : a / x * std::exp(a * std::log(xm / x));
    }
    case Family::weibull: {
      const double k = params_[0], lam = params_[1];
      if (x < 0) return 0.0;
      if (x == 0) {
        // Density diverges for shape < 1; callers must keep grids off 0.
        if (k < 1) return kInf;
        return k == 1 ? 1.0 / lam : 0.0;
      }
      const double t = std::pow(x / lam, k);
      return k / x * t * std::exp(-t);
    }
  }
  return 0.0;
}

double DistributionModel::quantile(double u) const {
  if (!(u >= 0.0 && u < 1.0) && u != 1.0)
    throw std::domain_error("quantile: u must lie in [0, 1]");
  switch (family_) {
    case Family::uniform: {
      const double a = params_[0], b = params_[1];
      return a + u * (b - a);
    }
    case Family::exponential:
      return -std::log1p(-u) / params_[0];
    case Family::pareto:
      return params_[0] * std::exp(-std::log1p(-u) / params_[1]);
    case Family::weibull:
      return params_[1] * std::pow(-std::log1p(-u), 1.0 / params_[0]);
  }
  return 0.0;
}

double DistributionModel::support_lo() const {
  switch (family_) {
    case Family::uniform:
      return params_[0];
    case Family::exponential:
    case Family::weibull:
      return 0.0;
    case Family::pareto:
      return params_[0];
  }
  return 0.0;
}

double DistributionModel::support_hi() const {
  return family_ == Family::uniform ? params_[1] : kInf;
}

std::string DistributionModel::spec_string() const {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  switch (family_) {
    case Family::uniform:
      return "uniform:" + num(params_[0]) + "," + num(params_[1]);
    case Family::exponential:
      return "exp:" + num(params_[0]);
    case Family::pareto:
      return "pareto:" + num(params_[0]) + "," + num(params_[1]);
    case Family::weibull:
      return "weibull:" + num(params_[0]) + "," + num(params_[1]);
  }
  return "";
}

}  // namespace totpos
