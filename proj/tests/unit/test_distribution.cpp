#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "totpos/distribution.hpp"

using namespace totpos;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<DistributionModel> all_models() {
  return {DistributionModel::uniform(0.0, 1.0), DistributionModel::uniform(-2.0, 3.0),
          DistributionModel::exponential(1.0), DistributionModel::exponential(2.5),
          DistributionModel::pareto(1.0, 2.0), DistributionModel::pareto(0.5, 1.5),
          DistributionModel::weibull(0.5, 1.0), DistributionModel::weibull(2.0, 1.0),
          DistributionModel::weibull(1.0, 3.0)};
}

}  // namespace

TEST_CASE("factories validate their parameters") {
  CHECK_THROWS_AS(DistributionModel::uniform(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DistributionModel::uniform(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DistributionModel::exponential(0.0), std::invalid_argument);
  CHECK_THROWS_AS(DistributionModel::exponential(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(DistributionModel::pareto(0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(DistributionModel::pareto(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(DistributionModel::weibull(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DistributionModel::weibull(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("spec strings parse and round-trip") {
  const auto exp1 = DistributionModel::parse("exp:1");
  CHECK(exp1.family() == Family::exponential);
  CHECK(exp1.params() == std::vector<double>{1.0});

  const auto uni = DistributionModel::parse("uniform:0,1");
  CHECK(uni.family() == Family::uniform);
  CHECK(uni.params() == std::vector<double>{0.0, 1.0});

  const auto par = DistributionModel::parse("pareto:1,2");
  CHECK(par.params() == std::vector<double>{1.0, 2.0});

  const auto wei = DistributionModel::parse("weibull:0.5,1");
  CHECK(wei.params() == std::vector<double>{0.5, 1.0});

  for (const auto& m : all_models()) {
    const auto back = DistributionModel::parse(m.spec_string());
    CHECK(back.family() == m.family());
    CHECK(back.params() == m.params());
  }
}

TEST_CASE("malformed spec strings name the offending part") {
  CHECK_THROWS_AS(DistributionModel::parse("exp"), std::invalid_argument);
  CHECK_THROWS_AS(DistributionModel::parse("gauss:1"), std::invalid_argument);
  CHECK_THROWS_AS(DistributionModel::parse("exp:0"), std::invalid_argument);
  CHECK_THROWS_AS(DistributionModel::parse("exp:1,2"), std::invalid_argument);
  CHECK_THROWS_AS(DistributionModel::parse("uniform:1"), std::invalid_argument);
  CHECK_THROWS_AS(DistributionModel::parse("uniform:1,0"), std::invalid_argument);
  CHECK_THROWS_AS(DistributionModel::parse("exp:abc"), std::invalid_argument);
  CHECK_THROWS_AS(DistributionModel::parse("weibull:1,2x"), std::invalid_argument);
}

TEST_CASE("frozen distribution values") {
  const auto uni = DistributionModel::uniform(0.0, 1.0);
  CHECK(uni.cdf(0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(uni.pdf(0.3) == 1.0);
  CHECK(uni.survival(0.3) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(uni.cdf(-1.0) == 0.0);
  CHECK(uni.cdf(2.0) == 1.0);
  CHECK(uni.pdf(2.0) == 0.0);
  CHECK(uni.quantile(0.25) == 0.25);

  const auto exp2 = DistributionModel::exponential(2.0);
  CHECK(exp2.cdf(0.5) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(exp2.pdf(0.5) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(exp2.survival(0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(exp2.quantile(1.0 - std::exp(-1.0)) == doctest::Approx(0.5).epsilon(1e-12));

  const auto par = DistributionModel::pareto(1.0, 2.0);
  CHECK(par.cdf(2.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(par.pdf(2.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(par.survival(2.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(par.cdf(0.5) == 0.0);
  CHECK(par.survival(0.5) == 1.0);
  CHECK(par.quantile(0.75) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(par.support_lo() == 1.0);

  const auto wei = DistributionModel::weibull(0.5, 1.0);
  CHECK(wei.cdf(1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(wei.pdf(1.0) == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(wei.survival(4.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
}

TEST_CASE("weibull density at the left endpoint by shape") {
  CHECK(DistributionModel::weibull(0.5, 1.0).pdf(0.0) == kInf);
  CHECK(DistributionModel::weibull(1.0, 3.0).pdf(0.0) == doctest::Approx(1.0 / 3.0));
  CHECK(DistributionModel::weibull(2.0, 1.0).pdf(0.0) == 0.0);
  CHECK(DistributionModel::weibull(0.5, 1.0).pdf(-1.0) == 0.0);
}

TEST_CASE("survival agrees with one minus cdf") {
  for (const auto& m : all_models()) {
    for (double u : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.9999}) {
      const double x = m.quantile(u);
      CHECK(std::fabs((1.0 - m.cdf(x)) - m.survival(x)) <= 1e-15);
    }
  }
}

TEST_CASE("survival keeps tail precision where one minus cdf cannot") {
  const auto exp1 = DistributionModel::exponential(1.0);
  CHECK(exp1.survival(700.0) > 0.0);
  CHECK(exp1.survival(700.0) ==
        doctest::Approx(std::exp(-700.0)).epsilon(1e-12));
  CHECK(1.0 - exp1.cdf(700.0) == 0.0);  // the naive form underflows

  const auto wei = DistributionModel::weibull(2.0, 1.0);
  CHECK(wei.survival(26.0) == doctest::Approx(std::exp(-676.0)).epsilon(1e-12));
}

TEST_CASE("quantile inverts the cdf") {
  for (const auto& m : all_models()) {
    for (double u = 1e-9; u < 1.0 - 1e-9; u = u < 0.5 ? u * 10 : 1.0 - (1.0 - u) / 10) {
      CHECK(std::fabs(m.cdf(m.quantile(u)) - u) <= 1e-10);
    }
  }
}

TEST_CASE("quantile domain and endpoints") {
  const auto exp1 = DistributionModel::exponential(1.0);
  CHECK_THROWS_AS(exp1.quantile(-0.1), std::domain_error);
  CHECK_THROWS_AS(exp1.quantile(1.5), std::domain_error);
  CHECK(exp1.quantile(0.0) == 0.0);
  CHECK(exp1.quantile(1.0) == kInf);
  CHECK(DistributionModel::uniform(0.0, 1.0).quantile(1.0) == 1.0);
  CHECK(DistributionModel::pareto(1.0, 2.0).quantile(0.0) == doctest::Approx(1.0));
}

TEST_CASE("support bounds") {
  CHECK(DistributionModel::uniform(-2.0, 3.0).support_lo() == -2.0);
  CHECK(DistributionModel::uniform(-2.0, 3.0).support_hi() == 3.0);
  CHECK(DistributionModel::exponential(1.0).support_lo() == 0.0);
  CHECK(DistributionModel::exponential(1.0).support_hi() == kInf);
  CHECK(DistributionModel::pareto(0.5, 1.5).support_lo() == 0.5);
  CHECK(DistributionModel::weibull(2.0, 1.0).support_lo() == 0.0);
}

TEST_CASE("pdf integrates to the cdf increment") {
  // midpoint-rule consistency probe on a mid-range window
  for (const auto& m : all_models()) {
    const double lo = m.quantile(0.2), hi = m.quantile(0.7);
    const int n = 20000;
    const double h = (hi - lo) / n;
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += m.pdf(lo + (k + 0.5) * h) * h;
    CHECK(acc == doctest::Approx(m.cdf(hi) - m.cdf(lo)).epsilon(1e-6));
  }
}
