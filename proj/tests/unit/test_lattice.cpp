#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "totpos/lattice.hpp"
#include "totpos/monte_carlo.hpp"

using namespace totpos;

namespace {

LatticeDensity random_pmf(std::mt19937_64& rng, std::vector<std::size_t> shape) {
  std::size_t cells = 1;
  for (std::size_t n : shape) cells *= n;
  std::vector<double> values(cells);
  double sum = 0.0;
  for (double& v : values) {
    v = uniform01(rng) + 1e-3;
    sum += v;
  }
  for (double& v : values) v /= sum;
  return LatticeDensity::with_unit_axes(std::move(shape), std::move(values),
                                        Interpretation::pmf);
}

}  // namespace

TEST_CASE("construction validates shape, axes, values, and pmf mass") {
  CHECK_THROWS_AS(LatticeDensity({2}, {{0.0, 1.0}}, {0.5, -0.1}, Interpretation::pmf),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      LatticeDensity({2}, {{0.0, 1.0}}, {0.5, std::nan("")}, Interpretation::pmf),
      std::invalid_argument);
  CHECK_THROWS_AS(LatticeDensity({2}, {{1.0, 0.0}}, {0.5, 0.5}, Interpretation::pmf),
                  std::invalid_argument);
  CHECK_THROWS_AS(LatticeDensity({2}, {{0.0, 1.0, 2.0}}, {0.5, 0.5}, Interpretation::pmf),
                  std::invalid_argument);
  CHECK_THROWS_AS(LatticeDensity({2}, {{0.0, 1.0}}, {0.5}, Interpretation::pmf),
                  std::invalid_argument);
  CHECK_THROWS_AS(LatticeDensity({2}, {{0.0, 1.0}}, {0.9, 0.9}, Interpretation::pmf),
                  std::invalid_argument);
  // the same overweight values are fine as density samples
  CHECK_NOTHROW(
      LatticeDensity({2}, {{0.0, 1.0}}, {0.9, 0.9}, Interpretation::density_samples));

  const auto g = LatticeDensity::with_unit_axes({2, 3}, {1, 2, 3, 4, 5, 6},
                                                Interpretation::density_samples);
  CHECK(g.strides() == std::vector<std::size_t>{3, 1});
  const std::size_t idx[] = {1, 2};
  CHECK(g.value_at(idx) == 6);
}

TEST_CASE("reflect mirrors flagged axes and is an involution") {
  // alpha = (1,-1) on a 2x2: columns swap
  const auto g = LatticeDensity({2, 2}, {{0.0, 1.0}, {0.0, 1.0}}, {1, 2, 3, 4},
                                Interpretation::density_samples);
  const Direction alpha({1, -1});
  const auto r = reflect(g, alpha);
  CHECK(r.values() == std::vector<double>{2, 1, 4, 3});
  CHECK(r.axes()[0] == std::vector<double>{0.0, 1.0});
  CHECK(r.axes()[1] == std::vector<double>{-1.0, 0.0});

  const auto back = reflect(r, alpha);
  CHECK(back.values() == g.values());
  CHECK(back.axes() == g.axes());

  std::mt19937_64 rng(1234);
  for (int t = 0; t < 20; ++t) {
    const auto f = random_pmf(rng, {2, 3, 2});
    std::vector<int> signs(3);
    for (int& s : signs) s = uniform01(rng) < 0.5 ? 1 : -1;
    const Direction a(signs);
    const auto twice = reflect(reflect(f, a), a);
    CHECK(twice.values() == f.values());
    // multiset of values preserved
    auto v1 = f.values(), v2 = reflect(f, a).values();
    std::sort(v1.begin(), v1.end());
    std::sort(v2.begin(), v2.end());
    CHECK(v1 == v2);
  }
}

TEST_CASE("marginalize sums out dropped axes") {
  const auto g = LatticeDensity({2, 2}, {{0.0, 1.0}, {0.0, 1.0}},
                                {0.1, 0.2, 0.3, 0.4}, Interpretation::pmf);
  const auto m = marginalize(g, {0});
  CHECK(m.dim() == 1);
  CHECK(m.values()[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(m.values()[1] == doctest::Approx(0.7).epsilon(1e-15));

  // uniform 3x3x3, keep the middle axis: uniform 1D
  std::vector<double> u(27, 1.0 / 27.0);
  const auto cube = LatticeDensity::with_unit_axes({3, 3, 3}, u, Interpretation::pmf);
  const auto mid = marginalize(cube, {1});
  for (double v : mid.values()) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  CHECK_THROWS_AS(marginalize(g, {}), std::invalid_argument);
  CHECK_THROWS_AS(marginalize(g, {2}), std::invalid_argument);
  CHECK_THROWS_AS(marginalize(g, {1, 0}), std::invalid_argument);
  const auto dens = LatticeDensity::with_unit_axes({2}, {1.0, 2.0},
                                                   Interpretation::density_samples);
  CHECK_THROWS_AS(marginalize(dens, {0}), std::invalid_argument);
}

TEST_CASE("marginalize conserves mass and composes") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 10; ++t) {
    const auto f = random_pmf(rng, {3, 2, 4});
    const auto m = marginalize(f, {0, 2});
    CHECK(m.total_mass() == doctest::Approx(f.total_mass()).epsilon(1e-12));
    // composing with a second marginalization matches the direct one
    const auto m2 = marginalize(m, {1});
    const auto direct = marginalize(f, {2});
    REQUIRE(m2.size() == direct.size());
    for (std::size_t p = 0; p < m2.size(); ++p)
      CHECK(m2.values()[p] == doctest::Approx(direct.values()[p]).epsilon(1e-12));
  }
}

TEST_CASE("product forms the independent concatenation") {
  const auto a = LatticeDensity::with_unit_axes({2}, {0.25, 0.75}, Interpretation::pmf);
  const auto b = LatticeDensity::with_unit_axes({2}, {0.5, 0.5}, Interpretation::pmf);
  const auto ab = product(a, b);
  CHECK(ab.dim() == 2);
  CHECK(ab.values() == std::vector<double>{0.125, 0.125, 0.375, 0.375});
  CHECK(std::fabs(ab.total_mass() - a.total_mass() * b.total_mass()) <= 1e-12);

  // marginalizing the product recovers the factors
  const auto back = marginalize(ab, {0});
  CHECK(back.values()[0] == doctest::Approx(0.25).epsilon(1e-14));

  const auto dens = LatticeDensity::with_unit_axes({2}, {1.0, 2.0},
                                                   Interpretation::density_samples);
  CHECK_THROWS_AS(product(a, dens), std::invalid_argument);
}

TEST_CASE("relabel_axes replaces coordinates and keeps values") {
  const auto g = LatticeDensity({2, 2}, {{0.0, 1.0}, {0.0, 1.0}},
                                {0.1, 0.2, 0.3, 0.4}, Interpretation::pmf);
  AxisRelabel r;
  r.axes = {{-5.0, 10.0}, {0.25, 0.5}};
  const auto h = relabel_axes(g, r);
  CHECK(h.values() == g.values());
  CHECK(h.axes()[0] == std::vector<double>{-5.0, 10.0});

  AxisRelabel bad;
  bad.axes = {{10.0, -5.0}, {0.25, 0.5}};
  CHECK_THROWS_AS(relabel_axes(g, bad), std::invalid_argument);
  AxisRelabel wrong_len;
  wrong_len.axes = {{-5.0, 10.0, 20.0}, {0.25, 0.5}};
  CHECK_THROWS_AS(relabel_axes(g, wrong_len), std::invalid_argument);
}

TEST_CASE("survival_upper computes strict upper-orthant mass") {
  // one axis: strict suffix sums
  const auto g1 = LatticeDensity::with_unit_axes({3}, {0.2, 0.3, 0.5}, Interpretation::pmf);
  const auto s1 = survival_upper(g1);
  CHECK(s1.values()[0] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(s1.values()[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s1.values()[2] == 0.0);

  // 2x2 uniform pmf: only the (0,0) corner sees the strictly greater cell
  const auto g2 = LatticeDensity::with_unit_axes({2, 2}, {0.25, 0.25, 0.25, 0.25},
                                                 Interpretation::pmf);
  const auto s2 = survival_upper(g2);
  CHECK(s2.values() == std::vector<double>{0.25, 0.0, 0.0, 0.0});
  CHECK(s2.interpretation() == Interpretation::density_samples);
}

TEST_CASE("survival_upper matches brute enumeration and is nonincreasing") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 15; ++t) {
    const auto f = random_pmf(rng, {3, 4, 2});
    const auto s = survival_upper(f);
    // brute-force O(N^2) oracle
    const auto& shape = f.shape();
    std::vector<std::size_t> xi(3), yi(3);
    for (std::size_t x = 0; x < f.size(); ++x) {
      std::size_t rem = x;
      for (std::size_t k = 3; k-- > 0;) {
        xi[k] = rem % shape[k];
        rem /= shape[k];
      }
      double sum = 0.0;
      for (std::size_t y = 0; y < f.size(); ++y) {
        std::size_t r2 = y;
        bool strict = true;
        for (std::size_t k = 3; k-- > 0;) {
          yi[k] = r2 % shape[k];
          r2 /= shape[k];
        }
        for (std::size_t k = 0; k < 3; ++k)
          if (yi[k] <= xi[k]) {
            strict = false;
            break;
          }
        if (strict) sum += f.values()[y];
      }
      CHECK(s.values()[x] == doctest::Approx(sum).epsilon(1e-12));
    }
    // componentwise nonincreasing, zero when any index is maximal
    for (std::size_t x = 0; x < f.size(); ++x) {
      std::size_t rem = x;
      for (std::size_t k = 3; k-- > 0;) {
        xi[k] = rem % shape[k];
        rem /= shape[k];
      }
      for (std::size_t k = 0; k < 3; ++k) {
        if (xi[k] == shape[k] - 1) {
          CHECK(s.values()[x] == 0.0);
        } else {
          auto next = xi;
          ++next[k];
          CHECK(s.values()[f.offset(next)] <= s.values()[x] + 1e-15);
        }
      }
    }
  }
}

TEST_CASE("mixture blends conditionally independent tables") {
  // two binary tables over two y states
  const auto c1 = LatticeDensity({2, 2}, {{0.0, 1.0}, {0.0, 1.0}},
                                 {0.8, 0.3, 0.2, 0.7}, Interpretation::density_samples);
  const auto c2 = LatticeDensity({2, 2}, {{0.0, 1.0}, {0.0, 1.0}},
                                 {0.6, 0.1, 0.4, 0.9}, Interpretation::density_samples);

  SUBCASE("point mass on one y gives the product of that column") {
    const auto m = mixture({c1, c2}, {0.0, 1.0});
    CHECK(m.values()[0] == doctest::Approx(0.3 * 0.1).epsilon(1e-14));
    CHECK(m.values()[3] == doctest::Approx(0.7 * 0.9).epsilon(1e-14));
  }

  SUBCASE("general weights blend columns and yield a pmf") {
    const auto m = mixture({c1, c2}, {0.4, 0.6});
    CHECK(m.interpretation() == Interpretation::pmf);
    CHECK(m.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.values()[0] ==
          doctest::Approx(0.4 * 0.8 * 0.6 + 0.6 * 0.3 * 0.1).epsilon(1e-14));
  }

  SUBCASE("single y state reduces to independence") {
    const auto d1 = LatticeDensity({2, 1}, {{0.0, 1.0}, {0.0}}, {0.25, 0.75},
                                   Interpretation::density_samples);
    const auto d2 = LatticeDensity({2, 1}, {{0.0, 1.0}, {0.0}}, {0.5, 0.5},
                                   Interpretation::density_samples);
    const auto m = mixture({d1, d2}, {1.0});
    CHECK(m.values() == std::vector<double>{0.125, 0.125, 0.375, 0.375});
  }

  SUBCASE("validation") {
    CHECK_THROWS_AS(mixture({c1, c2}, {0.4, 0.5}), std::invalid_argument);  // weights
    const auto bad = LatticeDensity({2, 2}, {{0.0, 1.0}, {0.0, 1.0}},
                                    {0.8, 0.3, 0.3, 0.7}, Interpretation::density_samples);
    CHECK_THROWS_AS(mixture({c1, bad}, {0.4, 0.6}), std::invalid_argument);  // column sum
    CHECK_THROWS_AS(mixture({}, {1.0}), std::invalid_argument);
  }
}
