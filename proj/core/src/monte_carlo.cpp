#include "totpos/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace totpos {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kLowCountThreshold = 30;

}  // namespace

SampleBatch sample_order_stats(const DistributionModel& model, int d,
                               std::size_t n, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("sample_order_stats: d must be >= 1");
  if (n == 0) throw std::invalid_argument("sample_order_stats: n must be >= 1");

  SampleBatch batch;
  batch.model_spec = model.spec_string();
  batch.d = d;
  batch.n = n;
  batch.seed = seed;
  batch.generator_version = kGeneratorVersion;
  batch.rows.resize(n * static_cast<std::size_t>(d));

  std::mt19937_64 rng(seed);
  for (std::size_t r = 0; r < n; ++r) {
    double* row = batch.rows.data() + r * d;
    for (int k = 0; k < d; ++k) row[k] = model.quantile(uniform01(rng));
    std::sort(row, row + d);
  }
  return batch;
}

std::vector<GapBinEstimate> empirical_gap_survival(const SampleBatch& batch,
                                                   int i, int j,
                                                   std::size_t n_bins, double y) {
  if (!(1 <= i && i < j && j <= batch.d))
    throw std::invalid_argument("empirical_gap_survival: needs 1 <= i < j <= d");
  if (n_bins == 0) throw std::invalid_argument("empirical_gap_survival: n_bins must be >= 1");
  if (!(y >= 0.0)) throw std::invalid_argument("empirical_gap_survival: y must be >= 0");

  // Order rows by X_(i); ties broken by row index for determinism.
  std::vector<std::size_t> order(batch.n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double xa = batch.at(a, i - 1), xb = batch.at(b, i - 1);
    return xa != xb ? xa < xb : a < b;
  });

  std::vector<GapBinEstimate> bins(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    const std::size_t first = batch.n * b / n_bins;
    const std::size_t last = batch.n * (b + 1) / n_bins;  // exclusive
    GapBinEstimate& est = bins[b];
    est.count = last - first;
    est.low_count = est.count < kLowCountThreshold;
    if (est.count == 0) {
      est.bin_low = est.bin_high = kNaN;
      est.estimate = est.stderr_ = kNaN;
      continue;
    }
    est.bin_low = batch.at(order[first], i - 1);
    est.bin_high = batch.at(order[last - 1], i - 1);
    std::size_t hits = 0;
    for (std::size_t r = first; r < last; ++r) {
      const std::size_t row = order[r];
      if (batch.at(row, j - 1) - batch.at(row, i - 1) > y) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(est.count);
    est.estimate = p;
    est.stderr_ = std::sqrt(p * (1.0 - p) / static_cast<double>(est.count));
  }
  return bins;
}

double isotonic_violation(std::span<const double> estimates) {
  std::vector<double> usable;
  for (double e : estimates)
    if (!std::isnan(e)) usable.push_back(e);
  if (usable.size() < 2)
    throw std::invalid_argument("isotonic_violation: fewer than 2 usable bins");
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < usable.size(); ++k)
    worst = std::max(worst, usable[k] - usable[k + 1]);
  return worst;
}

double isotonic_violation(std::span<const GapBinEstimate> bins) {
  std::vector<double> est;
  est.reserve(bins.size());
  for (const auto& b : bins) est.push_back(b.estimate);
  return isotonic_violation(std::span<const double>(est));
}

double pooled_se(std::span<const double> ses) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double s : ses) {
    if (std::isnan(s)) continue;
    sum += s * s;
    ++n;
  }
  if (n == 0) throw std::invalid_argument("pooled_se: no usable standard errors");
  return std::sqrt(sum / static_cast<double>(n));
}

double pooled_se(std::span<const GapBinEstimate> bins) {
  std::vector<double> ses;
  ses.reserve(bins.size());
  for (const auto& b : bins) ses.push_back(b.stderr_);
  return pooled_se(std::span<const double>(ses));
}

}  // namespace totpos
