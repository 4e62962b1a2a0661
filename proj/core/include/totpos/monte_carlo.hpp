#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "totpos/distribution.hpp"

namespace totpos {

/// Generator tag recorded in every batch.  Draws are mt19937_64 words
/// mapped to [0, 1) by taking the top 53 bits, then pushed through the
/// model quantile, so batches are bit-reproducible for a fixed seed across
/// standard library implementations.
inline constexpr const char* kGeneratorVersion = "mt19937_64/u53-1";

/// Uniform draw in [0, 1) from the top 53 bits of one generator word.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// n rows of d order statistics each (rows sorted ascending), row-major.
struct SampleBatch {
  std::string model_spec;
  int d = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string generator_version;
  std::vector<double> rows;

  double at(std::size_t row, int k) const { return rows[row * d + k]; }
};

/// Inverse-transform sampling of d iid draws per row, each row sorted.
SampleBatch sample_order_stats(const DistributionModel& model, int d,
                               std::size_t n, std::uint64_t seed);

/// One gap-survival estimate on a bin of X_(i) values.
struct GapBinEstimate {
  double bin_low = 0.0;
  double bin_high = 0.0;
  std::size_t count = 0;
  double estimate = 0.0;  // NaN when the bin is empty
  double stderr_ = 0.0;   // binomial sqrt(p(1-p)/count); NaN when empty
  bool low_count = false; // fewer than 30 rows
};

/// Empirical P[X_(j) - X_(i) > y | X_(i) in bin] over n_bins equal-count
/// bins of the observed X_(i) (1-based ranks, i < j <= d).  Empty and
/// low-count bins are flagged, not failed.
std::vector<GapBinEstimate> empirical_gap_survival(const SampleBatch& batch,
                                                   int i, int j,
                                                   std::size_t n_bins, double y);

/// Largest adjacent decrease, clipped at zero: max_k (e[k] - e[k+1], 0).
/// NaN entries are unusable; fewer than two usable entries is an error.
double isotonic_violation(std::span<const double> estimates);
double isotonic_violation(std::span<const GapBinEstimate> bins);

/// Root-mean-square of the usable standard errors.
double pooled_se(std::span<const double> ses);
double pooled_se(std::span<const GapBinEstimate> bins);

}  // namespace totpos
