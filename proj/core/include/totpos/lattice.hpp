#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace totpos {

/// How the stored values are to be read.
///   pmf:             cell masses; total mass must not exceed 1 + 1e-9
///   density_samples: point evaluations of a density; no mass constraint
enum class Interpretation { pmf, density_samples };

/// Orthant direction: one sign per axis, +1 or -1.
class Direction {
public:
  explicit Direction(std::vector<int> signs);
  static Direction all_positive(std::size_t d);

  std::size_t dim() const { return signs_.size(); }
  const std::vector<int>& signs() const { return signs_; }
  int operator[](std::size_t k) const { return signs_[k]; }
  Direction negated() const;
  bool all_positive_signs() const;

private:
  std::vector<int> signs_;
};

/// Replacement coordinate vectors, one per axis.  Each must be strictly
/// increasing and match the axis length it replaces.
struct AxisRelabel {
  std::vector<std::vector<double>> axes;
};

/// Nonnegative function values on a finite product grid, stored flat in
/// row-major order (last axis fastest).  Immutable after construction;
/// all operations return new objects.
///
/// Construction enforces: shape entries positive, one strictly increasing
/// finite axis per dimension with matching length, values finite and
/// nonnegative with length equal to the cell count, and for pmf
/// interpretation a total mass of at most 1 + 1e-9.
class LatticeDensity {
public:
  LatticeDensity(std::vector<std::size_t> shape,
                 std::vector<std::vector<double>> axes,
                 std::vector<double> values,
                 Interpretation interp);

  /// Convenience constructor with axes 0, 1, ..., n_k - 1.
  static LatticeDensity with_unit_axes(std::vector<std::size_t> shape,
                                       std::vector<double> values,
                                       Interpretation interp);

  std::size_t dim() const { return shape_.size(); }
  const std::vector<std::size_t>& shape() const { return shape_; }
  const std::vector<std::vector<double>>& axes() const { return axes_; }
  const std::vector<double>& values() const { return values_; }
  Interpretation interpretation() const { return interp_; }
  const std::vector<std::size_t>& strides() const { return strides_; }
  std::size_t size() const { return values_.size(); }

  std::size_t offset(std::span<const std::size_t> index) const;
  double value_at(std::span<const std::size_t> index) const;
  double total_mass() const;

private:
  std::vector<std::size_t> shape_;
  std::vector<std::vector<double>> axes_;
  std::vector<double> values_;
  std::vector<std::size_t> strides_;
  Interpretation interp_;
};

/// Mirror the lattice along every axis whose direction sign is -1:
/// coordinates are negated and reversed, values are reindexed.  Mass and
/// the value multiset are preserved exactly.  Involution: applying the
/// same direction twice restores the input.
LatticeDensity reflect(const LatticeDensity& g, const Direction& alpha);

/// Sum out all axes not in `keep` (0-based, strictly increasing, nonempty).
/// Requires pmf interpretation.  Mass is conserved up to accumulated
/// rounding.
LatticeDensity marginalize(const LatticeDensity& g,
                           const std::vector<std::size_t>& keep);

/// Independent concatenation: outer product of two pmf lattices.  The
/// result carries a's axes followed by b's.
LatticeDensity product(const LatticeDensity& a, const LatticeDensity& b);

/// Replace axis coordinates with strictly increasing relabelled ones.
/// Values are untouched, so order-based checks are unaffected.
LatticeDensity relabel_axes(const LatticeDensity& g, const AxisRelabel& r);

/// Strict upper-orthant survival: S[x] = sum of cell masses at indices
/// strictly greater than x in every coordinate.  Points off the grid carry
/// no mass.  Requires pmf interpretation; runs in O(d * cells) by repeated
/// strict suffix sums.  The result is componentwise nonincreasing and zero
/// whenever any index is maximal.
LatticeDensity survival_upper(const LatticeDensity& g);

/// Conditionally independent mixture.  Each conditional is a 2D lattice
/// over (x_i, y) whose columns (fixed y) sum to 1 +- 1e-9; all share the
/// same y-axis length; weights form a pmf over y.  Output cell value:
///   value(x) = sum_y w(y) * prod_i cond_i(x_i | y)
/// a pmf over the product of the conditionals' x-axes.
LatticeDensity mixture(const std::vector<LatticeDensity>& conditionals,
                       const std::vector<double>& weights);

}  // namespace totpos
