#include "totpos/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace totpos {

namespace {

constexpr double kPmfMassSlack = 1e-9;
constexpr double kColumnSumSlack = 1e-9;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::vector<std::size_t> row_major_strides(const std::vector<std::size_t>& shape) {
  std::vector<std::size_t> s(shape.size(), 1);
  for (std::size_t k = shape.size(); k-- > 1;) s[k - 1] = s[k] * shape[k];
  return s;
}

// Row-major odometer over the full shape.  Returns false after the last index.
bool advance(std::vector<std::size_t>& idx, const std::vector<std::size_t>& shape) {
  for (std::size_t k = idx.size(); k-- > 0;) {
    if (++idx[k] < shape[k]) return true;
    idx[k] = 0;
  }
  return false;
}

}  // namespace

Direction::Direction(std::vector<int> signs) : signs_(std::move(signs)) {
  require(!signs_.empty(), "Direction: needs at least one axis");
  for (std::size_t k = 0; k < signs_.size(); ++k)
    require(signs_[k] == 1 || signs_[k] == -1,
            "Direction: sign at axis " + std::to_string(k) + " must be +1 or -1");
}

Direction Direction::all_positive(std::size_t d) {
  return Direction(std::vector<int>(d, 1));
}

Direction Direction::negated() const {
  std::vector<int> s(signs_);
  for (int& v : s) v = -v;
  return Direction(std::move(s));
}

bool Direction::all_positive_signs() const {
  return std::all_of(signs_.begin(), signs_.end(), [](int s) { return s == 1; });
}

LatticeDensity::LatticeDensity(std::vector<std::size_t> shape,
                               std::vector<std::vector<double>> axes,
                               std::vector<double> values,
                               Interpretation interp)
    : shape_(std::move(shape)),
      axes_(std::move(axes)),
      values_(std::move(values)),
      interp_(interp) {
  require(!shape_.empty(), "LatticeDensity: shape must be nonempty");
  std::size_t cells = 1;
  for (std::size_t k = 0; k < shape_.size(); ++k) {
    require(shape_[k] > 0,
            "LatticeDensity: shape[" + std::to_string(k) + "] must be positive");
    cells *= shape_[k];
  }
  require(axes_.size() == shape_.size(),
          "LatticeDensity: axes count does not match shape");
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    const auto& ax = axes_[k];
    require(ax.size() == shape_[k],
            "LatticeDensity: axes[" + std::to_string(k) + "] length does not match shape");
    for (std::size_t p = 0; p < ax.size(); ++p) {
      require(std::isfinite(ax[p]),
              "LatticeDensity: axes[" + std::to_string(k) + "] has non-finite coordinate");
      if (p > 0)
        require(ax[p] > ax[p - 1],
                "LatticeDensity: axes[" + std::to_string(k) + "] not strictly increasing");
    }
  }
  require(values_.size() == cells,
          "LatticeDensity: values length " + std::to_string(values_.size()) +
              " does not match cell count " + std::to_string(cells));
  for (std::size_t p = 0; p < values_.size(); ++p) {
    require(std::isfinite(values_[p]),
            "LatticeDensity: values[" + std::to_string(p) + "] is not finite");
    require(values_[p] >= 0.0,
            "LatticeDensity: values[" + std::to_string(p) + "] is negative");
  }
  if (interp_ == Interpretation::pmf)
    require(total_mass() <= 1.0 + kPmfMassSlack,
            "LatticeDensity: pmf mass exceeds 1 + 1e-9");
  strides_ = row_major_strides(shape_);
}

LatticeDensity LatticeDensity::with_unit_axes(std::vector<std::size_t> shape,
                                              std::vector<double> values,
                                              Interpretation interp) {
  std::vector<std::vector<double>> axes;
  axes.reserve(shape.size());
  for (std::size_t n : shape) {
    std::vector<double> ax(n);
    std::iota(ax.begin(), ax.end(), 0.0);
    axes.push_back(std::move(ax));
  }
  return LatticeDensity(std::move(shape), std::move(axes), std::move(values), interp);
}

std::size_t LatticeDensity::offset(std::span<const std::size_t> index) const {
  std::size_t off = 0;
  for (std::size_t k = 0; k < strides_.size(); ++k) off += index[k] * strides_[k];
  return off;
}

double LatticeDensity::value_at(std::span<const std::size_t> index) const {
  return values_[offset(index)];
}

double LatticeDensity::total_mass() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

LatticeDensity reflect(const LatticeDensity& g, const Direction& alpha) {
  require(alpha.dim() == g.dim(), "reflect: direction dimension mismatch");
  if (alpha.all_positive_signs()) return g;

  const auto& shape = g.shape();
  std::vector<std::vector<double>> axes(g.dim());
  for (std::size_t k = 0; k < g.dim(); ++k) {
    const auto& ax = g.axes()[k];
    if (alpha[k] == 1) {
      axes[k] = ax;
    } else {
      axes[k].resize(ax.size());
      for (std::size_t p = 0; p < ax.size(); ++p)
        axes[k][p] = -ax[ax.size() - 1 - p];
    }
  }

  std::vector<double> values(g.size());
  std::vector<std::size_t> idx(g.dim(), 0), mirrored(g.dim());
  std::size_t src = 0;
  do {
    for (std::size_t k = 0; k < g.dim(); ++k)
      mirrored[k] = alpha[k] == 1 ? idx[k] : shape[k] - 1 - idx[k];
    values[g.offset(mirrored)] = g.values()[src];
    ++src;
  } while (advance(idx, shape));

  return LatticeDensity(shape, std::move(axes), std::move(values), g.interpretation());
}

LatticeDensity marginalize(const LatticeDensity& g,
                           const std::vector<std::size_t>& keep) {
  require(g.interpretation() == Interpretation::pmf,
          "marginalize: requires pmf interpretation");
  require(!keep.empty(), "marginalize: keep set must be nonempty");
  for (std::size_t p = 0; p < keep.size(); ++p) {
    require(keep[p] < g.dim(), "marginalize: keep axis out of range");
    if (p > 0) require(keep[p] > keep[p - 1], "marginalize: keep must be strictly increasing");
  }

  std::vector<std::size_t> out_shape;
  std::vector<std::vector<double>> out_axes;
  for (std::size_t k : keep) {
    out_shape.push_back(g.shape()[k]);
    out_axes.push_back(g.axes()[k]);
  }
  std::vector<std::size_t> out_strides = row_major_strides(out_shape);

  std::vector<double> out(std::accumulate(out_shape.begin(), out_shape.end(),
                                          std::size_t{1}, std::multiplies<>()),
                          0.0);
  std::vector<std::size_t> idx(g.dim(), 0);
  std::size_t src = 0;
  do {
    std::size_t off = 0;
    for (std::size_t p = 0; p < keep.size(); ++p) off += idx[keep[p]] * out_strides[p];
    out[off] += g.values()[src];
    ++src;
  } while (advance(idx, g.shape()));

  return LatticeDensity(std::move(out_shape), std::move(out_axes), std::move(out),
                        Interpretation::pmf);
}

LatticeDensity product(const LatticeDensity& a, const LatticeDensity& b) {
  require(a.interpretation() == Interpretation::pmf &&
              b.interpretation() == Interpretation::pmf,
          "product: both factors must be pmf lattices");

  std::vector<std::size_t> shape(a.shape());
  shape.insert(shape.end(), b.shape().begin(), b.shape().end());
  std::vector<std::vector<double>> axes(a.axes());
  axes.insert(axes.end(), b.axes().begin(), b.axes().end());

  std::vector<double> values(a.size() * b.size());
  for (std::size_t p = 0; p < a.size(); ++p)
    for (std::size_t q = 0; q < b.size(); ++q)
      values[p * b.size() + q] = a.values()[p] * b.values()[q];

  return LatticeDensity(std::move(shape), std::move(axes), std::move(values),
                        Interpretation::pmf);
}

LatticeDensity relabel_axes(const LatticeDensity& g, const AxisRelabel& r) {
  require(r.axes.size() == g.dim(), "relabel_axes: axis count mismatch");
  // Constructor re-validates monotonicity and lengths.
  return LatticeDensity(g.shape(), r.axes, g.values(), g.interpretation());
}

LatticeDensity survival_upper(const LatticeDensity& g) {
  require(g.interpretation() == Interpretation::pmf,
          "survival_upper: requires pmf interpretation");

  std::vector<double> vals(g.values());
  const auto& shape = g.shape();
  const auto& strides = g.strides();

  // One strict suffix sum per axis: after processing axis k the array holds
  // sums over indices strictly greater in axes 0..k and equal elsewhere.
  for (std::size_t k = 0; k < g.dim(); ++k) {
    const std::size_t n = shape[k];
    const std::size_t stride = strides[k];
    std::vector<std::size_t> line_shape(shape);
    line_shape[k] = 1;
    std::vector<std::size_t> idx(g.dim(), 0);
    do {
      const std::size_t base = g.offset(idx);
      double prev_original = vals[base + (n - 1) * stride];
      vals[base + (n - 1) * stride] = 0.0;
      for (std::size_t t = n - 1; t-- > 0;) {
        const std::size_t at = base + t * stride;
        const double original = vals[at];
        vals[at] = vals[at + stride] + prev_original;
        prev_original = original;
      }
    } while (advance(idx, line_shape));
  }

  return LatticeDensity(shape, g.axes(), std::move(vals),
                        Interpretation::density_samples);
}

LatticeDensity mixture(const std::vector<LatticeDensity>& conditionals,
                       const std::vector<double>& weights) {
  require(!conditionals.empty(), "mixture: needs at least one conditional table");
  const std::size_t ny = weights.size();
  require(ny > 0, "mixture: weights must be nonempty");

  double wsum = 0.0;
  for (double w : weights) {
    require(std::isfinite(w) && w >= 0.0, "mixture: weights must be nonnegative");
    wsum += w;
  }
  require(std::fabs(wsum - 1.0) <= kPmfMassSlack, "mixture: weights must sum to 1 +- 1e-9");

  const std::size_t d = conditionals.size();
  std::vector<std::size_t> shape(d);
  std::vector<std::vector<double>> axes(d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto& c = conditionals[i];
    require(c.dim() == 2, "mixture: conditional " + std::to_string(i) + " must be 2D");
    require(c.shape()[1] == ny,
            "mixture: conditional " + std::to_string(i) + " y-length mismatch");
    shape[i] = c.shape()[0];
    axes[i] = c.axes()[0];
    for (std::size_t y = 0; y < ny; ++y) {
      double col = 0.0;
      for (std::size_t x = 0; x < c.shape()[0]; ++x) col += c.values()[x * ny + y];
      require(std::fabs(col - 1.0) <= kColumnSumSlack,
              "mixture: conditional " + std::to_string(i) + " column " +
                  std::to_string(y) + " does not sum to 1 +- 1e-9");
    }
  }

  std::size_t cells = 1;
  for (std::size_t n : shape) cells *= n;
  std::vector<double> values(cells, 0.0);
  std::vector<std::size_t> idx(d, 0);
  std::size_t out = 0;
  do {
    double v = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      double prod = weights[y];
      for (std::size_t i = 0; i < d; ++i)
        prod *= conditionals[i].values()[idx[i] * ny + y];
      v += prod;
    }
    values[out++] = v;
  } while (advance(idx, shape));

  return LatticeDensity(std::move(shape), std::move(axes), std::move(values),
                        Interpretation::pmf);
}

}  // namespace totpos
