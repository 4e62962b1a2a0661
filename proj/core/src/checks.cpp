#include "totpos/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace totpos {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  double margin;
  bool violation;
};

// One comparison of lhs = a1*a2 against rhs = b1*b2 (sums of logs in log
// domain; the caller passes logs there).  A violation needs the margin to
// fall below -tol * max(1, |lhs|, |rhs|), so ties at the tolerance pass and
// a zero right-hand side can never be violated.
inline Outcome compare_products(double a1, double a2, double b1, double b2,
                                double tol, bool log_domain, bool reversed) {
  double lhs, rhs;
  if (log_domain) {
    lhs = a1 + a2;
    rhs = b1 + b2;
    if (reversed) std::swap(lhs, rhs);
    if (rhs == -kInf) return {lhs == -kInf ? 0.0 : kInf, false};
    if (lhs == -kInf) return {-kInf, true};
  } else {
    lhs = a1 * a2;
    rhs = b1 * b2;
    if (reversed) std::swap(lhs, rhs);
  }
  const double margin = lhs - rhs;
  const double scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
  return {margin, margin < -tol * scale};
}

struct ScanState {
  CheckReport report;
  bool have_witness = false;

  explicit ScanState(CheckMode mode, const CheckOptions& opts) {
    report.mode = mode;
    report.tolerance = opts.tol;
    report.log_domain = opts.log_domain;
  }

  // Returns true when this outcome is the first violation (caller records
  // the witness location).
  bool absorb(const Outcome& o) {
    ++report.quadruples_checked;
    if (o.margin < report.min_margin) report.min_margin = o.margin;
    if (o.violation && !have_witness) {
      have_witness = true;
      report.verdict = Verdict::fail;
      return true;
    }
    return false;
  }
};

// Odometer over the axes in `mask` only; all other digits stay put.
bool advance_masked(std::vector<std::size_t>& idx,
                    const std::vector<std::size_t>& shape,
                    const std::vector<std::size_t>& mask) {
  for (std::size_t p = mask.size(); p-- > 0;) {
    const std::size_t k = mask[p];
    if (++idx[k] < shape[k]) return true;
    idx[k] = 0;
  }
  return false;
}

void unflatten(std::size_t flat, const std::vector<std::size_t>& shape,
               std::vector<std::size_t>& out) {
  for (std::size_t k = shape.size(); k-- > 0;) {
    out[k] = flat % shape[k];
    flat /= shape[k];
  }
}

std::vector<double> log_values(const LatticeDensity& g) {
  std::vector<double> logs(g.size());
  for (std::size_t p = 0; p < g.size(); ++p)
    logs[p] = g.values()[p] > 0.0 ? std::log(g.values()[p]) : -kInf;
  return logs;
}

// Core pairwise scan on an already reflected lattice.  Scan order: axis
// pairs (i, j) lexicographic, contexts row-major over the remaining axes,
// then i_lo, i_hi, j_lo, j_hi.
CheckReport scan_pairs(const LatticeDensity& g, const CheckOptions& opts,
                       bool reversed, CheckMode mode) {
  ScanState st(mode, opts);
  const auto& shape = g.shape();
  const auto& strides = g.strides();
  const std::vector<double> logs = opts.log_domain ? log_values(g) : std::vector<double>();
  const double* v = opts.log_domain ? logs.data() : g.values().data();
  const std::size_t d = g.dim();

  for (std::size_t i = 0; i + 1 < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const std::size_t si = strides[i], sj = strides[j];
      const std::size_t ni = shape[i], nj = shape[j];
      std::vector<std::size_t> ctx_axes;
      for (std::size_t k = 0; k < d; ++k)
        if (k != i && k != j) ctx_axes.push_back(k);
      std::vector<std::size_t> ctx(d, 0);
      do {
        const std::size_t base = g.offset(ctx);
        for (std::size_t a = 0; a + 1 < ni; ++a) {
          for (std::size_t a2 = a + 1; a2 < ni; ++a2) {
            const double* lo = v + base + a * si;
            const double* hi = v + base + a2 * si;
            for (std::size_t b = 0; b + 1 < nj; ++b) {
              for (std::size_t b2 = b + 1; b2 < nj; ++b2) {
                const Outcome o =
                    compare_products(lo[b * sj], hi[b2 * sj], hi[b * sj],
                                     lo[b2 * sj], opts.tol, opts.log_domain, reversed);
                if (st.absorb(o)) {
                  Witness w;
                  w.pair = {i, j};
                  for (std::size_t k : ctx_axes) w.context.push_back(ctx[k]);
                  w.indices = {a, a2, b, b2};
                  st.report.witness = std::move(w);
                }
              }
            }
          }
        }
      } while (advance_masked(ctx, shape, ctx_axes));
    }
  }
  return st.report;
}

}  // namespace

CheckReport check_pairs(const LatticeDensity& g, const Direction& alpha,
                        const CheckOptions& opts) {
  const LatticeDensity r = reflect(g, alpha);
  return scan_pairs(r, opts, /*reversed=*/false, CheckMode::pairs);
}

CheckReport check_negative(const LatticeDensity& g, const Direction& alpha,
                           const CheckOptions& opts) {
  const LatticeDensity r = reflect(g, alpha);
  return scan_pairs(r, opts, /*reversed=*/true, CheckMode::negative);
}

CheckReport check_survival(const LatticeDensity& g, const Direction& alpha,
                           const CheckOptions& opts) {
  if (g.interpretation() != Interpretation::pmf)
    throw std::invalid_argument("check_survival: requires pmf interpretation");
  const LatticeDensity s = survival_upper(reflect(g, alpha));
  return scan_pairs(s, opts, /*reversed=*/false, CheckMode::survival);
}

CheckReport check_full(const LatticeDensity& g, const Direction& alpha,
                       const CheckOptions& opts, std::uint64_t pair_budget) {
  const std::uint64_t n = g.size();
  if (n * n > pair_budget)
    throw std::runtime_error(
        "check_full: " + std::to_string(n) + "^2 point pairs exceed the budget of " +
        std::to_string(pair_budget) + "; pass a larger pair_budget to override");

  const LatticeDensity r = reflect(g, alpha);
  ScanState st(CheckMode::full, opts);
  const auto& shape = r.shape();
  const std::vector<double> logs = opts.log_domain ? log_values(r) : std::vector<double>();
  const double* v = opts.log_domain ? logs.data() : r.values().data();
  const std::size_t d = r.dim();

  std::vector<std::size_t> xi(d), yi(d);
  for (std::size_t x = 0; x < n; ++x) {
    unflatten(x, shape, xi);
    for (std::size_t y = x + 1; y < n; ++y) {
      unflatten(y, shape, yi);
      std::size_t meet = 0, join = 0;
      for (std::size_t k = 0; k < d; ++k) {
        meet += std::min(xi[k], yi[k]) * r.strides()[k];
        join += std::max(xi[k], yi[k]) * r.strides()[k];
      }
      const Outcome o = compare_products(v[meet], v[join], v[x], v[y], opts.tol,
                                         opts.log_domain, /*reversed=*/false);
      if (st.absorb(o)) {
        Witness w;
        w.x = xi;
        w.y = yi;
        st.report.witness = std::move(w);
      }
    }
  }
  return st.report;
}

CheckReport check_chain(const LatticeDensity& g, const Direction& alpha,
                        const CheckOptions& opts) {
  const LatticeDensity r = reflect(g, alpha);
  ScanState st(CheckMode::chain, opts);
  const auto& shape = r.shape();
  const auto& strides = r.strides();
  const std::vector<double> logs = opts.log_domain ? log_values(r) : std::vector<double>();
  const double* v = opts.log_domain ? logs.data() : r.values().data();
  const std::size_t d = r.dim();

  std::vector<std::size_t> all_axes(d);
  for (std::size_t k = 0; k < d; ++k) all_axes[k] = k;

  // prefix[p] = sum over axes < p of index * stride, so every split offset
  // is two prefix lookups.
  std::vector<std::size_t> lo(d, 0), hi(d), pre_lo(d + 1), pre_hi(d + 1);
  do {
    hi = lo;
    do {
      pre_lo[0] = pre_hi[0] = 0;
      for (std::size_t k = 0; k < d; ++k) {
        pre_lo[k + 1] = pre_lo[k] + lo[k] * strides[k];
        pre_hi[k + 1] = pre_hi[k] + hi[k] * strides[k];
      }
      const std::size_t off_lo = pre_lo[d], off_hi = pre_hi[d];
      for (std::size_t split = 1; split < d; ++split) {
        const std::size_t mixed_hi_lo = pre_hi[split] + (off_lo - pre_lo[split]);
        const std::size_t mixed_lo_hi = pre_lo[split] + (off_hi - pre_hi[split]);
        const Outcome o = compare_products(v[off_lo], v[off_hi], v[mixed_hi_lo],
                                           v[mixed_lo_hi], opts.tol,
                                           opts.log_domain, /*reversed=*/false);
        if (st.absorb(o)) {
          Witness w;
          w.x = lo;
          w.y = hi;
          w.indices = {split};
          st.report.witness = std::move(w);
        }
      }
      // advance hi with per-digit floor lo[k]
      bool more = false;
      for (std::size_t k = d; k-- > 0;) {
        if (++hi[k] < shape[k]) {
          more = true;
          break;
        }
        hi[k] = lo[k];
      }
      if (!more) break;
    } while (true);
  } while (advance_masked(lo, shape, all_axes));
  return st.report;
}

CheckReport dfr_check(const DistributionModel& model,
                      std::span<const double> x_grid,
                      std::span<const double> y_grid, double tol) {
  if (x_grid.size() < 2)
    throw std::invalid_argument("dfr_check: x_grid needs at least two points");
  for (std::size_t k = 1; k < x_grid.size(); ++k)
    if (!(x_grid[k] > x_grid[k - 1]))
      throw std::invalid_argument("dfr_check: x_grid must be strictly increasing");
  for (double y : y_grid)
    if (!(y >= 0)) throw std::invalid_argument("dfr_check: y values must be >= 0");

  CheckOptions opts;
  opts.tol = tol;
  ScanState st(CheckMode::dfr, opts);
  std::size_t skipped = 0;
  std::string first_skip;

  for (std::size_t yi = 0; yi < y_grid.size(); ++yi) {
    const double y = y_grid[yi];
    bool have_prev = false;
    std::size_t prev_k = 0;
    double prev_ratio = 0.0;
    for (std::size_t k = 0; k < x_grid.size(); ++k) {
      const double sx = model.survival(x_grid[k]);
      if (!(sx > 0.0)) {
        ++skipped;
        if (first_skip.empty())
          first_skip = "x=" + std::to_string(x_grid[k]) + ", y=" + std::to_string(y);
        continue;
      }
      const double ratio = model.survival(x_grid[k] + y) / sx;
      if (have_prev) {
        const Outcome o = compare_products(ratio, 1.0, prev_ratio, 1.0, tol,
                                           /*log_domain=*/false, /*reversed=*/false);
        if (st.absorb(o)) {
          Witness w;
          w.pair = {prev_k, k};
          w.context = {yi};
          w.coords = {x_grid[prev_k], x_grid[k], y};
          st.report.witness = std::move(w);
        }
      }
      have_prev = true;
      prev_k = k;
      prev_ratio = ratio;
    }
  }
  if (skipped > 0)
    st.report.notices.push_back("skipped " + std::to_string(skipped) +
                                " grid points with zero survival (first at " +
                                first_skip + ")");
  return st.report;
}

}  // namespace totpos
