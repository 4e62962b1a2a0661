#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace totpos {

enum class Verdict { pass, fail };

enum class CheckMode { pairs, full, chain, survival, negative, dfr, prd };

const char* to_string(Verdict v);
const char* to_string(CheckMode m);
Verdict verdict_from_string(const std::string& s);
CheckMode check_mode_from_string(const std::string& s);

/// Location of the first violation found, in deterministic scan order.
/// Which fields are populated depends on the mode:
///   pairs/survival/negative: pair = {axis_i, axis_j}, context = fixed
///     indices of the remaining axes (ascending axis order), indices =
///     {i_lo, i_hi, j_lo, j_hi} along the two scanned axes.
///   full:  x, y = the two lattice multi-indices.
///   chain: x, y = the ordered multi-index pair, indices = {split}.
///   dfr/prd: pair = {k, k+1} adjacent x-grid slots, context = {y index},
///     coords = {x, x', y} in coordinate values.
struct Witness {
  std::vector<std::size_t> pair;
  std::vector<std::size_t> context;
  std::vector<std::size_t> indices;
  std::vector<std::size_t> x;
  std::vector<std::size_t> y;
  std::vector<double> coords;
};

/// Outcome of one inequality scan.  min_margin is the smallest lhs - rhs
/// seen over all comparisons (log-units when log_domain is set); a
/// comparison counts as a violation when its margin falls below
/// -tol * max(1, |lhs|, |rhs|), so ties at the tolerance pass.  witness is
/// present exactly when the verdict is fail and names the first violation
/// in scan order.
struct CheckReport {
  Verdict verdict = Verdict::pass;
  CheckMode mode = CheckMode::pairs;
  double min_margin = std::numeric_limits<double>::infinity();
  std::optional<Witness> witness;
  std::uint64_t quadruples_checked = 0;
  double tolerance = 0.0;
  bool log_domain = false;
  std::vector<std::string> notices;

  bool passed() const { return verdict == Verdict::pass; }
};

}  // namespace totpos
