#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "totpos/lattice.hpp"
#include "totpos/monte_carlo.hpp"
#include "totpos/report.hpp"

namespace totpos {

/// Raised on malformed input; the message names the offending field.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// All floating-point output goes through this: 17 significant digits, so
/// every value round-trips exactly.  Non-finite values print as
/// "inf"/"-inf"/"nan".
std::string format_double(double v);

/// Lattice file: JSON object with fields
///   shape: [n_1, ..., n_d]
///   axes: [[...], ...]          one strictly increasing array per axis
///   values: [...]               row-major, finite, nonnegative
///   interpretation: "pmf" | "density"
std::string lattice_to_json(const LatticeDensity& g);
LatticeDensity parse_lattice_json(const std::string& text);
LatticeDensity read_lattice_file(const std::filesystem::path& path);
void write_lattice_file(const std::filesystem::path& path, const LatticeDensity& g);

/// Report file: JSON object with fields verdict, mode, min_margin,
/// tolerance, quadruples_checked, log_domain, plus witness (on fail) and
/// notices (when present).  An infinite min_margin is encoded as the
/// string "inf"/"-inf".
std::string report_to_json(const CheckReport& report);
CheckReport parse_report_json(const std::string& text);
void write_report_file(const std::filesystem::path& path, const CheckReport& report);

/// Direction string: comma-separated +1/-1 entries, e.g. "+1,-1".
Direction parse_direction(std::string_view text);
std::string direction_to_string(const Direction& alpha);

/// Grid spec "lo:hi:n": n >= 2 evenly spaced points from lo to hi inclusive.
std::vector<double> parse_grid_spec(std::string_view text);

/// CSV writers.  Headers: "x,y,value" for 2D density grids;
/// "x1,...,xd" for sample batches; "bin_low,bin_high,count,estimate,stderr"
/// for gap-survival bins.
std::string density_grid_to_csv(std::span<const double> x_grid,
                                std::span<const double> y_grid,
                                std::span<const double> values);
std::string samples_to_csv(const SampleBatch& batch);
std::string bins_to_csv(std::span<const GapBinEstimate> bins);

}  // namespace totpos
