#include "totpos/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace totpos {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

const json& field(const json& obj, const char* name) {
  const auto it = obj.find(name);
  if (it == obj.end())
    throw ParseError(std::string("missing field '") + name + "'");
  return *it;
}

double finite_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError(where + ": value is not finite");
  return x;
}

std::vector<std::size_t> index_vector(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array");
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < v.size(); ++p) {
    const auto& e = v[p];
    if (!e.is_number_unsigned())
      throw ParseError(where + "[" + std::to_string(p) + "]: expected a nonnegative integer");
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

void append_json_array(std::string& out, std::span<const double> vals) {
  out += '[';
  for (std::size_t p = 0; p < vals.size(); ++p) {
    if (p) out += ", ";
    out += format_double(vals[p]);
  }
  out += ']';
}

void append_json_array(std::string& out, std::span<const std::size_t> vals) {
  out += '[';
  for (std::size_t p = 0; p < vals.size(); ++p) {
    if (p) out += ", ";
    out += std::to_string(vals[p]);
  }
  out += ']';
}

// min_margin can be +-inf (e.g. log-domain scans); JSON has no literal for
// that, so non-finite values are encoded as strings.
void append_margin(std::string& out, double v) {
  if (std::isfinite(v)) {
    out += format_double(v);
  } else {
    out += '"';
    out += format_double(v);
    out += '"';
  }
}

double parse_margin(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ParseError(where + ": expected a number or \"inf\"/\"-inf\"");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

const char* to_string(Verdict v) { return v == Verdict::pass ? "pass" : "fail"; }

const char* to_string(CheckMode m) {
  switch (m) {
    case CheckMode::pairs: return "pairs";
    case CheckMode::full: return "full";
    case CheckMode::chain: return "chain";
    case CheckMode::survival: return "survival";
    case CheckMode::negative: return "negative";
    case CheckMode::dfr: return "dfr";
    case CheckMode::prd: return "prd";
  }
  return "pairs";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  throw ParseError("verdict: unknown value '" + s + "'");
}

CheckMode check_mode_from_string(const std::string& s) {
  if (s == "pairs") return CheckMode::pairs;
  if (s == "full") return CheckMode::full;
  if (s == "chain") return CheckMode::chain;
  if (s == "survival") return CheckMode::survival;
  if (s == "negative") return CheckMode::negative;
  if (s == "dfr") return CheckMode::dfr;
  if (s == "prd") return CheckMode::prd;
  throw ParseError("mode: unknown value '" + s + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string lattice_to_json(const LatticeDensity& g) {
  std::string out = "{\n  \"shape\": ";
  append_json_array(out, std::span<const std::size_t>(g.shape()));
  out += ",\n  \"axes\": [";
  for (std::size_t k = 0; k < g.dim(); ++k) {
    if (k) out += ", ";
    append_json_array(out, std::span<const double>(g.axes()[k]));
  }
  out += "],\n  \"values\": ";
  append_json_array(out, std::span<const double>(g.values()));
  out += ",\n  \"interpretation\": \"";
  out += g.interpretation() == Interpretation::pmf ? "pmf" : "density";
  out += "\"\n}\n";
  return out;
}

LatticeDensity parse_lattice_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("lattice file: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("lattice file: expected a JSON object");

  const json& jshape = field(doc, "shape");
  if (!jshape.is_array() || jshape.empty())
    throw ParseError("shape: expected a nonempty array");
  std::vector<std::size_t> shape;
  for (std::size_t k = 0; k < jshape.size(); ++k) {
    if (!jshape[k].is_number_unsigned() || jshape[k].get<std::size_t>() == 0)
      throw ParseError("shape[" + std::to_string(k) + "]: expected a positive integer");
    shape.push_back(jshape[k].get<std::size_t>());
  }

  const json& jaxes = field(doc, "axes");
  if (!jaxes.is_array() || jaxes.size() != shape.size())
    throw ParseError("axes: expected one array per axis");
  std::vector<std::vector<double>> axes;
  for (std::size_t k = 0; k < jaxes.size(); ++k) {
    const std::string where = "axes[" + std::to_string(k) + "]";
    if (!jaxes[k].is_array()) throw ParseError(where + ": expected an array");
    if (jaxes[k].size() != shape[k]) throw ParseError(where + ": length does not match shape");
    std::vector<double> ax;
    for (std::size_t p = 0; p < jaxes[k].size(); ++p)
      ax.push_back(finite_number(jaxes[k][p], where + "[" + std::to_string(p) + "]"));
    for (std::size_t p = 1; p < ax.size(); ++p)
      if (!(ax[p] > ax[p - 1])) throw ParseError(where + ": not strictly increasing");
    axes.push_back(std::move(ax));
  }

  const json& jvalues = field(doc, "values");
  if (!jvalues.is_array()) throw ParseError("values: expected an array");
  std::size_t cells = 1;
  for (std::size_t n : shape) cells *= n;
  if (jvalues.size() != cells)
    throw ParseError("values: length " + std::to_string(jvalues.size()) +
                     " does not match cell count " + std::to_string(cells));
  std::vector<double> values;
  for (std::size_t p = 0; p < jvalues.size(); ++p) {
    const std::string where = "values[" + std::to_string(p) + "]";
    const double v = finite_number(jvalues[p], where);
    if (v < 0.0) throw ParseError(where + ": negative value");
    values.push_back(v);
  }

  const json& jinterp = field(doc, "interpretation");
  if (!jinterp.is_string())
    throw ParseError("interpretation: expected \"pmf\" or \"density\"");
  const std::string interp = jinterp.get<std::string>();
  Interpretation mode;
  if (interp == "pmf") mode = Interpretation::pmf;
  else if (interp == "density") mode = Interpretation::density_samples;
  else throw ParseError("interpretation: unknown value '" + interp + "'");

  try {
    return LatticeDensity(std::move(shape), std::move(axes), std::move(values), mode);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

LatticeDensity read_lattice_file(const std::filesystem::path& path) {
  return parse_lattice_json(read_text(path));
}

void write_lattice_file(const std::filesystem::path& path, const LatticeDensity& g) {
  write_text(path, lattice_to_json(g));
}

std::string report_to_json(const CheckReport& report) {
  std::string out = "{\n";
  out += "  \"verdict\": \"";
  out += to_string(report.verdict);
  out += "\",\n  \"mode\": \"";
  out += to_string(report.mode);
  out += "\",\n  \"min_margin\": ";
  append_margin(out, report.min_margin);
  out += ",\n  \"tolerance\": ";
  out += format_double(report.tolerance);
  out += ",\n  \"quadruples_checked\": ";
  out += std::to_string(report.quadruples_checked);
  out += ",\n  \"log_domain\": ";
  out += report.log_domain ? "true" : "false";
  if (report.witness) {
    const Witness& w = *report.witness;
    out += ",\n  \"witness\": {";
    bool first = true;
    auto emit_idx = [&](const char* name, const std::vector<std::size_t>& v) {
      if (v.empty()) return;
      if (!first) out += ", ";
      first = false;
      out += '"';
      out += name;
      out += "\": ";
      append_json_array(out, std::span<const std::size_t>(v));
    };
    emit_idx("pair", w.pair);
    emit_idx("context", w.context);
    emit_idx("indices", w.indices);
    emit_idx("x", w.x);
    emit_idx("y", w.y);
    if (!w.coords.empty()) {
      if (!first) out += ", ";
      first = false;
      out += "\"coords\": ";
      append_json_array(out, std::span<const double>(w.coords));
    }
    out += '}';
  }
  if (!report.notices.empty()) {
    out += ",\n  \"notices\": [";
    for (std::size_t p = 0; p < report.notices.size(); ++p) {
      if (p) out += ", ";
      out += json(report.notices[p]).dump();  // escapes the string
    }
    out += ']';
  }
  out += "\n}\n";
  return out;
}

CheckReport parse_report_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("report file: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("report file: expected a JSON object");

  CheckReport rep;
  const json& jverdict = field(doc, "verdict");
  if (!jverdict.is_string()) throw ParseError("verdict: expected a string");
  rep.verdict = verdict_from_string(jverdict.get<std::string>());
  const json& jmode = field(doc, "mode");
  if (!jmode.is_string()) throw ParseError("mode: expected a string");
  rep.mode = check_mode_from_string(jmode.get<std::string>());
  rep.min_margin = parse_margin(field(doc, "min_margin"), "min_margin");
  rep.tolerance = finite_number(field(doc, "tolerance"), "tolerance");
  const json& jcount = field(doc, "quadruples_checked");
  if (!jcount.is_number_unsigned())
    throw ParseError("quadruples_checked: expected a nonnegative integer");
  rep.quadruples_checked = jcount.get<std::uint64_t>();
  if (const auto it = doc.find("log_domain"); it != doc.end()) {
    if (!it->is_boolean()) throw ParseError("log_domain: expected a boolean");
    rep.log_domain = it->get<bool>();
  }
  if (const auto it = doc.find("witness"); it != doc.end()) {
    if (!it->is_object()) throw ParseError("witness: expected an object");
    Witness w;
    if (const auto f = it->find("pair"); f != it->end()) w.pair = index_vector(*f, "witness.pair");
    if (const auto f = it->find("context"); f != it->end())
      w.context = index_vector(*f, "witness.context");
    if (const auto f = it->find("indices"); f != it->end())
      w.indices = index_vector(*f, "witness.indices");
    if (const auto f = it->find("x"); f != it->end()) w.x = index_vector(*f, "witness.x");
    if (const auto f = it->find("y"); f != it->end()) w.y = index_vector(*f, "witness.y");
    if (const auto f = it->find("coords"); f != it->end()) {
      if (!f->is_array()) throw ParseError("witness.coords: expected an array");
      for (std::size_t p = 0; p < f->size(); ++p)
        w.coords.push_back(finite_number((*f)[p], "witness.coords[" + std::to_string(p) + "]"));
    }
    rep.witness = std::move(w);
  }
  if (const auto it = doc.find("notices"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("notices: expected an array");
    for (const auto& n : *it) {
      if (!n.is_string()) throw ParseError("notices: expected strings");
      rep.notices.push_back(n.get<std::string>());
    }
  }
  return rep;
}

void write_report_file(const std::filesystem::path& path, const CheckReport& report) {
  write_text(path, report_to_json(report));
}

Direction parse_direction(std::string_view text) {
  std::vector<int> signs;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view tok =
        text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
    if (tok == "+1" || tok == "1") signs.push_back(1);
    else if (tok == "-1") signs.push_back(-1);
    else
      throw ParseError("direction: expected +1 or -1, got '" + std::string(tok) + "'");
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return Direction(std::move(signs));
}

std::string direction_to_string(const Direction& alpha) {
  std::string out;
  for (std::size_t k = 0; k < alpha.dim(); ++k) {
    if (k) out += ',';
    out += alpha[k] == 1 ? "+1" : "-1";
  }
  return out;
}

std::vector<double> parse_grid_spec(std::string_view text) {
  const std::size_t c1 = text.find(':');
  const std::size_t c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c1 == std::string_view::npos || c2 == std::string_view::npos)
    throw ParseError("grid: expected 'lo:hi:n', got '" + std::string(text) + "'");
  double lo = 0, hi = 0;
  long n = 0;
  try {
    lo = std::stod(std::string(text.substr(0, c1)));
    hi = std::stod(std::string(text.substr(c1 + 1, c2 - c1 - 1)));
    n = std::stol(std::string(text.substr(c2 + 1)));
  } catch (const std::exception&) {
    throw ParseError("grid: cannot parse '" + std::string(text) + "'");
  }
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
    throw ParseError("grid: requires finite lo < hi");
  if (n < 2) throw ParseError("grid: needs at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k)
    grid[static_cast<std::size_t>(k)] =
        lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  return grid;
}

std::string density_grid_to_csv(std::span<const double> x_grid,
                                std::span<const double> y_grid,
                                std::span<const double> values) {
  if (values.size() != x_grid.size() * y_grid.size())
    throw std::invalid_argument("density_grid_to_csv: value count mismatch");
  std::string out = "x,y,value\n";
  for (std::size_t xi = 0; xi < x_grid.size(); ++xi)
    for (std::size_t yi = 0; yi < y_grid.size(); ++yi) {
      out += format_double(x_grid[xi]);
      out += ',';
      out += format_double(y_grid[yi]);
      out += ',';
      out += format_double(values[xi * y_grid.size() + yi]);
      out += '\n';
    }
  return out;
}

std::string samples_to_csv(const SampleBatch& batch) {
  std::string out;
  for (int k = 1; k <= batch.d; ++k) {
    if (k > 1) out += ',';
    out += "x" + std::to_string(k);
  }
  out += '\n';
  for (std::size_t r = 0; r < batch.n; ++r) {
    for (int k = 0; k < batch.d; ++k) {
      if (k) out += ',';
      out += format_double(batch.at(r, k));
    }
    out += '\n';
  }
  return out;
}

std::string bins_to_csv(std::span<const GapBinEstimate> bins) {
  std::string out = "bin_low,bin_high,count,estimate,stderr\n";
  for (const auto& b : bins) {
    out += format_double(b.bin_low);
    out += ',';
    out += format_double(b.bin_high);
    out += ',';
    out += std::to_string(b.count);
    out += ',';
    out += format_double(b.estimate);
    out += ',';
    out += format_double(b.stderr_);
    out += '\n';
  }
  return out;
}

}  // namespace totpos
