#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "totpos/io.hpp"
#include "totpos/lattice.hpp"

using namespace totpos;

namespace {

namespace fs = std::filesystem;

fs::path work_dir() {
  const auto dir = fs::temp_directory_path() / "totpos_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

RunResult run(const std::string& args) {
  const auto out_path = work_dir() / "stdout.txt";
  const auto err_path = work_dir() / "stderr.txt";
  const std::string cmd = std::string(TOTPOS_CLI_PATH) + " " + args + " > " +
                          out_path.string() + " 2> " + err_path.string();
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out_path), slurp(err_path)};
}

fs::path write_lattice(const std::string& name, const LatticeDensity& g) {
  const auto path = work_dir() / name;
  write_lattice_file(path, g);
  return path;
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("check: verdicts map to exit codes") {
  const auto pass_path = write_lattice(
      "pass2.json", LatticeDensity::with_unit_axes({2, 2}, {1, 1, 1, 2},
                                                   Interpretation::density_samples));
  const auto r0 = run("check --input " + pass_path.string());
  CHECK(r0.exit_code == 0);
  CHECK(r0.out.find("pass mode=pairs") != std::string::npos);

  const auto fail_path = write_lattice(
      "fail2.json", LatticeDensity::with_unit_axes({2, 2}, {1, 2, 2, 1},
                                                   Interpretation::density_samples));
  const auto report_path = work_dir() / "report.json";
  const auto r1 = run("check --input " + fail_path.string() + " --alpha +1,+1" +
                      " --output " + report_path.string());
  CHECK(r1.exit_code == 1);
  CHECK(r1.out.find("fail") != std::string::npos);
  CHECK(r1.out.find("indices=(0,1,0,1)") != std::string::npos);

  const auto report = parse_report_json(slurp(report_path));
  CHECK(!report.passed());
  CHECK(report.min_margin == -3.0);
  REQUIRE(report.witness.has_value());
  CHECK(report.witness->indices == std::vector<std::size_t>{0, 1, 0, 1});

  // the same table passes in the flipped direction
  const auto r2 = run("check --input " + fail_path.string() + " --alpha +1,-1");
  CHECK(r2.exit_code == 0);
}

TEST_CASE("check: constant lattice passes in every mode") {
  const auto path = write_lattice(
      "const3.json", LatticeDensity::with_unit_axes(
                         {3, 3}, std::vector<double>(9, 1.0 / 9.0), Interpretation::pmf));
  for (const char* mode : {"pairs", "full", "chain", "survival", "negative"}) {
    const auto r = run("check --input " + path.string() + " --mode " + mode);
    CHECK(r.exit_code == 0);
  }
}

TEST_CASE("check: usage and input errors exit 2") {
  const auto path = write_lattice(
      "ok2.json", LatticeDensity::with_unit_axes({2, 2}, {1, 1, 1, 2},
                                                 Interpretation::density_samples));
  // direction length mismatch
  const auto r0 = run("check --input " + path.string() + " --alpha +1,-1,+1");
  CHECK(r0.exit_code == 2);
  CHECK(r0.err.find("error:") != std::string::npos);

  // malformed lattice file names the offending field
  const auto bad = work_dir() / "bad.json";
  std::ofstream(bad) << R"({"shape": [2], "axes": [[0, 1]],
                            "values": [0.5, -0.5], "interpretation": "pmf"})";
  const auto r1 = run("check --input " + bad.string());
  CHECK(r1.exit_code == 2);
  CHECK(r1.err.find("values[1]") != std::string::npos);

  // missing file, unknown flag, missing subcommand, bad mode
  CHECK(run("check --input " + (work_dir() / "nope.json").string()).exit_code == 2);
  CHECK(run("check --input " + path.string() + " --frobnicate").exit_code == 2);
  CHECK(run("").exit_code == 2);
  CHECK(run("check --input " + path.string() + " --mode sideways").exit_code == 2);
  CHECK(run("--help").exit_code == 0);
}

TEST_CASE("osdensity: CSV grid, support clipping, and rank validation") {
  const auto csv_path = work_dir() / "pairdensity.csv";
  const auto r0 = run("osdensity --dist exp:1 --d 3 --i 1 --j 2 --grid 0:5:50"
                      " --output " + csv_path.string());
  CHECK(r0.exit_code == 0);
  const auto csv = slurp(csv_path);
  CHECK(csv.rfind("x,y,value\n", 0) == 0);
  CHECK(line_count(csv) == 2501);  // header + 50*50 rows
  // every value is nonnegative
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    const auto last_comma = line.rfind(',');
    CHECK(std::stod(line.substr(last_comma + 1)) >= 0.0);
  }

  // off-support grid: all-zero output
  const auto r1 = run("osdensity --dist uniform:0,1 --d 3 --i 1 --j 2 --grid 2:3:10");
  CHECK(r1.exit_code == 0);
  std::istringstream zlines(r1.out);
  std::getline(zlines, line);
  while (std::getline(zlines, line)) {
    const auto last_comma = line.rfind(',');
    CHECK(std::stod(line.substr(last_comma + 1)) == 0.0);
  }

  CHECK(run("osdensity --dist exp:1 --d 3 --i 2 --j 2").exit_code == 2);
  CHECK(run("osdensity --dist exp:1 --d 3 --i 1 --j 4").exit_code == 2);
  CHECK(run("osdensity --dist nosuch:1").exit_code == 2);
}

TEST_CASE("osdensity: lattice output feeds straight back into check") {
  const auto lat_path = work_dir() / "pairdensity_lattice.json";
  const auto r0 = run("osdensity --dist exp:1 --d 3 --i 1 --j 2 --grid 0.05:4:20"
                      " --format lattice --output " + lat_path.string());
  CHECK(r0.exit_code == 0);
  const auto lat = read_lattice_file(lat_path);
  CHECK(lat.dim() == 2);
  CHECK(lat.shape() == std::vector<std::size_t>{20, 20});

  const auto r1 = run("check --input " + lat_path.string() + " --alpha +1,+1");
  CHECK(r1.exit_code == 0);
}

TEST_CASE("osdensity: joint density of the k smallest as CSV") {
  const auto r = run("osdensity --dist exp:1 --d 4 --k 3 --grid 0:2:8");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("x1,x2,x3,value\n", 0) == 0);
  CHECK(line_count(r.out) == 121);  // header + C(10,3) nondecreasing triples
  CHECK(run("osdensity --dist exp:1 --d 4 --k 3 --format lattice").exit_code == 2);
  CHECK(run("osdensity --dist exp:1 --d 4 --k 5").exit_code == 2);
}

TEST_CASE("sample: deterministic rows, sorted, bins summary") {
  const auto a_path = work_dir() / "rows_a.csv";
  const auto b_path = work_dir() / "rows_b.csv";
  CHECK(run("sample --dist exp:1 --d 3 --n 10 --seed 7 --output " + a_path.string())
            .exit_code == 0);
  CHECK(run("sample --dist exp:1 --d 3 --n 10 --seed 7 --output " + b_path.string())
            .exit_code == 0);
  const auto a = slurp(a_path), b = slurp(b_path);
  CHECK(a == b);  // byte-identical for a fixed seed
  CHECK(a.rfind("x1,x2,x3\n", 0) == 0);
  CHECK(line_count(a) == 11);
  // each row nondecreasing
  std::istringstream lines(a);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string cell;
    double prev = -1.0;
    while (std::getline(cells, cell, ',')) {
      const double v = std::stod(cell);
      CHECK(v >= prev);
      prev = v;
    }
  }

  const auto c = run("sample --dist exp:1 --d 3 --n 10 --seed 8");
  CHECK(c.out != a);

  const auto bins = run("sample --dist exp:1 --d 2 --n 2000 --seed 3 --bins 4"
                        " --i 1 --j 2 --y 0.5");
  CHECK(bins.exit_code == 0);
  CHECK(bins.out.rfind("bin_low,bin_high,count,estimate,stderr\n", 0) == 0);
  CHECK(line_count(bins.out) == 5);

  CHECK(run("sample --dist exp:1 --n 0").exit_code == 2);
}

TEST_CASE("verify: dfr examples and exit codes") {
  const auto pass = run("verify dfr --dist exp:1");
  CHECK(pass.exit_code == 0);
  CHECK(pass.out.find("PASS dfr") != std::string::npos);

  const auto fail = run("verify dfr --dist weibull:2,1");
  CHECK(fail.exit_code == 1);
  CHECK(fail.out.find("FAIL dfr") != std::string::npos);
  CHECK(fail.out.find("witness") != std::string::npos);

  CHECK(run("verify dfr --dist pareto:1,2").exit_code == 0);
  CHECK(run("verify nosuchprop").exit_code == 2);
}

TEST_CASE("verify: remaining property suites") {
  const auto eq = run("verify equivalence --trials 200 --shape 3,3,3");
  CHECK(eq.exit_code == 0);
  CHECK(eq.out.find("PASS equivalence") != std::string::npos);
  CHECK(eq.out.find("verdict_mismatches=0") != std::string::npos);
  CHECK(eq.out.find("INFO survival-converse") != std::string::npos);

  CHECK(run("verify plrd --dist weibull:0.5,1 --d 4 --i 1 --j 3 --trials 500")
            .exit_code == 0);
  CHECK(run("verify prd --dist exp:1 --d 3 --i 2 --j 3").exit_code == 0);
  CHECK(run("verify prd --dist weibull:2,1 --d 3 --i 2 --j 3").exit_code == 1);
  CHECK(run("verify cis --dist weibull:2,1 --d 4 --i 2").exit_code == 0);
  CHECK(run("verify cis-spacing --dist exp:1 --d 4 --i 2").exit_code == 0);
  CHECK(run("verify cis-spacing --dist weibull:2,1 --d 4 --i 2").exit_code == 1);
  const auto beta = run("verify beta-identity --dist exp:1 --d 3 --i 2 --j 3");
  CHECK(beta.exit_code == 0);
  CHECK(beta.out.find("PASS beta-identity") != std::string::npos);
}
