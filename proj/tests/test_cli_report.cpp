#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "rigidity/batch_io.hpp"
#include "rigidity/csv.hpp"
#include "rigidity/svg.hpp"

using namespace rigidity;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rigidity_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(RIGIDITY_LAB_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("csv round trip") {
  CsvTable t;
  t.header = {"region", "value"};
  t.rows = {{"sector:3:3.1415926535897931", "0.25"}, {"a,b", "say \"hi\""}, {"x\ny", ""}};
  const std::string text = emit_csv(t);
  const CsvTable back = parse_csv(text);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(emit_csv(back) == text);
  CHECK(text.find('\r') == std::string::npos);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), FormatError);
  CHECK_THROWS_AS(parse_csv("a\n\"open\n"), FormatError);
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0})
    CHECK(parse_number(format_number(x)) == x);
  CHECK(format_number(0.1) == "0.1");
  CHECK(std::isnan(parse_number(format_number(std::nan("")))));
  CHECK(parse_number("inf") == INFINITY);
  CHECK_THROWS_AS(parse_number("1.5x"), FormatError);
}

TEST_CASE("batch round trip is bit exact") {
  const SpectrumBatch b = sample_spectra(EnsembleParams(12, 5), 4, 3);
  std::stringstream ss;
  write_batch(ss, b);
  const SpectrumBatch back = read_batch(ss);
  CHECK(back.params.n() == 12);
  CHECK(back.params.m() == 5);
  CHECK(back.seed == 3);
  REQUIRE(back.trials() == 4);
  for (int t = 0; t < 4; ++t) CHECK(back.samples[t].values() == b.samples[t].values());
  std::stringstream bad("format_version=2 n=4 m=2 rescaled=0 seed=1 trial_count=0\n");
  CHECK_THROWS_AS(read_batch(bad), FormatError);
  std::stringstream short_rec("format_version=1 n=4 m=2 rescaled=0 seed=1 trial_count=1\n0 0.1 0.2\n");
  CHECK_THROWS_AS(read_batch(short_rec), FormatError);
  std::stringstream wrong_count("format_version=1 n=4 m=2 rescaled=0 seed=1 trial_count=2\n0 0.1 0.2 0.3 0.4\n");
  CHECK_THROWS_AS(read_batch(wrong_count), FormatError);
}

TEST_CASE("svg element counts") {
  const EnsembleParams p(64, 32);
  const SpectrumBatch b = sample_spectra(p, 1, 1);
  const std::string svg = spectrum_scatter_svg(b.samples[0], p);
  CHECK(count_of(svg, "class=\"eigenvalue\"") == 32);
  CHECK(count_of(svg, "class=\"predicted\"") == 32);
  CHECK(count_of(svg, "class=\"annulus\"") == 6);
  const std::string tail = tail_plot_svg("t", "x", {{"emp", {0, 1, 2}, {1.0, 0.0, 0.5}}}, 100);
  CHECK(tail.find("1/(2T)") != std::string::npos);
}

TEST_CASE("sample command") {
  const fs::path dir = scratch("sample");
  const std::string a = (dir / "a.batch").string(), b = (dir / "b.batch").string();
  REQUIRE(run("sample --n 4 --m 2 --trials 3 --seed 7 --out " + a) == 0);
  REQUIRE(run("sample --n 4 --m 2 --trials 3 --seed 7 --out " + b) == 0);
  CHECK(slurp(a) == slurp(b));
  const SpectrumBatch batch = read_batch_file(a);
  CHECK(batch.trials() == 3);
  for (const auto& s : batch.samples) CHECK(s.size() == 2u);
  CHECK(run("sample --n 4 --m 4 --trials 3 --seed 7 --out " + a) == 2);
  CHECK(run("sample --n 4 --m 2 --trials 3 --seed 7") == 2);
  CHECK(run("sample --n 4 --m 2 --trials 3 --out /nonexistent/dir/x.batch") == 2);
  CHECK(run("bogus") == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("exact command") {
  const fs::path dir = scratch("exact");
  REQUIRE(run("exact --n 64 --m 32 --region disc:3 --region 2,3.14159 --pmf --out " + dir.string()) == 0);
  const CsvTable t = read_csv_file((dir / "exact.csv").string());
  CHECK(t.header == std::vector<std::string>{"region", "mu_alpha_mass", "exact_mean", "exact_var_spectral",
                                             "exact_var_decomposed"});
  REQUIRE(t.rows.size() == 2);
  const double mean = t.number(0, "exact_mean");
  CHECK(mean >= 5.0);
  CHECK(mean <= 9.0);
  const CsvTable pmf = read_csv_file((dir / "pmf.csv").string());
  double total = 0.0;
  for (std::size_t r = 0; r < pmf.rows.size(); ++r)
    if (pmf.cell(r, "region") == "disc:3") total += pmf.number(r, "prob");
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

  const fs::path dir2 = scratch("exact_annulus");
  REQUIRE(run("exact --n 100 --m 50 --region annulus:4 --out " + dir2.string()) == 0);
  const CsvTable a = read_csv_file((dir2 / "exact.csv").string());
  CHECK(a.number(0, "mu_alpha_mass") == doctest::Approx(0.14).epsilon(1e-14));

  CHECK(run("exact --n 64 --m 32 --region disc:5 --out " + dir.string()) == 2);
  CHECK(run("exact --n 64 --m 32 --region disc:5 --informational --out " + dir.string()) == 0);
  CHECK(run("exact --n 64 --m 32 --region blob:1") == 2);
}

TEST_CASE("experiment commands") {
  const fs::path dir = scratch("experiment");
  const std::string batch = (dir / "raw.batch").string();
  REQUIRE(run("sample --n 64 --m 32 --trials 200 --seed 3 --out " + batch) == 0);

  const fs::path cnt = dir / "counting";
  REQUIRE(run("experiment counting --batch " + batch + " --region 3 --t-grid 0,1,2 --out " + cnt.string()) == 0);
  const CsvTable c = read_csv_file((cnt / "counting.csv").string());
  CHECK(c.header == std::vector<std::string>{"region", "t", "emp_tail", "emp_se", "exact_tail", "bound"});
  CHECK(c.number(0, "t") == 0.0);
  CHECK(c.number(0, "emp_tail") == 1.0);

  const fs::path rig = dir / "rigidity";
  REQUIRE(run("experiment rigidity --batch " + batch + " --p 10 --s-grid 1,100 --out " + rig.string()) == 0);
  const CsvTable r = read_csv_file((rig / "rigidity.csv").string());
  CHECK(r.header == std::vector<std::string>{"p", "s", "emp_freq", "emp_se", "bound_small_s", "bound_large_s"});
  CHECK(r.number(1, "emp_freq") == 0.0);
  CHECK(r.number(1, "bound_small_s") == 0.0);
  CHECK(r.number(1, "bound_large_s") == 0.0);

  const fs::path var = dir / "variance";
  REQUIRE(run("experiment variance --batch " + batch + " --p 5,10 --out " + var.string()) == 0);
  const CsvTable v = read_csv_file((var / "variance.csv").string());
  CHECK(v.header == std::vector<std::string>{"p", "emp_var", "jackknife_se", "scaling_column"});
  CHECK(v.rows.size() == 2);

  const fs::path dbl = dir / "dbl";
  REQUIRE(run("experiment dbl --trials 40 --seed 2 --m-values 16,32,64 --out " + dbl.string()) == 0);
  const CsvTable d = read_csv_file((dbl / "dbl.csv").string());
  CHECK(d.header == std::vector<std::string>{"m", "median_proxy", "q90_proxy", "paper_bound_at_median"});
  REQUIRE(d.rows.size() == 3);
  CHECK(d.number(0, "median_proxy") > d.number(1, "median_proxy"));
  CHECK(d.number(1, "median_proxy") > d.number(2, "median_proxy"));

  CHECK(run("experiment counting --region 3 --out " + (dir / "x").string()) == 2);
  CHECK(run("experiment dbl --batch " + batch + " --out " + (dir / "x").string()) == 2);
  CHECK(run("experiment rigidity --batch " + batch + " --order spiral --out " + (dir / "x").string()) == 2);
  // Sector 8 at m = 32 has a nominal center of 81, far above any possible count,
  // so no Bernstein constant can dominate its tails.
  CHECK(run("experiment counting --batch " + batch + " --region 8 --t-grid 48 --out " + (dir / "x").string()) == 3);
}

TEST_CASE("report command") {
  const fs::path dir = scratch("report");
  const fs::path empty = dir / "empty";
  fs::create_directories(empty);
  CHECK(run("report --in " + empty.string() + " --out " + (dir / "o0").string()) == 0);
  CHECK(run("report --in " + (dir / "missing").string() + " --out " + (dir / "o1").string()) == 2);

  const fs::path in = dir / "in";
  fs::create_directories(in);
  REQUIRE(run("sample --n 64 --m 32 --trials 30 --seed 5 --out " + (in / "s.batch").string()) == 0);
  REQUIRE(run("experiment counting --batch " + (in / "s.batch").string() + " --region 2,3.14 --t-grid 0,1,2,3 --out " +
              in.string()) == 0);
  const fs::path out = dir / "out";
  REQUIRE(run("report --svg --in " + in.string() + " --out " + out.string()) == 0);
  CHECK(slurp(out / "counting.csv") == slurp(in / "counting.csv"));
  const std::string scatter = slurp(out / "spectrum.svg");
  CHECK(count_of(scatter, "class=\"eigenvalue\"") == 32);
  CHECK(count_of(scatter, "class=\"annulus\"") == 6);
  bool tail_plot = false;
  for (const auto& e : fs::directory_iterator(out))
    if (e.path().filename().string().rfind("tail_counting_", 0) == 0) tail_plot = true;
  CHECK(tail_plot);

  std::ofstream(in / "broken.csv") << "a,b\n1\n";
  CHECK(run("report --in " + in.string() + " --out " + (dir / "o2").string()) == 2);
}
