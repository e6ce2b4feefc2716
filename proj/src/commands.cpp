#include "rigidity/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "rigidity/batch_io.hpp"
#include "rigidity/bounds.hpp"
#include "rigidity/csv.hpp"
#include "rigidity/dpp_analytics.hpp"
#include "rigidity/experiments.hpp"
#include "rigidity/svg.hpp"

namespace fs = std::filesystem;

namespace rigidity {

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

std::string yes_no(bool b) { return b ? "1" : "0"; }

void ensure_dir(const std::string& dir) {
  if (dir.empty()) throw UsageError("--out is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory '" + dir + "'");
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

double safe_index_bound(const EnsembleParams& params) {
  try {
    return valid_index_bound(params);
  } catch (const std::exception&) {
    return 0.0;
  }
}

void require_admissible(const CountingRegion& region, const EnsembleParams& params) {
  if (region.kind() == CountingRegion::Kind::custom_disc) return;  // support check happens in region_mass
  if (!counting_index_admissible(region.index(), params)) {
    throw std::domain_error("region " + region.label() + " outside the admissible index range: index must be <= " +
                            format_number(safe_index_bound(params)) + " at n=" + std::to_string(params.n()) +
                            " m=" + std::to_string(params.m()) + " (use --informational to evaluate anyway)");
  }
}

void write_meta(const std::string& dir, const std::vector<std::pair<std::string, std::string>>& entries) {
  CsvTable meta;
  meta.header = {"key", "value"};
  for (const auto& [k, v] : entries) meta.rows.push_back({k, v});
  write_csv_file(join(dir, "run_meta.csv"), meta);
}

SpectrumBatch obtain_batch(const ExperimentOptions& opts) {
  if (!opts.batches.empty()) {
    if (opts.batches.size() > 1) throw UsageError("experiment " + opts.kind + " takes a single --batch");
    SpectrumBatch batch = read_batch_file(opts.batches.front());
    if (batch.params.rescaled()) throw UsageError("experiment " + opts.kind + " needs a batch in raw coordinates");
    if (batch.samples.empty()) throw UsageError("batch '" + opts.batches.front() + "' holds no trials");
    return batch;
  }
  if (!opts.n || !opts.m || !opts.trials) {
    throw UsageError("experiment " + opts.kind + " needs --batch or all of --n, --m, --trials");
  }
  return sample_spectra(EnsembleParams(*opts.n, *opts.m, false), *opts.trials, opts.seed, opts.threads);
}

std::vector<std::pair<std::string, std::string>> batch_meta(const std::string& kind, const SpectrumBatch& b) {
  return {{"experiment", kind},
          {"n", std::to_string(b.params.n())},
          {"m", std::to_string(b.params.m())},
          {"rescaled", yes_no(b.params.rescaled())},
          {"seed", std::to_string(b.seed)},
          {"trials", std::to_string(b.trials())},
          {"failures", std::to_string(b.failures)}};
}

int run_counting(const ExperimentOptions& opts, std::ostream& out) {
  if (opts.regions.empty()) throw UsageError("counting needs at least one --region");
  ExperimentConfig cfg;
  for (const auto& r : opts.regions) cfg.regions.push_back(CountingRegion::parse(r));
  cfg.t_grid = opts.t_grid;
  if (cfg.t_grid.empty())
    for (int t = 0; t <= 12; ++t) cfg.t_grid.push_back(t);
  const SpectrumBatch batch = obtain_batch(opts);
  cfg.params = batch.params;
  cfg.constants = TheoremConstants::for_alpha(batch.params.alpha());
  bool constrained = false;
  if (opts.C_bernstein) {
    cfg.constants.C_alpha_bernstein = *opts.C_bernstein;
  } else {
    cfg.constants.C_alpha_bernstein = calibrate_bernstein(KernelContext(batch.params), cfg.regions, cfg.t_grid,
                                                          &constrained);
  }
  const CountingReport report = run_counting_experiment(cfg, batch);

  CsvTable tails;
  tails.header = {"region", "t", "emp_tail", "emp_se", "exact_tail", "bound"};
  CsvTable summary;
  summary.header = {"region",     "admissible",         "center",
                    "emp_mean",   "emp_var",            "exact_mean",
                    "exact_var_spectral", "exact_var_decomposed"};
  CsvTable about_mean;
  about_mean.header = {"region", "t", "emp_tail", "emp_se", "exact_tail"};
  for (const auto& row : report.rows) {
    const std::string label = row.region.label();
    summary.rows.push_back({label, yes_no(row.admissible), format_number(row.center),
                            format_number(row.empirical_mean), format_number(row.empirical_variance),
                            format_number(row.exact_mean), format_number(row.exact_variance_spectral),
                            format_number(row.exact_variance_decomposed)});
    for (const auto& t : row.tails) {
      tails.rows.push_back({label, format_number(t.t), format_number(t.empirical.value),
                            format_number(t.empirical.std_error), format_number(t.exact), format_number(t.bound)});
      about_mean.rows.push_back({label, format_number(t.t), format_number(t.empirical_about_mean.value),
                                 format_number(t.empirical_about_mean.std_error), format_number(t.exact_about_mean)});
    }
  }
  ensure_dir(opts.out);
  write_csv_file(join(opts.out, "counting.csv"), tails);
  write_csv_file(join(opts.out, "counting_summary.csv"), summary);
  write_csv_file(join(opts.out, "counting_about_mean.csv"), about_mean);
  auto meta = batch_meta("counting", batch);
  meta.push_back({"C_alpha_bernstein", format_number(cfg.constants.C_alpha_bernstein)});
  meta.push_back({"C_alpha_bernstein_source", opts.C_bernstein ? "flag" : "calibrated_exact_tails"});
  meta.push_back({"C_alpha_bernstein_constrained", yes_no(opts.C_bernstein || constrained)});
  write_meta(opts.out, meta);
  out << "counting: " << report.rows.size() << " regions, " << batch.trials() << " trials, " << batch.failures
      << " failures -> " << opts.out << '\n';
  return kExitOk;
}

SpiralConvention parse_order(const std::string& s) {
  if (s == "annular") return SpiralConvention::annular;
  if (s == "modulus") return SpiralConvention::modulus;
  throw UsageError("--order must be 'annular' or 'modulus'");
}

// Fitted constants unless every one was given on the command line.
Calibration constants_for(const ExperimentOptions& opts, const ExperimentConfig& cfg, const SpectrumBatch& batch) {
  Calibration cal;
  if (!(opts.C_individual && opts.c_individual && opts.C_variance)) cal = calibrate_constants(cfg, batch);
  else cal.constants = TheoremConstants::for_alpha(batch.params.alpha());
  if (opts.C_individual) cal.constants.C_alpha_individual = *opts.C_individual;
  if (opts.c_individual) cal.constants.c_alpha_individual = *opts.c_individual;
  if (opts.C_variance) cal.constants.C_alpha_variance = *opts.C_variance;
  return cal;
}

int run_rigidity(const ExperimentOptions& opts, std::ostream& out) {
  const SpectrumBatch batch = obtain_batch(opts);
  ExperimentConfig cfg;
  cfg.params = batch.params;
  cfg.order = parse_order(opts.order);
  cfg.p_targets = opts.p_targets.empty() ? std::vector<int>{5, 10, 17} : opts.p_targets;
  cfg.s_grid = opts.s_grid;
  if (cfg.s_grid.empty()) {
    double top = 0.0;
    for (int p : cfg.p_targets) top = std::max(top, rigidity_support_cutoff(p, batch.params));
    for (double s = 0.0; s <= top + 1.0; s += 0.25) cfg.s_grid.push_back(s);
  }
  const Calibration cal = constants_for(opts, cfg, batch);
  cfg.constants = cal.constants;
  const RigidityReport report = run_rigidity_experiment(cfg, batch);

  CsvTable table;
  table.header = {"p", "s", "emp_freq", "emp_se", "bound_small_s", "bound_large_s"};
  CsvTable summary;
  summary.header = {"p", "admissible", "support_cutoff", "median_deviation", "max_deviation", "bound_median_s"};
  for (const auto& row : report.rows) {
    const double bound_median =
        shell_index(row.p) >= 2 ? individual_bound_quantile(cfg.constants, row.p, 0.5) : std::nan("");
    summary.rows.push_back({std::to_string(row.p), yes_no(row.admissible), format_number(row.support_cutoff),
                            format_number(row.median_deviation), format_number(row.max_deviation),
                            format_number(bound_median)});
    for (const auto& pt : row.points) {
      table.rows.push_back({std::to_string(row.p), format_number(pt.s), format_number(pt.empirical.value),
                            format_number(pt.empirical.std_error), format_number(pt.bound.small_s),
                            format_number(pt.bound.large_s)});
    }
  }
  ensure_dir(opts.out);
  write_csv_file(join(opts.out, "rigidity.csv"), table);
  write_csv_file(join(opts.out, "rigidity_summary.csv"), summary);
  auto meta = batch_meta("rigidity", batch);
  meta.push_back({"order", opts.order});
  meta.push_back({"C_alpha_individual", format_number(cfg.constants.C_alpha_individual)});
  meta.push_back({"c_alpha_individual", format_number(cfg.constants.c_alpha_individual)});
  meta.push_back({"C_alpha_individual_constrained", yes_no(opts.C_individual || cal.individual_small_constrained)});
  meta.push_back({"c_alpha_individual_constrained", yes_no(opts.c_individual || cal.individual_large_constrained)});
  write_meta(opts.out, meta);
  out << "rigidity: " << report.rows.size() << " targets, " << batch.trials() << " trials -> " << opts.out << '\n';
  return kExitOk;
}

int run_variance(const ExperimentOptions& opts, std::ostream& out) {
  const SpectrumBatch batch = obtain_batch(opts);
  ExperimentConfig cfg;
  cfg.params = batch.params;
  cfg.order = parse_order(opts.order);
  cfg.p_targets = opts.p_targets.empty() ? std::vector<int>{5, 10, 17, 26} : opts.p_targets;
  const Calibration cal = constants_for(opts, cfg, batch);
  cfg.constants = cal.constants;
  const VarianceReport report = run_variance_experiment(cfg, batch);

  CsvTable table;
  table.header = {"p", "emp_var", "jackknife_se", "scaling_column"};
  for (const auto& row : report.rows) {
    table.rows.push_back({std::to_string(row.p), format_number(row.empirical_variance),
                          format_number(row.jackknife_se), format_number(row.scaling)});
  }
  ensure_dir(opts.out);
  write_csv_file(join(opts.out, "variance.csv"), table);
  auto meta = batch_meta("variance", batch);
  meta.push_back({"order", opts.order});
  meta.push_back({"C_alpha_variance", format_number(cfg.constants.C_alpha_variance)});
  meta.push_back({"C_alpha_variance_constrained", yes_no(opts.C_variance || cal.variance_constrained)});
  write_meta(opts.out, meta);
  out << "variance: " << report.rows.size() << " targets, " << batch.trials() << " trials -> " << opts.out << '\n';
  return kExitOk;
}

int run_dbl(const ExperimentOptions& opts, std::ostream& out) {
  std::vector<SpectrumBatch> batches;
  if (!opts.batches.empty()) {
    for (const auto& path : opts.batches) {
      SpectrumBatch b = read_batch_file(path);
      if (!b.params.rescaled()) throw UsageError("dbl needs rescaled batches ('" + path + "' is raw)");
      if (b.samples.empty()) throw UsageError("batch '" + path + "' holds no trials");
      batches.push_back(std::move(b));
    }
  } else {
    if (!opts.trials) throw UsageError("dbl needs --batch or --trials");
    if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
    const std::vector<int> ms = opts.m_values.empty() ? std::vector<int>{16, 32, 64} : opts.m_values;
    for (int m : ms) {
      const int n = static_cast<int>(std::lround(m / opts.alpha));
      batches.push_back(sample_spectra(EnsembleParams(n, m, true), *opts.trials, opts.seed, opts.threads));
    }
  }
  const DblReport report = run_dbl_experiment(batches);
  CsvTable table;
  table.header = {"m", "median_proxy", "q90_proxy", "paper_bound_at_median"};
  for (const auto& row : report.rows) {
    table.rows.push_back({std::to_string(row.m), format_number(row.median_proxy), format_number(row.q90_proxy),
                          format_number(row.bound_at_median)});
  }
  ensure_dir(opts.out);
  write_csv_file(join(opts.out, "dbl.csv"), table);
  std::vector<std::pair<std::string, std::string>> meta = {{"experiment", "dbl"}, {"seed", std::to_string(opts.seed)}};
  int trials = 0;
  for (const auto& b : batches) {
    const std::string tag = "m" + std::to_string(b.params.m());
    meta.push_back({tag + "_n", std::to_string(b.params.n())});
    meta.push_back({tag + "_trials", std::to_string(b.trials())});
    meta.push_back({tag + "_failures", std::to_string(b.failures)});
    trials = trials == 0 ? b.trials() : std::min(trials, b.trials());
  }
  meta.push_back({"trials", std::to_string(trials)});
  meta.push_back({"proxy", "W1 to predicted lattice (upper bound on d_BL)"});
  write_meta(opts.out, meta);
  out << "dbl: " << report.rows.size() << " sizes -> " << opts.out << '\n';
  return kExitOk;
}

}  // namespace

int cmd_sample(const SampleOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.out.empty()) throw UsageError("--out is required");
    if (opts.trials < 1) throw UsageError("--trials must be >= 1");
    const EnsembleParams params(opts.n, opts.m, opts.rescaled);
    const SpectrumBatch batch = sample_spectra(params, opts.trials, opts.seed, opts.threads);
    write_batch_file(opts.out, batch);
    out << "wrote " << batch.trials() << " trials (" << batch.failures << " failed) to " << opts.out << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_exact(const ExactOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.regions.empty()) throw UsageError("exact needs at least one --region");
    const EnsembleParams params(opts.n, opts.m, false);
    std::vector<CountingRegion> regions;
    for (const auto& r : opts.regions) {
      regions.push_back(CountingRegion::parse(r));
      if (!opts.informational) require_admissible(regions.back(), params);
    }
    const KernelContext ctx(params);
    CsvTable table;
    table.header = {"region", "mu_alpha_mass", "exact_mean", "exact_var_spectral", "exact_var_decomposed"};
    CsvTable pmf;
    pmf.header = {"region", "k", "prob"};
    for (const auto& region : regions) {
      double mass = std::nan("");
      try {
        mass = region_mass(params, region);
      } catch (const std::domain_error&) {
        if (!opts.informational) throw;
      }
      const double decomposed =
          region.kind() == CountingRegion::Kind::sector ? variance_exact_decomposed(ctx, region) : std::nan("");
      table.rows.push_back({region.label(), format_number(mass), format_number(expected_count_exact(ctx, region)),
                            format_number(variance_exact_spectral(ctx, region)), format_number(decomposed)});
      if (opts.pmf) {
        const CountDistribution dist = count_distribution(ctx, region);
        for (std::size_t k = 0; k < dist.pmf.size(); ++k)
          pmf.rows.push_back({region.label(), std::to_string(k), format_number(dist.pmf[k])});
      }
    }
    if (opts.out.empty()) {
      out << emit_csv(table);
      if (opts.pmf) out << '\n' << emit_csv(pmf);
    } else {
      ensure_dir(opts.out);
      write_csv_file(join(opts.out, "exact.csv"), table);
      if (opts.pmf) write_csv_file(join(opts.out, "pmf.csv"), pmf);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_experiment(const ExperimentOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.out.empty()) throw UsageError("--out is required");
    if (opts.trials && *opts.trials < 1) throw UsageError("--trials must be >= 1");
    if (opts.kind == "counting") return run_counting(opts, out);
    if (opts.kind == "rigidity") return run_rigidity(opts, out);
    if (opts.kind == "variance") return run_variance(opts, out);
    if (opts.kind == "dbl") return run_dbl(opts, out);
    throw UsageError("unknown experiment '" + opts.kind + "'");
  });
}

namespace {

int meta_trials(const std::string& dir, std::ostream& err) {
  const std::string path = join(dir, "run_meta.csv");
  if (fs::exists(path)) {
    const CsvTable meta = read_csv_file(path);
    for (std::size_t r = 0; r < meta.rows.size(); ++r) {
      if (meta.cell(r, "key") == "trials") return static_cast<int>(meta.number(r, "value"));
    }
  }
  err << "warning: no trial count in " << path << "; zero-frequency floor uses T = 1\n";
  return 1;
}

// Groups rows by `key`, keeping first-appearance order.
std::vector<std::pair<std::string, std::vector<std::size_t>>> group_rows(const CsvTable& t, const std::string& key) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::string& k = t.cell(r, key);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == k; });
    if (it == groups.end()) groups.push_back({k, {r}});
    else it->second.push_back(r);
  }
  return groups;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<TailSeries> series_from(const CsvTable& t, const std::vector<std::size_t>& rows, const std::string& x,
                                    const std::vector<std::string>& ys) {
  std::vector<TailSeries> out;
  for (const auto& y : ys) {
    if (t.column(y) < 0) continue;
    TailSeries s;
    s.name = y;
    for (std::size_t r : rows) {
      s.x.push_back(t.number(r, x));
      s.y.push_back(t.number(r, y));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string file_safe(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  return s;
}

}  // namespace

int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.in.empty() || opts.out.empty()) throw UsageError("report needs --in and --out");
    if (!fs::is_directory(opts.in)) throw UsageError("--in '" + opts.in + "' is not a directory");
    std::vector<fs::path> csvs;
    std::string batch_path = opts.batch;
    std::vector<fs::path> entries;
    for (const auto& e : fs::directory_iterator(opts.in)) entries.push_back(e.path());
    std::sort(entries.begin(), entries.end());
    for (const auto& p : entries) {
      if (p.extension() == ".csv") csvs.push_back(p);
      if (batch_path.empty() && p.extension() == ".batch") batch_path = p.string();
    }
    ensure_dir(opts.out);
    if (csvs.empty() && batch_path.empty()) {
      err << "warning: no CSV tables or batch files in '" << opts.in << "'; report is empty\n";
      return static_cast<int>(kExitOk);
    }

    int written = 0;
    for (const auto& p : csvs) {
      const CsvTable t = read_csv_file(p.string());
      write_csv_file(join(opts.out, p.filename().string()), t);
      ++written;
    }
    if (opts.svg) {
      const int trials = csvs.empty() ? 1 : meta_trials(opts.in, err);
      for (const auto& p : csvs) {
        const std::string name = p.filename().string();
        const CsvTable t = read_csv_file(p.string());
        if (name == "counting.csv") {
          for (const auto& [region, rows] : group_rows(t, "region")) {
            write_text(join(opts.out, "tail_counting_" + file_safe(region) + ".svg"),
                       tail_plot_svg("P[|N - center| >= t], " + region, "t",
                                     series_from(t, rows, "t", {"emp_tail", "exact_tail", "bound"}), trials));
            ++written;
          }
        } else if (name == "rigidity.csv") {
          for (const auto& [p_label, rows] : group_rows(t, "p")) {
            write_text(join(opts.out, "tail_rigidity_p" + file_safe(p_label) + ".svg"),
                       tail_plot_svg("P[scaled deviation >= s], p = " + p_label, "s",
                                     series_from(t, rows, "s", {"emp_freq", "bound_small_s", "bound_large_s"}),
                                     trials));
            ++written;
          }
        }
      }
      if (!batch_path.empty()) {
        const SpectrumBatch batch = read_batch_file(batch_path);
        const auto it = std::find_if(batch.samples.begin(), batch.samples.end(),
                                     [&](const SpectrumSample& s) { return s.trial == static_cast<std::uint64_t>(opts.trial); });
        if (it == batch.samples.end()) throw UsageError("trial " + std::to_string(opts.trial) + " not in " + batch_path);
        write_text(join(opts.out, "spectrum.svg"), spectrum_scatter_svg(*it, batch.params));
        ++written;
      }
    }
    out << "report: " << written << " files -> " << opts.out << '\n';
    return static_cast<int>(kExitOk);
  });
}

}  // namespace rigidity
