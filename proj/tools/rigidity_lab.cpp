#include <iostream>

#include "CLI11.hpp"
#include "rigidity/commands.hpp"

using namespace rigidity;

int main(int argc, char** argv) {
  CLI::App app{"rigidity_lab: eigenvalue statistics of truncated Haar unitaries"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = RIGIDITY_LAB_THREADS or all cores)");

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "sample truncation spectra into a batch file");
  sample_cmd->add_option("--n", sample.n, "unitary dimension")->required();
  sample_cmd->add_option("--m", sample.m, "truncation size, 1 <= m < n")->required();
  sample_cmd->add_option("--trials", sample.trials, "number of trials")->required();
  sample_cmd->add_option("--seed", sample.seed, "master seed");
  sample_cmd->add_flag("--rescaled", sample.rescaled, "multiply by sqrt(n/m)");
  sample_cmd->add_option("--out", sample.out, "batch file to write")->required();

  ExactOptions exact;
  auto* exact_cmd = app.add_subcommand("exact", "exact counting statistics of regions");
  exact_cmd->add_option("--n", exact.n)->required();
  exact_cmd->add_option("--m", exact.m)->required();
  exact_cmd->add_option("--region", exact.regions, "i[,theta] | sector:i:theta | disc:i | annulus:l | radius:r")
      ->required();
  exact_cmd->add_flag("--pmf", exact.pmf, "also emit the count pmf");
  exact_cmd->add_flag("--informational", exact.informational, "allow regions outside the admissible range");
  exact_cmd->add_option("--out", exact.out, "output directory (default: stdout)");

  ExperimentOptions exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo experiments");
  exp_cmd->require_subcommand(1);
  auto add_common = [&](CLI::App* c) {
    c->add_option("--n", exp.n);
    c->add_option("--m", exp.m);
    c->add_option("--trials", exp.trials);
    c->add_option("--seed", exp.seed);
    c->add_option("--batch", exp.batches, "reuse sampled spectra");
    c->add_option("--out", exp.out, "output directory")->required();
    c->add_option("--C-bernstein", exp.C_bernstein);
    c->add_option("--C-individual", exp.C_individual);
    c->add_option("--c-individual", exp.c_individual);
    c->add_option("--C-variance", exp.C_variance);
  };
  auto* counting = exp_cmd->add_subcommand("counting", "counting-function tails");
  add_common(counting);
  counting->add_option("--region", exp.regions);
  counting->add_option("--t-grid", exp.t_grid)->delimiter(',');
  auto* rigidity = exp_cmd->add_subcommand("rigidity", "individual eigenvalue deviations");
  add_common(rigidity);
  rigidity->add_option("--p", exp.p_targets)->delimiter(',');
  rigidity->add_option("--s-grid", exp.s_grid)->delimiter(',');
  rigidity->add_option("--order", exp.order, "eigenvalue labelling: annular | modulus");
  auto* variance = exp_cmd->add_subcommand("variance", "per-eigenvalue variances");
  add_common(variance);
  variance->add_option("--p", exp.p_targets)->delimiter(',');
  variance->add_option("--order", exp.order, "eigenvalue labelling: annular | modulus");
  auto* dbl = exp_cmd->add_subcommand("dbl", "W1 proxy for the macroscopic distance");
  add_common(dbl);
  dbl->add_option("--m-values", exp.m_values)->delimiter(',');
  dbl->add_option("--alpha", exp.alpha);

  ReportOptions report;
  auto* report_cmd = app.add_subcommand("report", "re-emit CSV tables and draw SVG figures");
  report_cmd->add_option("--in", report.in)->required();
  report_cmd->add_option("--out", report.out)->required();
  report_cmd->add_flag("--svg", report.svg);
  report_cmd->add_option("--batch", report.batch, "batch file for the spectrum scatter");
  report_cmd->add_option("--trial", report.trial);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  if (*sample_cmd) {
    sample.threads = threads;
    return cmd_sample(sample, std::cout, std::cerr);
  }
  if (*exact_cmd) return cmd_exact(exact, std::cout, std::cerr);
  if (*exp_cmd) {
    for (auto* sub : {counting, rigidity, variance, dbl})
      if (*sub) exp.kind = sub->get_name();
    exp.threads = threads;
    return cmd_experiment(exp, std::cout, std::cerr);
  }
  return cmd_report(report, std::cout, std::cerr);
}
