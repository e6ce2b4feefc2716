#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rigidity {

/// Process exit codes of rigidity_lab.
enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitNumerical = 3 };

struct SampleOptions {
  int n = 0;
  int m = 0;
  int trials = 1;
  std::uint64_t seed = 0;
  bool rescaled = false;
  std::string out;
  int threads = 0;
};

struct ExactOptions {
  int n = 0;
  int m = 0;
  std::vector<std::string> regions;
  bool pmf = false;
  /// Evaluate regions outside the admissible index range instead of rejecting them.
  bool informational = false;
  /// Output directory; empty prints the main table to stdout.
  std::string out;
};

struct ExperimentOptions {
  std::string kind;  // counting | rigidity | variance | dbl
  std::optional<int> n;
  std::optional<int> m;
  std::optional<int> trials;
  std::uint64_t seed = 0;
  std::vector<std::string> batches;
  std::string out;
  int threads = 0;

  std::vector<std::string> regions;
  std::vector<double> t_grid;
  std::vector<int> p_targets;
  std::vector<double> s_grid;
  std::vector<int> m_values;
  double alpha = 0.5;
  /// "annular" (shell, then argument) or "modulus" (modulus, then argument).
  std::string order = "annular";

  std::optional<double> C_bernstein;
  std::optional<double> C_individual;
  std::optional<double> c_individual;
  std::optional<double> C_variance;
};

struct ReportOptions {
  std::string in;
  std::string out;
  bool svg = false;
  /// Batch to draw the spectrum scatter from; defaults to the first *.batch in `in`.
  std::string batch;
  int trial = 0;
};

/// Each command returns an ExitCode and writes diagnostics to `err`.
int cmd_sample(const SampleOptions& opts, std::ostream& out, std::ostream& err);
int cmd_exact(const ExactOptions& opts, std::ostream& out, std::ostream& err);
int cmd_experiment(const ExperimentOptions& opts, std::ostream& out, std::ostream& err);
int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace rigidity
