#include "rigidity/batch_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace rigidity {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

long long parse_int(const std::string& text, const std::string& what) {
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0' || errno != 0) throw FormatError("batch: bad integer for " + what + ": '" + text + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || text[0] == '-' || *end != '\0' || errno != 0) {
    throw FormatError("batch: bad unsigned integer for " + what + ": '" + text + "'");
  }
  return v;
}

double parse_real(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') throw FormatError("batch: bad number '" + text + "'");
  return v;
}

}  // namespace

void write_batch(std::ostream& out, const SpectrumBatch& batch) {
  out << "format_version=" << kBatchFormatVersion << " n=" << batch.params.n() << " m=" << batch.params.m()
      << " rescaled=" << (batch.params.rescaled() ? 1 : 0) << " seed=" << batch.seed
      << " trial_count=" << batch.samples.size() << '\n';
  for (const auto& s : batch.samples) {
    out << s.trial;
    for (const auto& pt : s.points) out << ' ' << g17(pt.value.real()) << ' ' << g17(pt.value.imag());
    out << '\n';
  }
}

SpectrumBatch read_batch(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("batch: missing header");
  std::map<std::string, std::string> header;
  {
    std::istringstream hs(line);
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw FormatError("batch: malformed header field '" + tok + "'");
      header[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
  }
  for (const char* key : {"format_version", "n", "m", "rescaled", "seed", "trial_count"}) {
    if (!header.count(key)) throw FormatError(std::string("batch: header lacks ") + key);
  }
  if (parse_int(header["format_version"], "format_version") != kBatchFormatVersion) {
    throw FormatError("batch: unsupported format_version " + header["format_version"]);
  }
  const int n = static_cast<int>(parse_int(header["n"], "n"));
  const int m = static_cast<int>(parse_int(header["m"], "m"));
  const long long rescaled = parse_int(header["rescaled"], "rescaled");
  if (rescaled != 0 && rescaled != 1) throw FormatError("batch: rescaled must be 0 or 1");
  const long long count = parse_int(header["trial_count"], "trial_count");
  if (count < 0) throw FormatError("batch: negative trial_count");

  SpectrumBatch batch;
  try {
    batch.params = EnsembleParams(n, m, rescaled == 1);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("batch: ") + e.what());
  }
  batch.seed = parse_u64(header["seed"], "seed");

  std::uint64_t next = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream rs(line);
    std::string tok;
    rs >> tok;
    const std::uint64_t trial = parse_u64(tok, "trial_index");
    if (trial < next) throw FormatError("batch: trial indices must increase");
    next = trial + 1;
    std::vector<Complex> values;
    std::string re, im;
    while (rs >> re) {
      if (!(rs >> im)) throw FormatError("batch: record " + tok + " has an unpaired coordinate");
      values.emplace_back(parse_real(re), parse_real(im));
    }
    if (static_cast<int>(values.size()) != m) {
      throw FormatError("batch: record " + tok + " has " + std::to_string(values.size()) + " eigenvalues, expected " +
                        std::to_string(m));
    }
    batch.samples.push_back(SpectrumSample::from_values(values, rescaled == 1, batch.seed, trial));
  }
  if (static_cast<long long>(batch.samples.size()) != count) {
    throw FormatError("batch: header trial_count " + std::to_string(count) + " but " +
                      std::to_string(batch.samples.size()) + " records");
  }
  batch.requested = static_cast<int>(next);
  batch.failures = batch.requested - batch.trials();
  return batch;
}

void write_batch_file(const std::string& path, const SpectrumBatch& batch) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_batch(out, batch);
  if (!out.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

SpectrumBatch read_batch_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_batch(in);
}

}  // namespace rigidity
