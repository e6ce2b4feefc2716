#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "rigidity/experiments.hpp"

namespace rigidity {

inline constexpr int kBatchFormatVersion = 1;

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Text batch format:
///
///   format_version=1 n=64 m=32 rescaled=0 seed=7 trial_count=3
///   <trial_index> <re_1> <im_1> ... <re_m> <im_m>
///
/// one record line per successful trial, 17 significant digits. Failed trials
/// leave gaps in trial_index; on reading, failures = last index + 1 - count.
void write_batch(std::ostream& out, const SpectrumBatch& batch);
SpectrumBatch read_batch(std::istream& in);

void write_batch_file(const std::string& path, const SpectrumBatch& batch);
SpectrumBatch read_batch_file(const std::string& path);

}  // namespace rigidity
