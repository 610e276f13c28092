#pragma once

#include <string>

#include "spinrelax/data.hpp"

namespace spinrelax::io {

// CSV with header `temperature_K,time_us,sigma_us` plus an optional trailing
// `line` column. '#' lines and blank lines are skipped. Values convert to SI;
// rows sort by temperature (duplicates preserved). A missing sigma_us column
// defaults every sigma to 5% of the value, with a warning on the dataset.
// Malformed content -> InputError naming the file and row.
RelaxationDataset load_relaxation_csv(const std::string& path, RelaxationQuantity quantity);

// CSV with header `tau_us,amplitude,sigma`. Amplitudes may be negative;
// duplicate tau values are an error.
EchoTrace load_echo_csv(const std::string& path);

// Atomically-ish write text to path (write then flush); InputError on failure.
void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

}  // namespace spinrelax::io
