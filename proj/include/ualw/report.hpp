#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ualw/workbench.hpp"

namespace ualw {

constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a 64 over raw bytes, hex encoded; identifies the input in reports.
std::string digest_bytes(const std::string& bytes);
std::string digest_file(const std::string& path);

/// Emits one verdict per line plus a summary line.  JSON reports are
/// byte-identical across runs unless timings are requested.
void emit_report(std::ostream& os, const std::vector<CheckOutcome>& outcomes,
                 const std::string& input_digest, const RunOptions& opt);

/// True iff every outcome met its expectation.
bool all_met(const std::vector<CheckOutcome>& outcomes);

}  // namespace ualw
