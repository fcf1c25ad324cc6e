#include "ualw/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace ualw {

std::string digest_bytes(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string digest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("InputError", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return digest_bytes(buf.str());
}

void emit_report(std::ostream& os, const std::vector<CheckOutcome>& outcomes,
                 const std::string& input_digest, const RunOptions& opt) {
  size_t failed = 0;
  for (const auto& o : outcomes)
    if (!o.met) ++failed;

  if (opt.format == "text") {
    for (const auto& o : outcomes) {
      os << (o.met ? "[ ok ]" : "[FAIL]") << " " << o.verdict.check << "  holds="
         << (o.verdict.holds ? "yes" : "no") << " expected=" << (o.expect ? "yes" : "no")
         << " (" << o.verdict.qualifier << ")";
      if (opt.timings) os << "  " << std::fixed << std::setprecision(1) << o.millis << "ms";
      os << "\n";
      if (!o.verdict.witness.is_null()) os << "       witness: " << o.verdict.witness.dump() << "\n";
    }
    os << (failed ? "FAILED " : "ok ") << outcomes.size() - failed << "/" << outcomes.size()
       << " checks met expectations  (tool " << kToolVersion << ", input " << input_digest
       << ")\n";
    return;
  }

  for (const auto& o : outcomes) {
    nlohmann::json line = o.verdict.to_json();
    line["type"] = "verdict";
    line["expected"] = o.expect;
    line["met"] = o.met;
    if (opt.timings) line["timing_ms"] = o.millis;
    os << line.dump() << "\n";
  }
  nlohmann::json summary{{"type", "summary"},
                         {"tool_version", kToolVersion},
                         {"input_digest", input_digest},
                         {"checks", outcomes.size()},
                         {"unmet", failed}};
  os << summary.dump() << "\n";
}

bool all_met(const std::vector<CheckOutcome>& outcomes) {
  for (const auto& o : outcomes)
    if (!o.met) return false;
  return true;
}

}  // namespace ualw
