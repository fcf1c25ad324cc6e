#pragma once

#include <string>

#include <json.hpp>

namespace ualw {

/// Outcome of a check.  Failing verdicts carry a machine-checkable witness in
/// `witness`; `qualifier` records the strength of the claim:
///   exact          decided for the presented instance
///   probes         refutable only ("PASS-ON-PROBES is not a proof")
///   bounded        verified up to a stated size bound
///   instance-level class-quantified condition checked on supplied data only
struct Verdict {
  std::string check;      // stable id, e.g. "check_4b@dialectic-pair"
  std::string condition;  // what was decided, e.g. "(4b)"
  bool holds = false;
  std::string qualifier = "exact";
  std::string method;
  nlohmann::json witness;  // null when holds and no data is worth keeping

  nlohmann::json to_json() const {
    return nlohmann::json{{"check", check},     {"condition", condition},
                          {"holds", holds},     {"qualifier", qualifier},
                          {"method", method},   {"witness", witness}};
  }
};

}  // namespace ualw
