#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace greens {

struct CriterionResult {
  int number = 0;
  std::string id;
  bool pass = false;
  std::string details;
  nlohmann::json metrics;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  bool all_pass = false;
  nlohmann::json to_json() const;
};

struct AcceptanceOptions {
  std::vector<int> only;  // empty = run all ten criteria
  int threads = 0;
};

/// Runs the acceptance suite; prints one pass/fail line per criterion to
/// `log` when given.
AcceptanceReport run_acceptance(const AcceptanceOptions& opt = {}, std::ostream* log = nullptr);

}  // namespace greens
