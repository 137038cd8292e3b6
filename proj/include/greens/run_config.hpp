#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "greens/geometry.hpp"

namespace greens {

/// Validated CLI run description. Unknown JSON fields are rejected.
struct RunConfig {
  std::string command;  // eval | oracle | sweep | rates | report
  std::optional<DomainSpec> domain;
  std::string formula;
  std::vector<double> eps_list;
  std::optional<Point> x, y;
  GridPolicy grid;
  std::string out_path;
  unsigned seed = 0;
  std::vector<int> criteria;  // report subset; empty = all
  int threads = 0;
};

RunConfig parse_run_config(const nlohmann::json& j);

/// Executes a validated config. Writes artifacts, prints the primary result
/// to `out`, and returns the process exit code (0 ok, 1 config, 2 numerical,
/// 3 acceptance failure).
int run(const RunConfig& cfg, std::ostream& out);

/// Maps a thrown Error to the CLI exit code contract.
int exit_code_for(const Error& e);

}  // namespace greens
