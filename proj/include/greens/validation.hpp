#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "greens/asymptotics.hpp"
#include "greens/geometry.hpp"
#include "greens/oracle.hpp"

namespace greens {

struct ErrorRow {
  double eps = 0.0;
  std::string stratum;
  int n_pairs = 0;
  double sup_err = 0.0;
  double mean_err = 0.0;
  Point argmax_x, argmax_y;
};

struct ErrorTable {
  std::string formula;
  std::string oracle_method;
  std::vector<ErrorRow> rows;  // sorted by descending eps
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double correlation = 0.0;
  double expected_order = 0.0;
  bool superpolynomial = false;
  double band = 0.0;
  bool pass = false;
};

struct SweepOptions {
  EvalOptions eval;
  int threads = 0;  // 0 = hardware concurrency
};

/// Measure |formula - oracle| over a deterministic pair grid for each epsilon;
/// one row per (epsilon, stratum).
ErrorTable error_sweep(const std::string& formula_id, const DomainSpec& base,
                       const std::vector<double>& eps_list, const GridPolicy& policy,
                       const SweepOptions& opt = {});

/// Strata selectors: exact names, trailing '*' prefixes, "all", or "near"
/// (every stratum starting with "near-").
std::vector<const ErrorRow*> select_rows(const ErrorTable& table,
                                         const std::vector<std::string>& selector);

/// Per-epsilon sup over the selected strata.
std::vector<std::pair<double, double>> sup_by_eps(const ErrorTable& table,
                                                  const std::vector<std::string>& selector);

/// Least squares on (log eps, log sup error). Throws InsufficientData with
/// fewer than three usable points and ZeroError when a selected error is 0.
RateFit fit_rate(const ErrorTable& table, const std::vector<std::string>& selector,
                 double expected_order, double band);

/// Super-polynomial check: log error vs 1/eps correlation <= corr_limit and
/// consecutive log-log slopes strictly increasing as eps shrinks.
RateFit fit_superpolynomial(const ErrorTable& table, const std::vector<std::string>& selector,
                            double corr_limit = -0.99);

/// sup over near strata divided by sup over the interior stratum, per eps.
std::vector<std::pair<double, double>> uniformity_ratio(const ErrorTable& table);

std::string format_csv(const ErrorTable& table);  // deterministic, 17 digits
void write_csv(const ErrorTable& table, const std::string& path);
nlohmann::json table_to_json(const ErrorTable& table);
nlohmann::json rate_to_json(const RateFit& fit);

/// Deterministic helper: run fn(i) for i in [0, n) on several threads and
/// join; results must be written to per-index slots by the callable.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace greens
