#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "greens/run_config.hpp"

using namespace greens;

namespace {
nlohmann::json disk_domain(double eps) {
  return nlohmann::json{{"type", "DiskWithHole"}, {"epsilon", eps}};
}
}  // namespace

TEST_CASE("eval command prints the kernel value with terms") {
  nlohmann::json j{{"command", "eval"},
                   {"domain", disk_domain(0.05)},
                   {"formula", "disk-green"},
                   {"x", {0.5, 0.0}},
                   {"y", {0.0, 0.0}}};
  RunConfig cfg = parse_run_config(j);
  std::ostringstream out;
  CHECK(run(cfg, out) == 0);
  nlohmann::json parsed = nlohmann::json::parse(out.str());
  CHECK(parsed["value"].get<double>() == doctest::Approx(0.110318).epsilon(1e-5));
  CHECK(parsed["formula"] == "disk-green");
  CHECK(parsed["terms"].contains("disk-green"));
}

TEST_CASE("oracle command reports value, accuracy, method") {
  nlohmann::json j{{"command", "oracle"},
                   {"domain", disk_domain(0.05)},
                   {"x", {0.5, 0.0}},
                   {"y", {-0.3, 0.4}}};
  RunConfig cfg = parse_run_config(j);
  std::ostringstream out;
  CHECK(run(cfg, out) == 0);
  nlohmann::json parsed = nlohmann::json::parse(out.str());
  CHECK(parsed["method"] == "fourier-annulus");
  CHECK(parsed["accuracy"].get<double>() <= 1e-10);
}

TEST_CASE("sweep validation: epsilon list length") {
  nlohmann::json j{{"command", "sweep"},
                   {"domain", disk_domain(0.05)},
                   {"formula", "dirichlet-hole-2d"},
                   {"eps", {0.1, 0.05}}};
  try {
    parse_run_config(j);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("eps list must have length >= 3") != std::string::npos);
    CHECK(exit_code_for(e) == 1);
  }
}

TEST_CASE("unknown configuration fields are rejected") {
  nlohmann::json j{{"command", "eval"},
                   {"domain", disk_domain(0.05)},
                   {"formula", "disk-green"},
                   {"x", {0.5, 0.0}},
                   {"y", {0.0, 0.0}},
                   {"verbosity", 3}};
  CHECK_THROWS_AS(parse_run_config(j), Error);
  nlohmann::json g{{"command", "sweep"},
                   {"domain", disk_domain(0.05)},
                   {"formula", "dirichlet-hole-2d"},
                   {"eps", {0.16, 0.08, 0.04}},
                   {"grid", {{"angles_near", 4}, {"mystery", 1}}}};
  CHECK_THROWS_AS(parse_run_config(g), Error);
}

TEST_CASE("sweep output is reproducible byte for byte") {
  nlohmann::json j{{"command", "sweep"},
                   {"domain", disk_domain(0.05)},
                   {"formula", "dirichlet-hole-2d"},
                   {"eps", {0.16, 0.08, 0.04}},
                   {"seed", 7}};
  RunConfig cfg = parse_run_config(j);
  std::ostringstream a, b;
  CHECK(run(cfg, a) == 0);
  CHECK(run(cfg, b) == 0);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("formula,eps,stratum,n_pairs,sup_err,mean_err,argmax_x,argmax_y\n", 0) == 0);
}

TEST_CASE("rates command emits a fit") {
  nlohmann::json j{{"command", "rates"},
                   {"domain", disk_domain(0.05)},
                   {"formula", "dirichlet-hole-2d"},
                   {"eps", {0.16, 0.08, 0.04, 0.02}}};
  RunConfig cfg = parse_run_config(j);
  std::ostringstream out;
  CHECK(run(cfg, out) == 0);
  nlohmann::json parsed = nlohmann::json::parse(out.str());
  double slope = parsed["rate"]["slope"].get<double>();
  CHECK(slope > 0.5);
  CHECK(slope < 1.5);
}

TEST_CASE("report on the 2d-hole criterion alone") {
  nlohmann::json j{{"command", "report"}, {"criteria", {3}}};
  RunConfig cfg = parse_run_config(j);
  std::ostringstream out;
  int code = run(cfg, out);
  CHECK(code == 0);
  CHECK(out.str().find("[PASS] 3 hole-2d-rate-uniformity") != std::string::npos);
}

TEST_CASE("config schema round trip") {
  nlohmann::json j{{"command", "sweep"},
                   {"domain", disk_domain(0.05)},
                   {"formula", "dirichlet-hole-2d"},
                   {"eps", {0.16, 0.08, 0.04}},
                   {"seed", 3},
                   {"out", ""}};
  RunConfig cfg = parse_run_config(j);
  nlohmann::json back{{"command", cfg.command},
                      {"domain", domain_to_json(*cfg.domain)},
                      {"formula", cfg.formula},
                      {"eps", cfg.eps_list},
                      {"seed", cfg.seed},
                      {"out", cfg.out_path}};
  RunConfig cfg2 = parse_run_config(back);
  CHECK(cfg2.formula == cfg.formula);
  CHECK(cfg2.eps_list == cfg.eps_list);
  CHECK(domain_to_json(*cfg2.domain) == domain_to_json(*cfg.domain));
}
