#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "greens/run_config.hpp"

namespace {

nlohmann::json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) greens::fail(greens::Err::InvalidConfig, "cannot read config file " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    greens::fail(greens::Err::InvalidConfig, std::string("config parse error: ") + e.what());
  }
  return j;
}

std::vector<double> parse_eps_csv(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform asymptotics of Green's kernels in perturbed domains"};
  std::string command, config_path, out_path, formula, eps_csv;
  long long seed = -1;
  app.add_option("command", command, "eval | oracle | sweep | rates | report")->required();
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_path, "output path (CSV or JSON)");
  app.add_option("--seed", seed, "grid seed");
  app.add_option("--formula", formula, "formula id");
  app.add_option("--eps", eps_csv, "comma-separated epsilon list");
  CLI11_PARSE(app, argc, argv);

  try {
    nlohmann::json j = config_path.empty() ? nlohmann::json::object() : load_config(config_path);
    j["command"] = command;
    if (!out_path.empty()) j["out"] = out_path;
    if (seed >= 0) j["seed"] = (unsigned)seed;
    if (!formula.empty()) j["formula"] = formula;
    if (!eps_csv.empty()) j["eps"] = parse_eps_csv(eps_csv);
    greens::RunConfig cfg = greens::parse_run_config(j);
    return greens::run(cfg, std::cout);
  } catch (const greens::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return greens::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
