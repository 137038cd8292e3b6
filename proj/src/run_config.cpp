#include "greens/run_config.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "greens/acceptance.hpp"
#include "greens/oracle.hpp"
#include "greens/validation.hpp"

namespace greens {

namespace {

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) fail(Err::InvalidConfig, "unknown field '" + it.key() + "'");
  }
}

Point parse_point(const nlohmann::json& j, const char* name) {
  if (!j.is_array() || (j.size() != 2 && j.size() != 3))
    fail(Err::InvalidConfig, std::string(name) + " must be an array of 2 or 3 numbers");
  if (j.size() == 2) return Point(j[0].get<double>(), j[1].get<double>());
  return Point(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

nlohmann::json eval_to_json(const KernelEval& e) {
  nlohmann::json terms;
  for (const auto& [k, v] : e.terms) terms[k] = v;
  nlohmann::json jx = nlohmann::json::array(), jy = nlohmann::json::array();
  for (int i = 0; i < e.x.dim; ++i) jx.push_back(e.x[i]);
  for (int i = 0; i < e.y.dim; ++i) jy.push_back(e.y[i]);
  return nlohmann::json{{"formula", e.formula}, {"value", e.value},    {"terms", terms},
                        {"x", jx},              {"y", jy},             {"eps", e.eps}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Err::InvalidConfig, "cannot open output file " + path);
  f << text;
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& j) {
  if (!j.is_object()) fail(Err::InvalidConfig, "config must be a JSON object");
  check_keys(j, {"command", "domain", "domain_file", "formula", "eps", "x", "y", "grid", "out",
                 "seed", "criteria", "threads"});
  RunConfig cfg;
  if (!j.contains("command") || !j["command"].is_string())
    fail(Err::InvalidConfig, "config requires a string 'command'");
  cfg.command = j["command"].get<std::string>();
  const char* commands[] = {"eval", "oracle", "sweep", "rates", "report"};
  bool known = false;
  for (const char* c : commands) known = known || cfg.command == c;
  if (!known) fail(Err::InvalidConfig, "unknown command '" + cfg.command + "'");

  if (j.contains("domain") && j.contains("domain_file"))
    fail(Err::InvalidConfig, "give either 'domain' or 'domain_file', not both");
  if (j.contains("domain")) cfg.domain = domain_from_json(j["domain"]);
  if (j.contains("domain_file")) {
    std::ifstream f(j["domain_file"].get<std::string>());
    if (!f) fail(Err::InvalidConfig, "cannot read domain file");
    nlohmann::json dj;
    try {
      f >> dj;
    } catch (const std::exception& e) {
      fail(Err::InvalidConfig, std::string("domain file parse error: ") + e.what());
    }
    cfg.domain = domain_from_json(dj);
  }
  if (j.contains("formula")) cfg.formula = j["formula"].get<std::string>();
  if (j.contains("eps")) cfg.eps_list = j["eps"].get<std::vector<double>>();
  if (j.contains("x")) cfg.x = parse_point(j["x"], "x");
  if (j.contains("y")) cfg.y = parse_point(j["y"], "y");
  if (j.contains("out")) cfg.out_path = j["out"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("criteria")) cfg.criteria = j["criteria"].get<std::vector<int>>();
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    check_keys(g, {"near_offsets", "interior_radii", "angles_near", "angles_interior", "r_min",
                   "d0", "jitter"});
    if (g.contains("near_offsets")) cfg.grid.near_offsets = g["near_offsets"].get<std::vector<double>>();
    if (g.contains("interior_radii"))
      cfg.grid.interior_radii = g["interior_radii"].get<std::vector<double>>();
    if (g.contains("angles_near")) cfg.grid.angles_near = g["angles_near"].get<int>();
    if (g.contains("angles_interior")) cfg.grid.angles_interior = g["angles_interior"].get<int>();
    if (g.contains("r_min")) cfg.grid.r_min = g["r_min"].get<double>();
    if (g.contains("d0")) cfg.grid.d0 = g["d0"].get<double>();
    if (g.contains("jitter")) cfg.grid.jitter = g["jitter"].get<double>();
  }
  cfg.grid.seed = cfg.seed;

  if (cfg.command == "eval" || cfg.command == "oracle") {
    if (!cfg.domain) fail(Err::InvalidConfig, cfg.command + " requires 'domain'");
    if (!cfg.x || !cfg.y) fail(Err::InvalidConfig, cfg.command + " requires points 'x' and 'y'");
    if (cfg.command == "eval" && cfg.formula.empty())
      fail(Err::InvalidConfig, "eval requires 'formula'");
  }
  if (cfg.command == "sweep" || cfg.command == "rates") {
    if (!cfg.domain) fail(Err::InvalidConfig, cfg.command + " requires 'domain'");
    if (cfg.formula.empty()) fail(Err::InvalidConfig, cfg.command + " requires 'formula'");
    if (cfg.eps_list.size() < 3) fail(Err::InvalidConfig, "eps list must have length >= 3");
    if (!formula_known(cfg.formula))
      fail(Err::InvalidConfig, "unknown formula '" + cfg.formula + "'");
  }
  return cfg;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Err::IllConditioned:
    case Err::TruncationFailure:
    case Err::QuadratureUnderResolved:
    case Err::DenominatorDegenerate:
      return 2;
    default:
      return 1;
  }
}

int run(const RunConfig& cfg, std::ostream& out) {
  if (cfg.command == "eval") {
    EvalOptions opt;
    opt.d0 = cfg.grid.d0;
    KernelEval e = evaluate_formula(cfg.formula, *cfg.domain, *cfg.x, *cfg.y, opt);
    std::string text = eval_to_json(e).dump(2) + "\n";
    out << text;
    if (!cfg.out_path.empty()) write_text(cfg.out_path, text);
    return 0;
  }
  if (cfg.command == "oracle") {
    OracleSolution sol = make_oracle(*cfg.domain, cfg.formula.empty() ? "dirichlet" : cfg.formula);
    double v = sol.g(*cfg.x, *cfg.y);
    nlohmann::json j{{"value", v}, {"accuracy", sol.accuracy}, {"method", sol.method}};
    std::string text = j.dump(2) + "\n";
    out << text;
    if (!cfg.out_path.empty()) write_text(cfg.out_path, text);
    return 0;
  }
  if (cfg.command == "sweep") {
    SweepOptions opt;
    opt.threads = cfg.threads;
    ErrorTable table = error_sweep(cfg.formula, *cfg.domain, cfg.eps_list, cfg.grid, opt);
    std::string csv = format_csv(table);
    if (!cfg.out_path.empty())
      write_text(cfg.out_path, csv);
    else
      out << csv;
    return 0;
  }
  if (cfg.command == "rates") {
    SweepOptions opt;
    opt.threads = cfg.threads;
    ErrorTable table = error_sweep(cfg.formula, *cfg.domain, cfg.eps_list, cfg.grid, opt);
    nlohmann::json j;
    j["table"] = table_to_json(table);
    if (cfg.formula == "thin-rod") {
      j["rate"] = rate_to_json(fit_superpolynomial(table, {"all"}));
    } else {
      // slope-only fit: expected order filled by the acceptance suite
      RateFit fit = fit_rate(table, {"all"}, 0.0, 1e9);
      j["rate"] = rate_to_json(fit);
    }
    std::string text = j.dump(2) + "\n";
    if (!cfg.out_path.empty())
      write_text(cfg.out_path, text);
    else
      out << text;
    return 0;
  }
  if (cfg.command == "report") {
    AcceptanceOptions opt;
    opt.only = cfg.criteria;
    opt.threads = cfg.threads;
    AcceptanceReport report = run_acceptance(opt, &out);
    std::string text = report.to_json().dump(2) + "\n";
    if (!cfg.out_path.empty()) write_text(cfg.out_path, text);
    return report.all_pass ? 0 : 3;
  }
  fail(Err::InvalidConfig, "unknown command");
}

}  // namespace greens
