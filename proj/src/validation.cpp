#include "greens/validation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace greens {

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = (int)std::thread::hardware_concurrency();
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Sweep
// ---------------------------------------------------------------------------

namespace {

struct SweepContext {
  std::function<double(const Point&, const Point&)> formula;
  std::function<double(const Point&, const Point&)> oracle;
  std::string oracle_method;
};

SweepContext make_context(const std::string& formula_id, const DomainSpec& spec,
                          const EvalOptions& opt) {
  SweepContext ctx;
  if (formula_id == "oracle-self") {
    OracleSolution base = make_oracle(spec, "dirichlet");
    ctx.formula = base.g;
    ctx.oracle_method = base.method;
    if (base.method == "boundary-integral") {
      auto fine = std::make_shared<BoundaryIntegralGreen>(spec, 2 * (int)base.params.at("panels"));
      ctx.oracle = [fine](const Point& x, const Point& y) { return (*fine)(x, y); };
    } else {
      ctx.oracle = base.g;
    }
    return ctx;
  }
  if (formula_id == "hadamard-classical" || formula_id == "hadamard-uniform") {
    auto ev = std::make_shared<HadamardEvaluator>(spec.as<PerturbedDisk>(), opt.quad);
    bool uniform = formula_id == "hadamard-uniform";
    double d0 = opt.d0;
    ctx.formula = [ev, uniform, d0](const Point& x, const Point& y) {
      if (!uniform) return ev->classical(x, y).value;
      try {
        return ev->uniform(x, y, d0).value;
      } catch (const Error& e) {
        if (e.code() == Err::OutsideStrip) return ev->classical(x, y).value;
        throw;
      }
    };
  } else {
    EvalOptions o = opt;
    DomainSpec s = spec;
    std::string id = formula_id;
    ctx.formula = [id, s, o](const Point& x, const Point& y) {
      return evaluate_formula(id, s, x, y, o).value;
    };
  }
  OracleSolution sol = make_oracle(spec, formula_id);
  ctx.oracle = sol.g;
  ctx.oracle_method = sol.method;
  return ctx;
}

}  // namespace

ErrorTable error_sweep(const std::string& formula_id, const DomainSpec& base,
                       const std::vector<double>& eps_list, const GridPolicy& policy,
                       const SweepOptions& opt) {
  if (eps_list.size() < 3) fail(Err::InvalidConfig, "eps list must have length >= 3");
  ErrorTable table;
  table.formula = formula_id;
  std::vector<double> eps_sorted = eps_list;
  std::sort(eps_sorted.rbegin(), eps_sorted.rend());

  for (double eps : eps_sorted) {
    DomainSpec spec = with_epsilon(base, eps);
    PairGrid grid = make_pair_grid(spec, policy);
    SweepContext ctx = make_context(formula_id, spec, opt.eval);
    table.oracle_method = ctx.oracle_method;

    int n = (int)grid.pairs.size();
    std::vector<double> errs(n);
    parallel_for(n, opt.threads, [&](int i) {
      const PairEntry& e = grid.pairs[i];
      errs[i] = std::abs(ctx.formula(e.x, e.y) - ctx.oracle(e.x, e.y));
    });

    std::map<std::string, ErrorRow> strata;
    for (int i = 0; i < n; ++i) {
      const PairEntry& e = grid.pairs[i];
      ErrorRow& row = strata[e.stratum];
      if (row.n_pairs == 0) {
        row.eps = eps;
        row.stratum = e.stratum;
      }
      row.n_pairs += 1;
      row.mean_err += errs[i];
      if (errs[i] >= row.sup_err) {
        row.sup_err = errs[i];
        row.argmax_x = e.x;
        row.argmax_y = e.y;
      }
    }
    for (auto& [name, row] : strata) {
      row.mean_err /= row.n_pairs;
      table.rows.push_back(row);
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Selection and fits
// ---------------------------------------------------------------------------

namespace {

bool stratum_matches(const std::string& stratum, const std::vector<std::string>& selector) {
  for (const auto& s : selector) {
    if (s == "all") return true;
    if (s == "near" && stratum.rfind("near-", 0) == 0) return true;
    if (!s.empty() && s.back() == '*') {
      if (stratum.rfind(s.substr(0, s.size() - 1), 0) == 0) return true;
    } else if (stratum == s) {
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<const ErrorRow*> select_rows(const ErrorTable& table,
                                         const std::vector<std::string>& selector) {
  std::vector<const ErrorRow*> out;
  for (const auto& r : table.rows)
    if (stratum_matches(r.stratum, selector)) out.push_back(&r);
  return out;
}

std::vector<std::pair<double, double>> sup_by_eps(const ErrorTable& table,
                                                  const std::vector<std::string>& selector) {
  std::map<double, double, std::greater<double>> sup;
  for (const ErrorRow* r : select_rows(table, selector))
    sup[r->eps] = std::max(sup.count(r->eps) ? sup[r->eps] : 0.0, r->sup_err);
  return {sup.begin(), sup.end()};
}

RateFit fit_rate(const ErrorTable& table, const std::vector<std::string>& selector,
                 double expected_order, double band) {
  auto pts = sup_by_eps(table, selector);
  if (pts.size() < 3) fail(Err::InsufficientData, "fit_rate needs >= 3 epsilon rows");
  for (const auto& [eps, err] : pts)
    if (err == 0.0) fail(Err::ZeroError, "formula exact at eps = " + std::to_string(eps));

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int n = (int)pts.size();
  for (const auto& [eps, err] : pts) {
    double lx = std::log(eps), ly = std::log(err);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  double denom = n * sxx - sx * sx;
  RateFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double var = (n * sxx - sx * sx) * (n * syy - sy * sy);
  fit.correlation = var > 0 ? (n * sxy - sx * sy) / std::sqrt(var) : 0.0;
  fit.expected_order = expected_order;
  fit.band = band;
  fit.pass = std::abs(fit.slope - expected_order) <= band;
  return fit;
}

RateFit fit_superpolynomial(const ErrorTable& table, const std::vector<std::string>& selector,
                            double corr_limit) {
  auto pts = sup_by_eps(table, selector);  // descending eps
  if (pts.size() < 3) fail(Err::InsufficientData, "fit_superpolynomial needs >= 3 epsilon rows");
  for (const auto& [eps, err] : pts)
    if (err == 0.0) fail(Err::ZeroError, "formula exact at eps = " + std::to_string(eps));

  // correlation of (1/eps, log err)
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int n = (int)pts.size();
  for (const auto& [eps, err] : pts) {
    double ix = 1.0 / eps, ly = std::log(err);
    sx += ix;
    sy += ly;
    sxx += ix * ix;
    sxy += ix * ly;
    syy += ly * ly;
  }
  RateFit fit;
  fit.superpolynomial = true;
  double var = (n * sxx - sx * sx) * (n * syy - sy * sy);
  fit.correlation = var > 0 ? (n * sxy - sx * sy) / std::sqrt(var) : 0.0;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);  // decay rate against 1/eps
  fit.intercept = (sy - fit.slope * sx) / n;

  bool increasing = true;
  for (size_t i = 2; i < pts.size(); ++i) {
    auto [e0, v0] = pts[i - 2];
    auto [e1, v1] = pts[i - 1];
    auto [e2, v2] = pts[i];
    double s01 = std::log(v0 / v1) / std::log(e0 / e1);
    double s12 = std::log(v1 / v2) / std::log(e1 / e2);
    if (!(s12 > s01)) increasing = false;
  }
  fit.pass = fit.correlation <= corr_limit && increasing;
  return fit;
}

std::vector<std::pair<double, double>> uniformity_ratio(const ErrorTable& table) {
  auto near = sup_by_eps(table, {"near"});
  auto interior = sup_by_eps(table, {"interior"});
  if (near.empty() || interior.empty())
    fail(Err::MissingStratum, "uniformity_ratio needs both near and interior strata");
  std::vector<std::pair<double, double>> out;
  for (const auto& [eps, nv] : near) {
    const double* iv = nullptr;
    for (const auto& [e2, v2] : interior)
      if (e2 == eps) iv = &v2;
    if (!iv) fail(Err::MissingStratum, "interior stratum missing at one epsilon");
    out.emplace_back(eps, nv / *iv);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string point_csv(const Point& p) {
  std::string s = fmt17(p.x()) + ";" + fmt17(p.y());
  if (p.dim == 3) s += ";" + fmt17(p.z());
  return s;
}

}  // namespace

std::string format_csv(const ErrorTable& table) {
  std::string out = "formula,eps,stratum,n_pairs,sup_err,mean_err,argmax_x,argmax_y\n";
  for (const auto& r : table.rows) {
    out += table.formula + "," + fmt17(r.eps) + "," + r.stratum + "," + std::to_string(r.n_pairs) +
           "," + fmt17(r.sup_err) + "," + fmt17(r.mean_err) + "," + point_csv(r.argmax_x) + "," +
           point_csv(r.argmax_y) + "\n";
  }
  return out;
}

void write_csv(const ErrorTable& table, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Err::InvalidConfig, "cannot open output file " + path);
  f << format_csv(table);
}

nlohmann::json table_to_json(const ErrorTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    nlohmann::json jr;
    jr["eps"] = r.eps;
    jr["stratum"] = r.stratum;
    jr["n_pairs"] = r.n_pairs;
    jr["sup_err"] = r.sup_err;
    jr["mean_err"] = r.mean_err;
    jr["argmax_x"] = nlohmann::json::array();
    jr["argmax_y"] = nlohmann::json::array();
    for (int i = 0; i < r.argmax_x.dim; ++i) jr["argmax_x"].push_back(r.argmax_x[i]);
    for (int i = 0; i < r.argmax_y.dim; ++i) jr["argmax_y"].push_back(r.argmax_y[i]);
    rows.push_back(jr);
  }
  return nlohmann::json{{"formula", table.formula},
                        {"oracle_method", table.oracle_method},
                        {"rows", rows}};
}

nlohmann::json rate_to_json(const RateFit& fit) {
  return nlohmann::json{{"slope", fit.slope},
                        {"intercept", fit.intercept},
                        {"correlation", fit.correlation},
                        {"expected_order", fit.superpolynomial ? nlohmann::json("super-polynomial")
                                                               : nlohmann::json(fit.expected_order)},
                        {"band", fit.band},
                        {"pass", fit.pass}};
}

}  // namespace greens
