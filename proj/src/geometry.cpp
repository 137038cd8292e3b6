#include "greens/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace greens {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kScanSamples = 2048;
constexpr int kRefineSteps = 40;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}
}  // namespace

double polar_angle(const Point& p) {
  double t = std::atan2(p.y(), p.x());
  return t < 0 ? t + kTwoPi : t;
}

// ---------------------------------------------------------------------------
// TrigPoly
// ---------------------------------------------------------------------------

double TrigPoly::eval(double t) const {
  double v = c0;
  for (size_t k = 0; k < ck.size(); ++k) v += ck[k] * std::cos((k + 1.0) * t);
  for (size_t k = 0; k < sk.size(); ++k) v += sk[k] * std::sin((k + 1.0) * t);
  return v;
}

double TrigPoly::deriv(double t) const {
  double v = 0.0;
  for (size_t k = 0; k < ck.size(); ++k) v -= (k + 1.0) * ck[k] * std::sin((k + 1.0) * t);
  for (size_t k = 0; k < sk.size(); ++k) v += (k + 1.0) * sk[k] * std::cos((k + 1.0) * t);
  return v;
}

double TrigPoly::deriv2(double t) const {
  double v = 0.0;
  for (size_t k = 0; k < ck.size(); ++k) {
    double w = k + 1.0;
    v -= w * w * ck[k] * std::cos(w * t);
  }
  for (size_t k = 0; k < sk.size(); ++k) {
    double w = k + 1.0;
    v -= w * w * sk[k] * std::sin(w * t);
  }
  return v;
}

double TrigPoly::min_value() const {
  double m = eval(0.0);
  for (int i = 1; i < 4096; ++i) m = std::min(m, eval(kTwoPi * i / 4096.0));
  return m;
}

// ---------------------------------------------------------------------------
// DomainSpec
// ---------------------------------------------------------------------------

int DomainSpec::dim() const {
  if (is<BallWithHole>() || is<BallWithHoles>()) return 3;
  return 2;
}

double DomainSpec::epsilon() const {
  return std::visit([](const auto& d) { return d.epsilon; }, v);
}

std::string DomainSpec::kind() const {
  struct V {
    std::string operator()(const PerturbedDisk&) const { return "PerturbedDisk"; }
    std::string operator()(const DiskWithHole&) const { return "DiskWithHole"; }
    std::string operator()(const BallWithHole&) const { return "BallWithHole"; }
    std::string operator()(const BallWithHoles&) const { return "BallWithHoles"; }
    std::string operator()(const ThinRodStrip&) const { return "ThinRodStrip"; }
    std::string operator()(const TruncatedSector&) const { return "TruncatedSector"; }
  };
  return std::visit(V{}, v);
}

DomainSpec make_domain(PerturbedDisk d) {
  if (d.epsilon < 0) fail(Err::InvalidConfig, "PerturbedDisk: epsilon must be >= 0");
  double dmin = d.delta.min_value();
  if (d.epsilon > 0 && dmin <= 0)
    fail(Err::InvalidConfig, "PerturbedDisk: delta must be positive, min=" + fmt(dmin));
  double rmin = 1.0;
  for (int i = 0; i < 4096; ++i)
    rmin = std::min(rmin, 1.0 - d.epsilon * d.delta.eval(kTwoPi * i / 4096.0));
  if (rmin <= 0.05) fail(Err::InvalidConfig, "PerturbedDisk: boundary collapses (r_min <= 0.05)");
  return DomainSpec{std::move(d)};
}

DomainSpec make_domain(DiskWithHole d) {
  if (d.center.dim != 2) fail(Err::WrongDimension, "DiskWithHole: center must be planar");
  if (!(d.epsilon > 0 && d.epsilon < 0.5))
    fail(Err::InvalidConfig, "DiskWithHole: epsilon must lie in (0, 1/2)");
  if (norm(d.center) + 3.0 * d.epsilon > 1.0)
    fail(Err::InvalidConfig, "DiskWithHole: hole too close to the outer circle");
  return DomainSpec{std::move(d)};
}

DomainSpec make_domain(BallWithHole d) {
  if (d.center.dim != 3) fail(Err::WrongDimension, "BallWithHole: center must be 3d");
  if (!(d.epsilon > 0 && d.epsilon < 0.5))
    fail(Err::InvalidConfig, "BallWithHole: epsilon must lie in (0, 1/2)");
  if (norm(d.center) + 3.0 * d.epsilon > 1.0)
    fail(Err::InvalidConfig, "BallWithHole: hole too close to the outer sphere");
  return DomainSpec{std::move(d)};
}

DomainSpec make_domain(BallWithHoles d) {
  if (d.centers.empty()) fail(Err::InvalidConfig, "BallWithHoles: need at least one center");
  if (!(d.epsilon > 0 && d.epsilon < 0.5))
    fail(Err::InvalidConfig, "BallWithHoles: epsilon must lie in (0, 1/2)");
  for (size_t i = 0; i < d.centers.size(); ++i) {
    if (d.centers[i].dim != 3) fail(Err::WrongDimension, "BallWithHoles: centers must be 3d");
    if (norm(d.centers[i]) + 3.0 * d.epsilon > 1.0)
      fail(Err::InvalidConfig, "BallWithHoles: hole " + std::to_string(i) + " too close to sphere");
    for (size_t j = 0; j < i; ++j)
      if (dist(d.centers[i], d.centers[j]) < 2.5 * d.epsilon)
        fail(Err::HolesOverlap, "holes " + std::to_string(j) + " and " + std::to_string(i));
  }
  return DomainSpec{std::move(d)};
}

DomainSpec make_domain(ThinRodStrip d) {
  if (!(d.half_length > 0)) fail(Err::InvalidConfig, "ThinRodStrip: half_length must be > 0");
  if (!(d.width > 0)) fail(Err::InvalidConfig, "ThinRodStrip: width must be > 0");
  if (!(d.epsilon > 0)) fail(Err::InvalidConfig, "ThinRodStrip: epsilon must be > 0");
  if (d.ends != "flat") fail(Err::InvalidConfig, "ThinRodStrip: only flat ends ship");
  return DomainSpec{std::move(d)};
}

DomainSpec make_domain(TruncatedSector d) {
  if (!(d.alpha > 0 && d.alpha < kTwoPi))
    fail(Err::InvalidConfig, "TruncatedSector: alpha must lie in (0, 2pi)");
  if (!(d.epsilon > 0 && d.epsilon < 0.5 * d.outer_radius))
    fail(Err::InvalidConfig, "TruncatedSector: epsilon must lie in (0, outer_radius/2)");
  if (d.outer_radius != 1.0) fail(Err::InvalidConfig, "TruncatedSector: outer radius is fixed to 1");
  return DomainSpec{std::move(d)};
}

DomainSpec with_epsilon(const DomainSpec& spec, double eps) {
  DomainSpec s = spec;
  std::visit([eps](auto& d) { d.epsilon = eps; }, s.v);
  // revalidate
  return std::visit([](auto& d) { return make_domain(std::move(d)); }, s.v);
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

nlohmann::json point_json(const Point& p) {
  if (p.dim == 2) return nlohmann::json::array({p.x(), p.y()});
  return nlohmann::json::array({p.x(), p.y(), p.z()});
}

Point point_from_json(const nlohmann::json& j) {
  if (!j.is_array() || (j.size() != 2 && j.size() != 3))
    fail(Err::InvalidConfig, "point must be an array of 2 or 3 numbers");
  for (const auto& c : j)
    if (!c.is_number()) fail(Err::InvalidConfig, "point coordinates must be numbers");
  if (j.size() == 2) return Point(j[0].get<double>(), j[1].get<double>());
  return Point(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) fail(Err::InvalidConfig, "unknown field '" + it.key() + "'");
  }
}

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    fail(Err::InvalidConfig, std::string("missing numeric field '") + key + "'");
  return j[key].get<double>();
}

}  // namespace

nlohmann::json domain_to_json(const DomainSpec& spec) {
  nlohmann::json j;
  j["type"] = spec.kind();
  struct V {
    nlohmann::json& j;
    void operator()(const PerturbedDisk& d) const {
      j["epsilon"] = d.epsilon;
      j["delta"] = {{"constant", d.delta.c0}, {"cos", d.delta.ck}, {"sin", d.delta.sk}};
    }
    void operator()(const DiskWithHole& d) const {
      j["epsilon"] = d.epsilon;
      j["center"] = point_json(d.center);
    }
    void operator()(const BallWithHole& d) const {
      j["epsilon"] = d.epsilon;
      j["center"] = point_json(d.center);
    }
    void operator()(const BallWithHoles& d) const {
      j["epsilon"] = d.epsilon;
      auto arr = nlohmann::json::array();
      for (const auto& c : d.centers) arr.push_back(point_json(c));
      j["centers"] = arr;
    }
    void operator()(const ThinRodStrip& d) const {
      j["epsilon"] = d.epsilon;
      j["half_length"] = d.half_length;
      j["width"] = d.width;
      j["ends"] = d.ends;
    }
    void operator()(const TruncatedSector& d) const {
      j["epsilon"] = d.epsilon;
      j["alpha"] = d.alpha;
      j["outer_radius"] = d.outer_radius;
    }
  };
  std::visit(V{j}, spec.v);
  return j;
}

DomainSpec domain_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    fail(Err::InvalidConfig, "domain must be an object with a string 'type'");
  std::string type = j["type"].get<std::string>();
  if (type == "PerturbedDisk") {
    check_keys(j, {"type", "epsilon", "delta"});
    PerturbedDisk d;
    d.epsilon = require_number(j, "epsilon");
    if (j.contains("delta")) {
      const auto& dj = j["delta"];
      check_keys(dj, {"constant", "cos", "sin"});
      d.delta.c0 = dj.contains("constant") ? dj["constant"].get<double>() : 1.0;
      if (dj.contains("cos")) d.delta.ck = dj["cos"].get<std::vector<double>>();
      if (dj.contains("sin")) d.delta.sk = dj["sin"].get<std::vector<double>>();
    }
    return make_domain(std::move(d));
  }
  if (type == "DiskWithHole") {
    check_keys(j, {"type", "epsilon", "center"});
    DiskWithHole d;
    d.epsilon = require_number(j, "epsilon");
    if (j.contains("center")) d.center = point_from_json(j["center"]);
    return make_domain(std::move(d));
  }
  if (type == "BallWithHole") {
    check_keys(j, {"type", "epsilon", "center"});
    BallWithHole d;
    d.epsilon = require_number(j, "epsilon");
    if (j.contains("center")) d.center = point_from_json(j["center"]);
    if (d.center.dim == 2) d.center = Point(d.center.x(), d.center.y(), 0.0);
    return make_domain(std::move(d));
  }
  if (type == "BallWithHoles") {
    check_keys(j, {"type", "epsilon", "centers"});
    BallWithHoles d;
    d.epsilon = require_number(j, "epsilon");
    if (!j.contains("centers") || !j["centers"].is_array())
      fail(Err::InvalidConfig, "BallWithHoles: 'centers' array required");
    for (const auto& cj : j["centers"]) {
      Point c = point_from_json(cj);
      if (c.dim == 2) c = Point(c.x(), c.y(), 0.0);
      d.centers.push_back(c);
    }
    return make_domain(std::move(d));
  }
  if (type == "ThinRodStrip") {
    check_keys(j, {"type", "epsilon", "half_length", "width", "ends"});
    ThinRodStrip d;
    d.epsilon = require_number(j, "epsilon");
    d.half_length = require_number(j, "half_length");
    d.width = require_number(j, "width");
    if (j.contains("ends")) d.ends = j["ends"].get<std::string>();
    return make_domain(std::move(d));
  }
  if (type == "TruncatedSector") {
    check_keys(j, {"type", "epsilon", "alpha", "outer_radius"});
    TruncatedSector d;
    d.epsilon = require_number(j, "epsilon");
    d.alpha = require_number(j, "alpha");
    if (j.contains("outer_radius")) d.outer_radius = j["outer_radius"].get<double>();
    return make_domain(std::move(d));
  }
  fail(Err::InvalidConfig, "unknown domain type '" + type + "'");
}

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

bool is_inside(const DomainSpec& spec, const Point& x) {
  constexpr double tol = 1e-12;
  struct V {
    const Point& x;
    bool operator()(const PerturbedDisk& d) const {
      double r = norm(x);
      return r < 1.0 - d.epsilon * d.delta.eval(polar_angle(x)) - tol;
    }
    bool operator()(const DiskWithHole& d) const {
      return norm(x) < 1.0 - tol && dist(x, d.center) > d.epsilon + tol;
    }
    bool operator()(const BallWithHole& d) const {
      return norm(x) < 1.0 - tol && dist(x, d.center) > d.epsilon + tol;
    }
    bool operator()(const BallWithHoles& d) const {
      if (norm(x) >= 1.0 - tol) return false;
      for (const auto& c : d.centers)
        if (dist(x, c) <= d.epsilon + tol) return false;
      return true;
    }
    bool operator()(const ThinRodStrip& d) const {
      double w = d.epsilon * d.width;
      return x.x() > tol && x.x() < w - tol && std::abs(x.y()) < d.half_length - tol;
    }
    bool operator()(const TruncatedSector& d) const {
      double r = norm(x);
      if (r <= d.epsilon + tol || r >= d.outer_radius - tol) return false;
      double t = polar_angle(x);
      return t > tol && t < d.alpha - tol;
    }
  };
  if ((spec.dim() == 3) != (x.dim == 3)) return false;
  return std::visit(V{x}, spec.v);
}

// ---------------------------------------------------------------------------
// Boundary curves
// ---------------------------------------------------------------------------

Point BoundaryCurve::unit_normal(double t) const {
  Point d = dpos(t);
  Point n(d.y(), -d.x());
  n = n / norm(n);
  return flip_normal ? n * -1.0 : n;
}

namespace {

BoundaryCurve circle_curve(Point c, double rho, bool hole) {
  BoundaryCurve b;
  // Holes are parametrized clockwise so that the rotated tangent gives the
  // domain-outward normal directly in layer-potential assembly.
  double s = hole ? -1.0 : 1.0;
  b.pos = [=](double t) { return Point(c.x() + rho * std::cos(s * t), c.y() + rho * std::sin(s * t)); };
  b.dpos = [=](double t) {
    return Point(-s * rho * std::sin(s * t), s * rho * std::cos(s * t));
  };
  b.ddpos = [=](double t) { return Point(-rho * std::cos(s * t), -rho * std::sin(s * t)); };
  b.flip_normal = false;
  return b;
}

BoundaryCurve perturbed_curve(const PerturbedDisk& d) {
  TrigPoly delta = d.delta;
  double eps = d.epsilon;
  auto r = [delta, eps](double t) { return 1.0 - eps * delta.eval(t); };
  auto r1 = [delta, eps](double t) { return -eps * delta.deriv(t); };
  auto r2 = [delta, eps](double t) { return -eps * delta.deriv2(t); };
  BoundaryCurve b;
  b.pos = [r](double t) { return Point(r(t) * std::cos(t), r(t) * std::sin(t)); };
  b.dpos = [r, r1](double t) {
    double c = std::cos(t), s = std::sin(t);
    return Point(r1(t) * c - r(t) * s, r1(t) * s + r(t) * c);
  };
  b.ddpos = [r, r1, r2](double t) {
    double c = std::cos(t), s = std::sin(t);
    return Point((r2(t) - r(t)) * c - 2.0 * r1(t) * s, (r2(t) - r(t)) * s + 2.0 * r1(t) * c);
  };
  return b;
}

}  // namespace

BoundaryCurve boundary_curve(const DomainSpec& spec, BoundaryId which) {
  if (spec.is<PerturbedDisk>()) {
    if (which.kind == BoundaryKind::Outer) return circle_curve(Point(0, 0), 1.0, false);
    if (which.kind == BoundaryKind::Perturbed) return perturbed_curve(spec.as<PerturbedDisk>());
  } else if (spec.is<DiskWithHole>()) {
    const auto& d = spec.as<DiskWithHole>();
    if (which.kind == BoundaryKind::Outer) return circle_curve(Point(0, 0), 1.0, false);
    if (which.kind == BoundaryKind::Hole && which.index == 0)
      return circle_curve(d.center, d.epsilon, true);
  }
  fail(Err::UnsupportedBoundary, spec.kind() + " has no such boundary curve");
}

// ---------------------------------------------------------------------------
// Nearest-point projection
// ---------------------------------------------------------------------------

namespace {

double golden_min(const std::function<double(double)>& f, double lo, double hi, int steps) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < steps; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

BoundaryId default_projection_boundary(const DomainSpec& spec) {
  if (spec.is<PerturbedDisk>()) {
    return spec.as<PerturbedDisk>().epsilon > 0 ? BoundaryId{BoundaryKind::Perturbed, 0}
                                                : BoundaryId{BoundaryKind::Outer, 0};
  }
  return BoundaryId{BoundaryKind::Outer, 0};
}

}  // namespace

ProjectionResult nearest_boundary_point(const DomainSpec& spec, const Point& x, BoundaryId which) {
  if (spec.dim() != 2) fail(Err::UnsupportedBoundary, "projection requires a planar variant");
  BoundaryCurve curve = boundary_curve(spec, which);
  auto dist2 = [&](double t) { return norm2(curve.pos(t) - x); };

  const double h = kTwoPi / kScanSamples;
  int best = 0;
  double bestd = dist2(0.0);
  std::vector<double> d(kScanSamples);
  for (int i = 0; i < kScanSamples; ++i) {
    d[i] = dist2(i * h);
    if (d[i] < bestd) {
      bestd = d[i];
      best = i;
    }
  }
  auto refine = [&](int i) {
    double t = golden_min(dist2, (i - 1) * h, (i + 1) * h, kRefineSteps);
    // polish the stationarity condition (p(t) - x) . p'(t) = 0; golden-section
    // alone bottoms out near sqrt(machine epsilon)
    for (int it = 0; it < 3; ++it) {
      Point p = curve.pos(t), d1 = curve.dpos(t), d2 = curve.ddpos(t);
      double g = dot(p - x, d1);
      double dg = norm2(d1) + dot(p - x, d2);
      if (std::abs(dg) < 1e-12) break;
      t -= g / dg;
    }
    return t;
  };
  double tstar = refine(best);
  double rho = std::sqrt(dist2(tstar));

  // Detect a second separated minimum tying within 1e-10.
  std::vector<double> ties;
  for (int i = 0; i < kScanSamples; ++i) {
    int gap = std::min(std::abs(i - best), kScanSamples - std::abs(i - best));
    if (gap <= 20) continue;
    bool local = d[i] <= d[(i + 1) % kScanSamples] && d[i] <= d[(i + kScanSamples - 1) % kScanSamples];
    if (!local || d[i] > bestd + 1e-6) continue;
    double t2 = refine(i);
    double r2 = std::sqrt(dist2(t2));
    if (std::abs(r2 - rho) <= 1e-10) ties.push_back(t2);
  }
  if (!ties.empty()) {
    std::string msg = "tie at parameters " + fmt(std::min(tstar, ties.front())) + " and " +
                      fmt(std::max(tstar, ties.front())) +
                      "; deterministic pick would be the smaller parameter";
    fail(Err::AmbiguousProjection, msg);
  }

  ProjectionResult out;
  out.z_of_x.location = curve.pos(tstar);
  out.z_of_x.normal = curve.unit_normal(tstar);
  out.z_of_x.param = tstar;
  out.z_of_x.weight = 0.0;
  out.rho = rho;
  return out;
}

ProjectionResult nearest_boundary_point(const DomainSpec& spec, const Point& x) {
  BoundaryId which = default_projection_boundary(spec);
  if (spec.is<PerturbedDisk>()) {
    double r = norm(x);
    double rb = 1.0 - spec.as<PerturbedDisk>().epsilon * spec.as<PerturbedDisk>().delta.min_value();
    if (r >= rb && !is_inside(spec, x))
      fail(Err::NotInDomain, "x outside the perturbed disk");
  } else if (!is_inside(spec, x) && spec.dim() == 2) {
    fail(Err::NotInDomain, "x outside the domain");
  }
  return nearest_boundary_point(spec, x, which);
}

// ---------------------------------------------------------------------------
// Boundary quadrature
// ---------------------------------------------------------------------------

namespace {

// Gauss-Legendre nodes/weights on (-1, 1) by Newton iteration.
void gauss_legendre(int n, std::vector<double>& xs, std::vector<double>& ws) {
  xs.resize(n);
  ws.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    xs[i] = x;
    ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

std::vector<BoundaryPoint> arc_quadrature(double r, double alpha, int m, bool inner) {
  std::vector<double> xs, ws;
  gauss_legendre(m, xs, ws);
  std::vector<BoundaryPoint> out(m);
  for (int i = 0; i < m; ++i) {
    double t = 0.5 * alpha * (xs[i] + 1.0);
    BoundaryPoint bp;
    bp.location = Point(r * std::cos(t), r * std::sin(t));
    Point n(std::cos(t), std::sin(t));
    bp.normal = inner ? n * -1.0 : n;  // outward from the annular sector
    bp.param = t;
    bp.weight = ws[i] * 0.5 * alpha * r;
    out[i] = bp;
  }
  return out;
}

}  // namespace

std::vector<BoundaryPoint> boundary_quadrature(const DomainSpec& spec, BoundaryId which, int m) {
  if (m < 16) fail(Err::InvalidConfig, "boundary_quadrature: m must be >= 16");
  if (spec.is<TruncatedSector>()) {
    const auto& d = spec.as<TruncatedSector>();
    if (which.kind == BoundaryKind::OuterArc) return arc_quadrature(d.outer_radius, d.alpha, m, false);
    if (which.kind == BoundaryKind::InnerArc) return arc_quadrature(d.epsilon, d.alpha, m, true);
    fail(Err::UnsupportedBoundary, "TruncatedSector supports InnerArc/OuterArc only");
  }
  BoundaryCurve curve = boundary_curve(spec, which);
  std::vector<BoundaryPoint> out(m);
  double h = kTwoPi / m;
  for (int i = 0; i < m; ++i) {
    double t = i * h;
    BoundaryPoint bp;
    bp.location = curve.pos(t);
    bp.normal = curve.unit_normal(t);
    bp.param = t;
    bp.weight = norm(curve.dpos(t)) * h;
    out[i] = bp;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pair grids
// ---------------------------------------------------------------------------

namespace {

struct TaggedPoint {
  Point p;
  std::string stratum;
  int rank;  // 0 = near-hole, 1 = near-outer, 2 = interior
};

std::string offset_label(double off) {
  if (off == 0.5) return "0.5eps";
  if (off == 1.0) return "1eps";
  if (off == 2.0) return "2eps";
  std::ostringstream os;
  os << off << "eps";
  return os.str();
}

class GridBuilder {
 public:
  GridBuilder(const DomainSpec& spec, const GridPolicy& policy)
      : spec_(spec), policy_(policy), eps_(spec.epsilon()), rmin_(policy.effective_r_min(eps_)) {}

  void add(const Point& p, std::string stratum, int rank) {
    if (!is_inside(spec_, p)) return;  // independent membership re-check
    points_.push_back({p, std::move(stratum), rank});
  }

  void pair_within(int rank, std::vector<int> extra_strides = {}) {
    std::vector<int> idx;
    for (int i = 0; i < (int)points_.size(); ++i)
      if (points_[i].rank == rank) idx.push_back(i);
    std::vector<int> strides{1, 3, 7};
    strides.insert(strides.end(), extra_strides.begin(), extra_strides.end());
    for (int s : strides)
      for (size_t i = 0; i + s < idx.size(); i += 2)
        add_pair(idx[i], idx[i + s]);
  }

  void pair_across(int rank_a, int rank_b) {
    std::vector<int> ia, ib;
    for (int i = 0; i < (int)points_.size(); ++i) {
      if (points_[i].rank == rank_a) ia.push_back(i);
      if (points_[i].rank == rank_b) ib.push_back(i);
    }
    if (ia.empty() || ib.empty()) return;
    for (size_t i = 0; i < ia.size(); ++i) add_pair(ia[i], ib[(i * 5 + 2) % ib.size()]);
  }

  void add_pair(int i, int j) {
    const TaggedPoint& a = points_[i];
    const TaggedPoint& b = points_[j];
    const TaggedPoint& lead = a.rank <= b.rank ? a : b;
    PairEntry e{a.p, b.p, lead.stratum};
    if (dist(a.p, b.p) < rmin_) {
      e.stratum = "coincidence-excluded";
      excluded_.push_back(std::move(e));
      return;
    }
    pairs_.push_back(std::move(e));
  }

  void add_explicit_pair(const Point& x, const Point& y, const std::string& stratum) {
    if (!is_inside(spec_, x) || !is_inside(spec_, y)) return;
    if (dist(x, y) < rmin_) {
      excluded_.push_back({x, y, "coincidence-excluded"});
      return;
    }
    pairs_.push_back({x, y, stratum});
  }

  PairGrid finish() {
    if (pairs_.empty()) fail(Err::EmptyGrid, "grid constraints eliminated all pairs");
    return PairGrid{std::move(pairs_), std::move(excluded_)};
  }

  const GridPolicy& policy() const { return policy_; }
  double eps() const { return eps_; }
  double rmin() const { return rmin_; }
  std::vector<TaggedPoint> points_;

 private:
  const DomainSpec& spec_;
  GridPolicy policy_;
  double eps_;
  double rmin_;
  std::vector<PairEntry> pairs_;
  std::vector<PairEntry> excluded_;
};

double jittered(double angle, unsigned seed, double jitter, int salt) {
  if (jitter == 0.0) return angle;
  // xorshift-style deterministic jitter
  unsigned s = seed * 2654435761u + (unsigned)salt * 40503u + 12345u;
  s ^= s << 13;
  s ^= s >> 17;
  s ^= s << 5;
  double u = (s % 100000) / 100000.0 - 0.5;
  return angle + jitter * u;
}

void build_perturbed_disk(GridBuilder& gb, const PerturbedDisk& d, const DomainSpec& spec) {
  const GridPolicy& pol = gb.policy();
  double eps = d.epsilon;
  auto rb = [&](double t) { return 1.0 - eps * d.delta.eval(t); };
  auto at_offset = [&](double t, double off) {
    return Point((rb(t) - off) * std::cos(t), (rb(t) - off) * std::sin(t));
  };
  // Near-outer rings (radial offsets from the perturbed curve).
  int salt = 0;
  for (double lvl : pol.near_offsets) {
    double off = lvl * std::max(eps, 1e-12);
    std::string stratum = "near-outer-" + offset_label(lvl);
    for (int i = 0; i < pol.angles_near; ++i) {
      double t = jittered(kTwoPi * i / pol.angles_near, pol.seed, pol.jitter, salt++);
      gb.add(at_offset(t, off), stratum, 1);
    }
  }
  // Interior lattice.
  for (double r : pol.interior_radii)
    for (int i = 0; i < pol.angles_interior; ++i) {
      double t = jittered(kTwoPi * (i + 0.5) / pol.angles_interior, pol.seed, pol.jitter, salt++);
      gb.add(Point(r * std::cos(t), r * std::sin(t)), "interior", 2);
    }
  // Same-boundary-point pairs: both points near one angle with small angular
  // gaps, the configuration where the classical formula loses uniformity.
  double base[] = {0.0, 1.3, 2.6, 3.9, 5.2};
  for (double t0 : base) {
    for (double gap : {0.5 * eps, 2.0 * eps, 8.0 * eps, 0.5}) {
      gb.add_explicit_pair(at_offset(t0, 0.5 * eps), at_offset(t0 + gap, 0.5 * eps),
                           "near-outer-0.5eps");
      gb.add_explicit_pair(at_offset(t0, 0.5 * eps), at_offset(t0 + gap, 2.0 * eps),
                           "near-outer-0.5eps");
      gb.add_explicit_pair(at_offset(t0, eps), at_offset(t0 + gap, eps), "near-outer-1eps");
    }
  }
  gb.pair_within(2);
  gb.pair_across(1, 2);
  (void)spec;
}

void build_disk_with_hole(GridBuilder& gb, const DiskWithHole& d) {
  const GridPolicy& pol = gb.policy();
  double eps = d.epsilon;
  int salt = 0;
  for (double lvl : pol.near_offsets) {
    std::string sh = "near-hole-" + offset_label(lvl);
    std::string so = "near-outer-" + offset_label(lvl);
    for (int i = 0; i < pol.angles_near; ++i) {
      double t = jittered(kTwoPi * i / pol.angles_near + 0.1, pol.seed, pol.jitter, salt++);
      Point dir(std::cos(t), std::sin(t));
      gb.add(d.center + dir * (eps * (1.0 + lvl)), sh, 0);
      gb.add(dir * (1.0 - lvl * eps), so, 1);
    }
  }
  for (double r : pol.interior_radii)
    for (int i = 0; i < pol.angles_interior; ++i) {
      double t = jittered(kTwoPi * (i + 0.5) / pol.angles_interior, pol.seed, pol.jitter, salt++);
      Point p(r * std::cos(t), r * std::sin(t));
      if (dist(p, d.center) > eps * 1.05) gb.add(p, "interior", 2);
    }
  int na = pol.angles_interior;
  gb.pair_within(2, {2 * na, 3 * na});
  gb.pair_within(0);
  gb.pair_across(0, 2);
  gb.pair_across(1, 2);
  gb.pair_across(0, 1);
}

std::vector<Point> sphere_dirs(int n) {
  std::vector<Point> out;
  const double ga = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double t = ga * i;
    out.emplace_back(r * std::cos(t), r * std::sin(t), z);
  }
  return out;
}

void build_ball_with_holes(GridBuilder& gb, const std::vector<Point>& centers, double eps,
                           double interior_clearance) {
  const GridPolicy& pol = gb.policy();
  auto dirs = sphere_dirs(pol.angles_near);
  for (double lvl : pol.near_offsets) {
    std::string sh = "near-hole-" + offset_label(lvl);
    for (const auto& c : centers)
      for (const auto& u : dirs) gb.add(c + u * (eps * (1.0 + lvl)), sh, 0);
    std::string so = "near-outer-" + offset_label(lvl);
    for (int i = 0; i < 4; ++i) gb.add(dirs[i] * (1.0 - lvl * eps), so, 1);
  }
  auto idirs = sphere_dirs(pol.angles_interior);
  for (double r : pol.interior_radii)
    for (const auto& u : idirs) {
      Point p = u * r;
      bool ok = true;
      for (const auto& c : centers)
        if (dist(p, c) < interior_clearance) ok = false;
      if (ok) gb.add(p, "interior", 2);
    }
  int na = pol.angles_interior;
  gb.pair_within(2, {2 * na});
  gb.pair_within(0);
  gb.pair_across(0, 2);
  gb.pair_across(1, 2);
  gb.pair_across(0, 1);
}

void build_rod(GridBuilder& gb, const ThinRodStrip& d) {
  const GridPolicy& pol = gb.policy();
  double W = d.epsilon * d.width, a = d.half_length, eps = d.epsilon;
  double xs[] = {0.3 * W, 0.5 * W, 0.7 * W};
  for (double lvl : pol.near_offsets) {
    std::string s = "near-outer-" + offset_label(lvl);
    for (double x1 : xs) {
      gb.add(Point(x1, a - lvl * eps), s, 1);
      gb.add(Point(x1, -a + lvl * eps), s, 1);
    }
  }
  for (double x1 : xs)
    for (double f : {-0.6, -0.3, 0.0, 0.3, 0.6}) gb.add(Point(x1, f * a), "interior", 2);
  gb.pair_within(2);
  gb.pair_within(1);
  gb.pair_across(1, 2);
  // Opposite-end pairs: the largest formula error sits at maximal axial gap.
  for (double lvl : pol.near_offsets) {
    std::string s = "near-outer-" + offset_label(lvl);
    for (double x1 : xs)
      gb.add_explicit_pair(Point(x1, a - lvl * eps), Point(W - x1, -a + lvl * eps), s);
  }
}

void build_sector(GridBuilder& gb, const TruncatedSector& d) {
  const GridPolicy& pol = gb.policy();
  double eps = d.epsilon, alpha = d.alpha;
  double thetas[] = {alpha / 6, alpha / 3, alpha / 2, 2 * alpha / 3, 5 * alpha / 6};
  for (double lvl : pol.near_offsets) {
    std::string si = "near-hole-" + offset_label(lvl);
    std::string so = "near-outer-" + offset_label(lvl);
    for (double t : thetas) {
      gb.add(Point(eps * (1.0 + lvl) * std::cos(t), eps * (1.0 + lvl) * std::sin(t)), si, 0);
      gb.add(Point((1.0 - lvl * eps) * std::cos(t), (1.0 - lvl * eps) * std::sin(t)), so, 1);
    }
  }
  for (double r : {0.25, 0.45, 0.7})
    for (double t : thetas) gb.add(Point(r * std::cos(t), r * std::sin(t)), "interior", 2);
  gb.pair_within(2, {10});
  gb.pair_within(0);
  gb.pair_across(0, 2);
  gb.pair_across(1, 2);
  gb.pair_across(0, 1);
}

}  // namespace

PairGrid make_pair_grid(const DomainSpec& spec, const GridPolicy& policy) {
  GridBuilder gb(spec, policy);
  if (spec.is<PerturbedDisk>())
    build_perturbed_disk(gb, spec.as<PerturbedDisk>(), spec);
  else if (spec.is<DiskWithHole>())
    build_disk_with_hole(gb, spec.as<DiskWithHole>());
  else if (spec.is<BallWithHole>()) {
    std::vector<Point> centers{spec.as<BallWithHole>().center};
    build_ball_with_holes(gb, centers, spec.epsilon(), 0.2);
  } else if (spec.is<BallWithHoles>()) {
    build_ball_with_holes(gb, spec.as<BallWithHoles>().centers, spec.epsilon(), 0.35);
  } else if (spec.is<ThinRodStrip>())
    build_rod(gb, spec.as<ThinRodStrip>());
  else if (spec.is<TruncatedSector>())
    build_sector(gb, spec.as<TruncatedSector>());
  else
    fail(Err::InvalidConfig, "no grid builder for " + spec.kind());
  return gb.finish();
}

}  // namespace greens
