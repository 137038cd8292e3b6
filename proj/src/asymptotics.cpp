#include "greens/asymptotics.hpp"

#include <algorithm>
#include <numbers>

namespace greens {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_distinct(const Point& x, const Point& y, const char* who) {
  if (dist(x, y) == 0.0) fail(Err::Singular, std::string(who) + ": x == y");
}

// interior points plus the closures of the two boundaries
bool in_perforated_closure(const DomainSpec& spec, const Point& p, const Point& center,
                           double eps) {
  if (is_inside(spec, p)) return true;
  if (std::abs(norm(p) - 1.0) < 1e-13) return true;
  if (std::abs(dist(p, center) - eps) < 1e-13) return true;
  return false;
}
}  // namespace

KernelEval KernelEval::assemble(std::string formula, const Point& x, const Point& y, double eps,
                                std::map<std::string, double> terms) {
  KernelEval e;
  e.formula = std::move(formula);
  e.x = x;
  e.y = y;
  e.eps = eps;
  e.terms = std::move(terms);
  e.value = 0.0;
  for (const auto& [k, v] : e.terms) e.value += v;
  return e;
}

// ---------------------------------------------------------------------------
// Hadamard-type evaluators (regular perturbation of the disk)
// ---------------------------------------------------------------------------

struct HadamardEvaluator::Impl {
  PerturbedDisk spec;
  DomainSpec domain;
  QuadOptions quad;
  // true normal distance from the unit circle to the perturbed curve, divided
  // by eps, tabulated at m_max uniformly spaced angles
  std::vector<double> delta_eff;

  Impl(const PerturbedDisk& d, const QuadOptions& q)
      : spec(d), domain(make_domain(PerturbedDisk(d))), quad(q) {
    // node striding into the shared distance table needs power-of-two sizes
    auto round_pow2 = [](int v) {
      int p = 64;
      while (p < v) p *= 2;
      return p;
    };
    quad.m_start = round_pow2(std::max(64, quad.m_start));
    quad.m_max = round_pow2(std::max(quad.m_start, quad.m_max));
    delta_eff.resize(quad.m_max);
    if (spec.epsilon == 0.0) {
      std::fill(delta_eff.begin(), delta_eff.end(), 0.0);
      return;
    }
    BoundaryCurve curve = boundary_curve(domain, {BoundaryKind::Perturbed, 0});
    for (int i = 0; i < quad.m_max; ++i) {
      double t = kTwoPi * i / quad.m_max;
      Point z(std::cos(t), std::sin(t));
      delta_eff[i] = local_distance(curve, z, t) / spec.epsilon;
    }
  }

  // windowed scan + golden refinement; the nearest parameter sits within
  // O(eps) of the node angle for the shipped radial curves
  static double local_distance(const BoundaryCurve& curve, const Point& z, double t0) {
    auto d2 = [&](double t) { return norm2(curve.pos(t) - z); };
    const int n = 64;
    const double half = 0.5;
    double best = t0, bestd = d2(t0);
    for (int i = -n; i <= n; ++i) {
      double t = t0 + half * i / n;
      double v = d2(t);
      if (v < bestd) {
        bestd = v;
        best = t;
      }
    }
    double lo = best - half / n, hi = best + half / n;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi, c = b - phi * (b - a), dd = a + phi * (b - a);
    double fc = d2(c), fd = d2(dd);
    for (int it = 0; it < 40; ++it) {
      if (fc < fd) {
        b = dd;
        dd = c;
        fd = fc;
        c = b - phi * (b - a);
        fc = d2(c);
      } else {
        a = c;
        c = dd;
        fc = fd;
        dd = a + phi * (b - a);
        fd = d2(dd);
      }
    }
    double t = fc < fd ? c : dd;
    for (int it = 0; it < 3; ++it) {  // Newton polish of the stationarity condition
      Point p = curve.pos(t), p1 = curve.dpos(t), p2 = curve.ddpos(t);
      double g = dot(p - z, p1);
      double dg = norm2(p1) + dot(p - z, p2);
      if (std::abs(dg) < 1e-12) break;
      t -= g / dg;
    }
    return dist(curve.pos(t), z);
  }

  double delta_at(int i, int m) const { return delta_eff[(size_t)i * (quad.m_max / m)]; }

  // eps * int_{unit circle} dG/dnu(x,.) dG/dnu(.,y) delta ds, by the periodic
  // trapezoid rule with doubling until the value settles
  double hadamard_integral(const Point& x, const Point& y) const {
    if (spec.epsilon == 0.0) return 0.0;
    auto poisson = [](const Point& p, double t) {
      Point z(std::cos(t), std::sin(t));
      return (1.0 - norm2(p)) / (kTwoPi * norm2(p - z));
    };
    double prev = 0.0;
    bool have_prev = false;
    for (int m = quad.m_start; m <= quad.m_max; m *= 2) {
      double h = kTwoPi / m;
      double acc = 0.0;
      for (int i = 0; i < m; ++i) {
        double t = i * h;
        // dG/dnu = -Poisson kernel on the unit circle
        acc += poisson(x, t) * poisson(y, t) * delta_at(i, m);
      }
      double val = spec.epsilon * acc * h;
      if (have_prev && std::abs(val - prev) <= quad.tol) return val;
      prev = val;
      have_prev = true;
    }
    fail(Err::QuadratureUnderResolved, "hadamard integral did not settle below tolerance");
  }

  double delta_of_angle(double t) const {
    // linear interpolation of the tabulated smooth profile
    double u = t / kTwoPi * quad.m_max;
    int i = (int)std::floor(u);
    double f = u - i;
    int i0 = ((i % quad.m_max) + quad.m_max) % quad.m_max;
    int i1 = (i0 + 1) % quad.m_max;
    return (1.0 - f) * delta_eff[i0] + f * delta_eff[i1];
  }

  KernelEval classical(const Point& x, const Point& y) const {
    require_distinct(x, y, "hadamard_classical");
    if (!is_inside(domain, x) || !is_inside(domain, y))
      fail(Err::NotInDomain, "hadamard_classical: point outside the perturbed domain");
    std::map<std::string, double> terms;
    terms["outer-green"] = disk_green(x, y);
    terms["hadamard-integral"] = -hadamard_integral(x, y);
    return KernelEval::assemble("hadamard-classical", x, y, spec.epsilon, std::move(terms));
  }

  KernelEval uniform(const Point& x, const Point& y, double d0) const {
    KernelEval base = classical(x, y);
    double rx = norm(x), ry = norm(y);
    double rho_x = 1.0 - rx, rho_y = 1.0 - ry;  // distance to the unit circle
    if (rho_x > d0 || rho_y > d0)
      fail(Err::OutsideStrip, "hadamard_uniform: point outside the near-boundary strip");
    Point zx = x / rx, zy = y / ry;
    double dx = spec.epsilon * delta_of_angle(polar_angle(zx));
    double dy = spec.epsilon * delta_of_angle(polar_angle(zy));
    double zz = norm2(zx - zy);
    double den = zz + (rho_x + rho_y) * (rho_x + rho_y);
    double num = zz + (rho_x - dx + rho_y - dy) * (rho_x - dx + rho_y - dy);
    std::map<std::string, double> terms = base.terms;
    terms["boundary-layer-log"] = std::log(num / den) / (4.0 * kPi);
    terms["boundary-layer-rational"] = (dx + dy) * (rho_x + rho_y) / (kTwoPi * den);
    return KernelEval::assemble("hadamard-uniform", x, y, spec.epsilon, std::move(terms));
  }
};

HadamardEvaluator::HadamardEvaluator(const PerturbedDisk& d, const QuadOptions& q)
    : impl_(std::make_unique<Impl>(d, q)) {}
HadamardEvaluator::~HadamardEvaluator() = default;
HadamardEvaluator::HadamardEvaluator(HadamardEvaluator&&) noexcept = default;

KernelEval HadamardEvaluator::classical(const Point& x, const Point& y) const {
  return impl_->classical(x, y);
}
KernelEval HadamardEvaluator::uniform(const Point& x, const Point& y, double d0) const {
  return impl_->uniform(x, y, d0);
}

KernelEval hadamard_classical(const PerturbedDisk& d, const Point& x, const Point& y,
                              const QuadOptions& q) {
  return HadamardEvaluator(d, q).classical(x, y);
}

KernelEval hadamard_uniform(const PerturbedDisk& d, const Point& x, const Point& y, double d0,
                            const QuadOptions& q) {
  return HadamardEvaluator(d, q).uniform(x, y, d0);
}

// ---------------------------------------------------------------------------
// Dirichlet hole in 3d
// ---------------------------------------------------------------------------

KernelEval dirichlet_hole_3d(const BallWithHole& d, const Point& x, const Point& y) {
  require_distinct(x, y, "dirichlet_hole_3d");
  DomainSpec spec = make_domain(BallWithHole(d));
  if (!in_perforated_closure(spec, x, d.center, d.epsilon) ||
      !in_perforated_closure(spec, y, d.center, d.epsilon))
    fail(Err::NotInPerforatedDomain, "dirichlet_hole_3d: point outside the perforated ball");
  const Point& c = d.center;
  double eps = d.epsilon;
  Point xi = (x - c) / eps, eta = (y - c) / eps;
  xi.dim = eta.dim = 3;
  double px = ball_capacitary_potential(xi), py = ball_capacitary_potential(eta);
  double hx = ball_regular_part(x, c), hy = ball_regular_part(c, y);
  double hcc = ball_regular_part(c, c);

  std::map<std::string, double> terms;
  terms["outer-green"] = ball_green(x, y);
  terms["inner-green"] = exterior_ball_green(xi, eta) / eps;
  terms["fundamental-compensator"] = -fundamental_3d(x, y);
  terms["capacity-x"] = hy * px;
  terms["capacity-y"] = hx * py;
  terms["capacity-cross"] = -hcc * px * py;
  terms["capacitance-energy"] = -eps * ball_capacity() * hx * hy;
  return KernelEval::assemble("dirichlet-hole-3d", x, y, eps, std::move(terms));
}

// ---------------------------------------------------------------------------
// Dirichlet hole in 2d
// ---------------------------------------------------------------------------

namespace {

double th3_denominator(const DiskWithHole& d) {
  double h = disk_regular_part(d.center, d.center);
  return std::log(d.epsilon) / kTwoPi + h - exterior_disk_zeta_inf();
}

}  // namespace

KernelEval dirichlet_hole_2d(const DiskWithHole& d, const Point& x, const Point& y) {
  require_distinct(x, y, "dirichlet_hole_2d");
  DomainSpec spec = make_domain(DiskWithHole(d));
  if (!in_perforated_closure(spec, x, d.center, d.epsilon) ||
      !in_perforated_closure(spec, y, d.center, d.epsilon))
    fail(Err::NotInPerforatedDomain, "dirichlet_hole_2d: point outside the perforated disk");
  const Point& c = d.center;
  double eps = d.epsilon;
  double den = th3_denominator(d);
  if (std::abs(den) < 1e-8)
    fail(Err::DenominatorDegenerate,
         "dirichlet_hole_2d: resonance at eps = exp(2 pi (zeta_inf - H(c,c)))");
  Point xi = (x - c) / eps, eta = (y - c) / eps;
  double zx = exterior_disk_zeta(xi), zy = exterior_disk_zeta(eta);
  double zinf = exterior_disk_zeta_inf();
  double fx = std::log(eps) / kTwoPi + zx - zinf + disk_regular_part(x, c);
  double fy = std::log(eps) / kTwoPi + zy - zinf + disk_regular_part(c, y);

  std::map<std::string, double> terms;
  terms["outer-green"] = disk_green(x, y);
  terms["inner-green"] = exterior_disk_green(xi, eta);
  terms["log-compensator"] = std::log(dist(x, y) / eps) / kTwoPi;
  terms["resonance-rational"] = fx * fy / den;
  terms["zeta-x"] = -zx;
  terms["zeta-y"] = -zy;
  terms["zeta-inf"] = zinf;
  return KernelEval::assemble("dirichlet-hole-2d", x, y, eps, std::move(terms));
}

// ---------------------------------------------------------------------------
// Simplified far/near-field forms
// ---------------------------------------------------------------------------

KernelEval simplified_far(const DomainSpec& spec, const Point& x, const Point& y) {
  require_distinct(x, y, "simplified_far");
  if (spec.is<DiskWithHole>()) {
    const auto& d = spec.as<DiskWithHole>();
    double eps = d.epsilon;
    if (std::min(dist(x, d.center), dist(y, d.center)) <= 2.0 * eps)
      fail(Err::ConstraintViolated, "simplified_far: min distance to the hole center <= 2 eps");
    std::map<std::string, double> terms;
    terms["outer-green"] = disk_green(x, y);
    terms["resonance-rational"] =
        disk_green(x, d.center) * disk_green(d.center, y) / th3_denominator(d);
    return KernelEval::assemble("simplified-far", x, y, eps, std::move(terms));
  }
  if (spec.is<BallWithHole>()) {
    const auto& d = spec.as<BallWithHole>();
    double eps = d.epsilon;
    if (std::min(dist(x, d.center), dist(y, d.center)) <= 2.0 * eps)
      fail(Err::ConstraintViolated, "simplified_far: min distance to the hole center <= 2 eps");
    std::map<std::string, double> terms;
    terms["outer-green"] = ball_green(x, y);
    terms["capacity-cross-energy"] =
        -eps * ball_capacity() * ball_green(x, d.center) * ball_green(d.center, y);
    return KernelEval::assemble("simplified-far", x, y, eps, std::move(terms));
  }
  fail(Err::InvalidConfig, "simplified_far needs DiskWithHole or BallWithHole");
}

KernelEval simplified_near(const DomainSpec& spec, const Point& x, const Point& y) {
  require_distinct(x, y, "simplified_near");
  if (spec.is<DiskWithHole>()) {
    const auto& d = spec.as<DiskWithHole>();
    double eps = d.epsilon;
    if (std::max(dist(x, d.center), dist(y, d.center)) >= 0.5)
      fail(Err::ConstraintViolated, "simplified_near: max distance to the hole center >= 1/2");
    Point xi = (x - d.center) / eps, eta = (y - d.center) / eps;
    std::map<std::string, double> terms;
    terms["inner-green"] = exterior_disk_green(xi, eta);
    terms["resonance-rational"] =
        exterior_disk_zeta(xi) * exterior_disk_zeta(eta) / th3_denominator(d);
    return KernelEval::assemble("simplified-near", x, y, eps, std::move(terms));
  }
  if (spec.is<BallWithHole>()) {
    const auto& d = spec.as<BallWithHole>();
    double eps = d.epsilon;
    if (std::max(dist(x, d.center), dist(y, d.center)) >= 0.5)
      fail(Err::ConstraintViolated, "simplified_near: max distance to the hole center >= 1/2");
    Point xi = (x - d.center) / eps, eta = (y - d.center) / eps;
    xi.dim = eta.dim = 3;
    std::map<std::string, double> terms;
    terms["inner-green"] = exterior_ball_green(xi, eta) / eps;
    terms["capacity-correction"] =
        -ball_regular_part(d.center, d.center) * (ball_capacitary_potential(xi) - 1.0) *
        (ball_capacitary_potential(eta) - 1.0);
    return KernelEval::assemble("simplified-near", x, y, eps, std::move(terms));
  }
  fail(Err::InvalidConfig, "simplified_near needs DiskWithHole or BallWithHole");
}

// ---------------------------------------------------------------------------
// Mixed problem: Dirichlet outer boundary, Neumann hole
// ---------------------------------------------------------------------------

KernelEval mixed_outer_dirichlet(const DiskWithHole& d, const Point& x, const Point& y) {
  require_distinct(x, y, "mixed_outer_dirichlet");
  DomainSpec spec = make_domain(DiskWithHole(d));
  if (!in_perforated_closure(spec, x, d.center, d.epsilon) ||
      !in_perforated_closure(spec, y, d.center, d.epsilon))
    fail(Err::NotInPerforatedDomain, "mixed_outer_dirichlet: point outside the domain");
  const Point& c = d.center;
  double eps = d.epsilon;
  Point xi = (x - c) / eps, eta = (y - c) / eps;
  Point dip_x = exterior_disk_dipole_field(xi);
  Point dip_y = exterior_disk_dipole_field(eta);
  Point gx = disk_regular_grad_x(c, y);  // grad in the first slot at the hole center
  Point gy = disk_regular_grad_y(x, c);
  Mat2 hess = disk_regular_hess_xy(c, c);

  std::map<std::string, double> terms;
  terms["outer-green"] = disk_green(x, y);
  terms["inner-neumann"] = exterior_disk_neumann(xi, eta);
  terms["log-compensator"] = std::log(dist(x, y) / eps) / kTwoPi;
  terms["dipole-x"] = eps * dot(dip_x, gx);
  terms["dipole-y"] = eps * dot(dip_y, gy);
  double quad = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) quad += dip_y[j] * hess[i][j] * dip_x[i];
  terms["dipole-cross"] = -eps * eps * quad;
  return KernelEval::assemble("mixed-outer-dirichlet", x, y, eps, std::move(terms));
}

// ---------------------------------------------------------------------------
// Mixed problem: Neumann outer boundary, Dirichlet hole
// ---------------------------------------------------------------------------

KernelEval mixed_outer_neumann(const DiskWithHole& d, const Point& x, const Point& y) {
  require_distinct(x, y, "mixed_outer_neumann");
  DomainSpec spec = make_domain(DiskWithHole(d));
  if (!in_perforated_closure(spec, x, d.center, d.epsilon) ||
      !in_perforated_closure(spec, y, d.center, d.epsilon))
    fail(Err::NotInPerforatedDomain, "mixed_outer_neumann: point outside the domain");
  const Point& c = d.center;
  double eps = d.epsilon;
  Point xi = (x - c) / eps, eta = (y - c) / eps;
  Point dx_field = exterior_disk_dirichlet_field(xi);
  Point dy_field = exterior_disk_dirichlet_field(eta);
  Point gy = disk_neumann_regular_grad_y(x, c);
  Point gx = disk_neumann_regular_grad_x(c, y);
  Mat2 hess = disk_neumann_regular_hess_xy(c, c);

  std::map<std::string, double> terms;
  terms["inner-green"] = exterior_disk_green(xi, eta);
  terms["outer-neumann"] = disk_neumann_function(x, y);
  terms["log-compensator"] = std::log(dist(x, y)) / kTwoPi;
  terms["neumann-regular-origin"] = disk_neumann_regular(c, c);
  terms["dipole-y"] = eps * dot(dy_field, gy);
  terms["dipole-x"] = eps * dot(dx_field, gx);
  double quad = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) quad += dy_field[j] * hess[i][j] * dx_field[i];
  terms["dipole-cross"] = -eps * eps * quad;
  return KernelEval::assemble("mixed-outer-neumann", x, y, eps, std::move(terms));
}

// ---------------------------------------------------------------------------
// Thin rod
// ---------------------------------------------------------------------------

KernelEval thin_rod(const ThinRodStrip& d, const Point& x, const Point& y) {
  require_distinct(x, y, "thin_rod");
  DomainSpec spec = make_domain(ThinRodStrip(d));
  if (!is_inside(spec, x) || !is_inside(spec, y))
    fail(Err::NotInRod, "thin_rod: point outside the rod");
  double eps = d.epsilon, a = d.half_length, w = d.width;
  StripKernels strip(w);
  Point av(0.0, a);
  Point xp = (x - av) / eps, xm = (x + av) / eps;
  Point yp = (y - av) / eps, ym = (y + av) / eps;
  Point xs = x / eps, ys = y / eps;

  double zpx = strip.zeta_plus(xp), zmx = strip.zeta_minus(xm);
  double zpy = strip.zeta_plus(yp), zmy = strip.zeta_minus(ym);
  double zip = strip.zeta_inf_plus, zim = strip.zeta_inf_minus;

  double fx = x.y() / (eps * w) - 0.5 * (zim - zip) + zpx - zmx;
  double fy = y.y() / (eps * w) - 0.5 * (zim - zip) + zpy - zmy;
  double den = 2.0 * a / w + eps * (zip + zim);

  std::map<std::string, double> terms;
  terms["plus-end-green"] = strip.gplus(xp, yp);
  terms["minus-end-green"] = strip.gminus(xm, ym);
  terms["infinite-strip-compensator"] = -strip.ginf(xs, ys);
  terms["axial-rational"] = -eps * fx * fy / den;
  terms["zeta-quarter-sum"] =
      0.25 * (2.0 * a / (eps * w) + zim + zip - 2.0 * (zpx + zmx + zpy + zmy));
  return KernelEval::assemble("thin-rod", x, y, eps, std::move(terms));
}

// ---------------------------------------------------------------------------
// Truncated sector
// ---------------------------------------------------------------------------

KernelEval truncated_sector(const TruncatedSector& d, const Point& x, const Point& y,
                            PsiNormalization norm_mode) {
  require_distinct(x, y, "truncated_sector");
  DomainSpec spec = make_domain(TruncatedSector(d));
  if (!is_inside(spec, x) || !is_inside(spec, y))
    fail(Err::NotInTruncatedSector, "truncated_sector: point outside the truncated sector");
  double eps = d.epsilon;
  SectorKernels sk(d.alpha, norm_mode);
  double lam = sk.eigen.lambda;
  Point xi = x / eps, eta = y / eps;
  double rx = norm(x), ry = norm(y), rxs = norm(xi), rys = norm(eta);
  double tx = polar_angle(x), ty = polar_angle(y);

  double bracket_inf_x = std::pow(rxs, lam) * sk.psi(tx) - sk.zinf(xi);
  double bracket_inf_y = std::pow(rys, lam) * sk.psi(ty) - sk.zinf(eta);
  double bracket_0_x = std::pow(rx, -lam) * sk.psi(tx) - sk.z0(x);
  double bracket_0_y = std::pow(ry, -lam) * sk.psi(ty) - sk.z0(y);

  std::map<std::string, double> terms;
  terms["sector-green"] = sk.g_unit_sector(x, y);
  terms["exterior-sector-green"] = sk.g_exterior_sector(xi, eta);
  terms["cone-compensator"] = -sk.g_cone(x, y);
  terms["eigen-correction"] = std::pow(eps, lam) / (2.0 * lam) *
                              (bracket_inf_x * bracket_0_y + bracket_inf_y * bracket_0_x);
  return KernelEval::assemble("truncated-sector", x, y, eps, std::move(terms));
}

// ---------------------------------------------------------------------------
// Several spherical inclusions
// ---------------------------------------------------------------------------

KernelEval multi_inclusion_3d(const BallWithHoles& d, const Point& x, const Point& y,
                              CrossTermMode mode) {
  require_distinct(x, y, "multi_inclusion_3d");
  DomainSpec spec = make_domain(BallWithHoles(d));
  if (!is_inside(spec, x) || !is_inside(spec, y))
    fail(Err::NotInPerforatedDomain, "multi_inclusion_3d: point outside the perforated ball");
  double eps = d.epsilon;
  int n = (int)d.centers.size();
  std::vector<Point> xis(n), etas(n);
  std::vector<double> px(n), py(n);
  for (int j = 0; j < n; ++j) {
    xis[j] = (x - d.centers[j]) / eps;
    etas[j] = (y - d.centers[j]) / eps;
    xis[j].dim = etas[j].dim = 3;
    px[j] = ball_capacitary_potential(xis[j]);
    py[j] = ball_capacitary_potential(etas[j]);
  }

  std::map<std::string, double> terms;
  terms["outer-green"] = ball_green(x, y);
  double inner = 0.0, blocks = 0.0, energy = 0.0;
  for (int j = 0; j < n; ++j) {
    inner += exterior_ball_green(xis[j], etas[j]) / eps;
    double hx = ball_regular_part(x, d.centers[j]);
    double hy = ball_regular_part(d.centers[j], y);
    double hjj = ball_regular_part(d.centers[j], d.centers[j]);
    blocks += hy * px[j] + hx * py[j] - hjj * px[j] * py[j];
    energy += -eps * ball_capacity() * hx * hy;
  }
  terms["inner-green-sum"] = inner;
  terms["fundamental-compensator"] = -n * fundamental_3d(x, y);
  terms["capacity-blocks"] = blocks;
  terms["capacitance-energy-blocks"] = energy;
  double cross = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      cross += ball_green(d.centers[j], d.centers[i]) * px[j] * py[i];
    }
  if (mode == CrossTermMode::Doubled) cross *= 2.0;
  terms["interaction-cross-sum"] = cross;
  return KernelEval::assemble("multi-inclusion-3d", x, y, eps, std::move(terms));
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

bool formula_known(const std::string& id) {
  static const char* ids[] = {"hadamard-classical",  "hadamard-uniform",
                              "dirichlet-hole-2d",   "dirichlet-hole-3d",
                              "simplified-far",       "simplified-near",
                              "mixed-outer-dirichlet", "mixed-outer-neumann",
                              "thin-rod",            "truncated-sector",
                              "multi-inclusion-3d",  "disk-green",
                              "ball-green",          "oracle-self"};
  for (const char* s : ids)
    if (id == s) return true;
  return false;
}

KernelEval evaluate_formula(const std::string& id, const DomainSpec& spec, const Point& x,
                            const Point& y, const EvalOptions& opt) {
  if (id == "hadamard-classical") return hadamard_classical(spec.as<PerturbedDisk>(), x, y, opt.quad);
  if (id == "hadamard-uniform")
    return hadamard_uniform(spec.as<PerturbedDisk>(), x, y, opt.d0, opt.quad);
  if (id == "dirichlet-hole-2d") return dirichlet_hole_2d(spec.as<DiskWithHole>(), x, y);
  if (id == "dirichlet-hole-3d") return dirichlet_hole_3d(spec.as<BallWithHole>(), x, y);
  if (id == "simplified-far") return simplified_far(spec, x, y);
  if (id == "simplified-near") return simplified_near(spec, x, y);
  if (id == "mixed-outer-dirichlet") return mixed_outer_dirichlet(spec.as<DiskWithHole>(), x, y);
  if (id == "mixed-outer-neumann") return mixed_outer_neumann(spec.as<DiskWithHole>(), x, y);
  if (id == "thin-rod") return thin_rod(spec.as<ThinRodStrip>(), x, y);
  if (id == "truncated-sector")
    return truncated_sector(spec.as<TruncatedSector>(), x, y, opt.psi_norm);
  if (id == "multi-inclusion-3d")
    return multi_inclusion_3d(spec.as<BallWithHoles>(), x, y, opt.cross_mode);
  if (id == "disk-green") {
    std::map<std::string, double> terms{{"disk-green", disk_green(x, y)}};
    return KernelEval::assemble("disk-green", x, y, spec.epsilon(), std::move(terms));
  }
  if (id == "ball-green") {
    std::map<std::string, double> terms{{"ball-green", ball_green(x, y)}};
    return KernelEval::assemble("ball-green", x, y, spec.epsilon(), std::move(terms));
  }
  fail(Err::InvalidConfig, "unknown formula id '" + id + "'");
}

}  // namespace greens
