#include "greens/model_kernels.hpp"

#include <numbers>

namespace greens {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_dim(const Point& p, int d, const char* who) {
  if (p.dim != d) fail(Err::WrongDimension, std::string(who) + ": wrong point dimension");
}

void require_distinct(const Point& x, const Point& y, const char* who) {
  if (dist(x, y) == 0.0) fail(Err::Singular, std::string(who) + ": x == y");
}

// S(x, y) = sqrt(|x|^2 |y|^2 - 2 x.y + 1) = |y| |x - y/|y|^2|, symmetric.
double image_factor(const Point& x, const Point& y) {
  return std::sqrt(std::max(0.0, norm2(x) * norm2(y) - 2.0 * dot(x, y) + 1.0));
}
}  // namespace

double fundamental_2d(const Point& x, const Point& y) {
  require_distinct(x, y, "fundamental_2d");
  return -std::log(dist(x, y)) / kTwoPi;
}

double fundamental_3d(const Point& x, const Point& y) {
  require_distinct(x, y, "fundamental_3d");
  return 1.0 / (4.0 * kPi * dist(x, y));
}

// ---------------------------------------------------------------------------
// Unit disk, Dirichlet
// ---------------------------------------------------------------------------

double disk_green(const Point& x, const Point& y) {
  require_dim(x, 2, "disk_green");
  require_distinct(x, y, "disk_green");
  if (norm(x) >= 1.0 || norm(y) >= 1.0)
    if (norm(x) > 1.0 + 1e-14 || norm(y) > 1.0 + 1e-14)
      fail(Err::NotInDomain, "disk_green: argument outside the closed unit disk");
  return std::log(image_factor(x, y) / dist(x, y)) / kTwoPi;
}

double disk_regular_part(const Point& x, const Point& y) {
  require_dim(x, 2, "disk_regular_part");
  return -std::log(image_factor(x, y)) / kTwoPi;
}

Point disk_regular_grad_x(const Point& x, const Point& y) {
  double s2 = norm2(x) * norm2(y) - 2.0 * dot(x, y) + 1.0;
  // grad_x H = (y - x |y|^2) / (2 pi S^2)
  Point g = (y - x * norm2(y)) / (kTwoPi * s2);
  g.dim = 2;
  return g;
}

Point disk_regular_grad_y(const Point& x, const Point& y) {
  Point g = disk_regular_grad_x(y, x);
  return g;
}

Mat2 disk_regular_hess_xy(const Point& x, const Point& y) {
  // H = -(4 pi)^-1 log S^2 with S^2 = 1 - 2 x.y + |x|^2 |y|^2.
  double s2 = norm2(x) * norm2(y) - 2.0 * dot(x, y) + 1.0;
  std::array<double, 2> gx{-2.0 * y.x() + 2.0 * x.x() * norm2(y),
                           -2.0 * y.y() + 2.0 * x.y() * norm2(y)};
  std::array<double, 2> gy{-2.0 * x.x() + 2.0 * y.x() * norm2(x),
                           -2.0 * x.y() + 2.0 * y.y() * norm2(x)};
  Mat2 h{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double sij = -2.0 * (i == j ? 1.0 : 0.0) + 4.0 * x[i] * y[j];
      h[i][j] = -(sij * s2 - gx[i] * gy[j]) / (4.0 * kPi * s2 * s2);
    }
  return h;
}

// ---------------------------------------------------------------------------
// Exterior disk, Dirichlet
// ---------------------------------------------------------------------------

namespace {
void require_exterior(const Point& p, const char* who) {
  if (norm(p) < 1.0 - 1e-14) fail(Err::OutsideExterior, std::string(who) + ": |arg| < 1");
}
}  // namespace

double exterior_disk_green(const Point& xi, const Point& eta) {
  require_dim(xi, 2, "exterior_disk_green");
  require_distinct(xi, eta, "exterior_disk_green");
  require_exterior(xi, "exterior_disk_green");
  require_exterior(eta, "exterior_disk_green");
  return std::log(image_factor(xi, eta) / dist(xi, eta)) / kTwoPi;
}

double exterior_disk_zeta(const Point& eta) {
  require_dim(eta, 2, "exterior_disk_zeta");
  require_exterior(eta, "exterior_disk_zeta");
  return std::log(norm(eta)) / kTwoPi;
}

double exterior_disk_zeta_inf() { return 0.0; }

Point exterior_disk_dirichlet_field(const Point& xi) {
  require_dim(xi, 2, "exterior_disk_dirichlet_field");
  require_exterior(xi, "exterior_disk_dirichlet_field");
  Point d = xi / norm2(xi);
  d.dim = 2;
  return d;
}

// ---------------------------------------------------------------------------
// Exterior disk, Neumann
// ---------------------------------------------------------------------------

double exterior_disk_neumann(const Point& xi, const Point& eta) {
  require_dim(xi, 2, "exterior_disk_neumann");
  require_distinct(xi, eta, "exterior_disk_neumann");
  require_exterior(xi, "exterior_disk_neumann");
  require_exterior(eta, "exterior_disk_neumann");
  return -(std::log(dist(xi, eta)) + std::log(image_factor(xi, eta)) - std::log(norm(xi)) -
           std::log(norm(eta))) /
         kTwoPi;
}

Point exterior_disk_dipole_field(const Point& xi) {
  require_dim(xi, 2, "exterior_disk_dipole_field");
  require_exterior(xi, "exterior_disk_dipole_field");
  Point d = xi * (-1.0 / norm2(xi));
  d.dim = 2;
  return d;
}

// ---------------------------------------------------------------------------
// Unit disk, Neumann function
// ---------------------------------------------------------------------------

double disk_neumann_function(const Point& x, const Point& y) {
  require_dim(x, 2, "disk_neumann_function");
  require_distinct(x, y, "disk_neumann_function");
  return -(std::log(dist(x, y)) + std::log(image_factor(x, y))) / kTwoPi;
}

double disk_neumann_regular(const Point& x, const Point& y) {
  require_dim(x, 2, "disk_neumann_regular");
  return std::log(image_factor(x, y)) / kTwoPi;
}

Point disk_neumann_regular_grad_x(const Point& x, const Point& y) {
  return disk_regular_grad_x(x, y) * -1.0;  // R = -H for the unit disk
}

Point disk_neumann_regular_grad_y(const Point& x, const Point& y) {
  return disk_regular_grad_y(x, y) * -1.0;
}

Mat2 disk_neumann_regular_hess_xy(const Point& x, const Point& y) {
  Mat2 h = disk_regular_hess_xy(x, y);
  for (auto& row : h)
    for (auto& v : row) v = -v;
  return h;
}

// ---------------------------------------------------------------------------
// Unit ball
// ---------------------------------------------------------------------------

double ball_green(const Point& x, const Point& y) {
  require_dim(x, 3, "ball_green");
  require_distinct(x, y, "ball_green");
  if (norm(x) > 1.0 + 1e-14 || norm(y) > 1.0 + 1e-14)
    fail(Err::NotInDomain, "ball_green: argument outside the closed unit ball");
  return (1.0 / dist(x, y) - 1.0 / image_factor(x, y)) / (4.0 * kPi);
}

double ball_regular_part(const Point& x, const Point& y) {
  require_dim(x, 3, "ball_regular_part");
  return 1.0 / (4.0 * kPi * image_factor(x, y));
}

double exterior_ball_green(const Point& xi, const Point& eta) {
  require_dim(xi, 3, "exterior_ball_green");
  require_distinct(xi, eta, "exterior_ball_green");
  if (norm(xi) < 1.0 - 1e-14 || norm(eta) < 1.0 - 1e-14)
    fail(Err::OutsideExterior, "exterior_ball_green: |arg| < 1");
  return (1.0 / dist(xi, eta) - 1.0 / image_factor(xi, eta)) / (4.0 * kPi);
}

double ball_capacitary_potential(const Point& xi) {
  require_dim(xi, 3, "ball_capacitary_potential");
  double r = norm(xi);
  if (r < 1.0 - 1e-14) fail(Err::OutsideExterior, "ball_capacitary_potential: |xi| < 1");
  return 1.0 / r;
}

double ball_capacity() { return 4.0 * kPi; }

// ---------------------------------------------------------------------------
// Strip kernels
// ---------------------------------------------------------------------------

namespace {

// q(d, u) = 1 - 2 e^{-pi d / w} cos(pi u / w) + e^{-2 pi d / w}, d >= 0.
double strip_q(double d, double u, double w) {
  double e = std::exp(-kPi * d / w);
  double s = std::sin(kPi * u / (2.0 * w));
  double one_minus = -std::expm1(-kPi * d / w);
  return one_minus * one_minus + 4.0 * e * s * s;
}

// sum_{k>=1} (k pi)^-1 e^{-k pi d / w} cos(k pi a/w) cos(k pi b/w)
double strip_sumlog(double d, double a, double b, double w) {
  double q1 = strip_q(d, a - b, w), q2 = strip_q(d, a + b, w);
  if (q1 <= 0.0 || q2 <= 0.0)
    fail(Err::Singular, "strip kernel: coincident points or wall images");
  return -(std::log(q1) + std::log(q2)) / (4.0 * kPi);
}

}  // namespace

StripKernels::StripKernels(double w) : width(w) {
  if (!(w > 0)) fail(Err::InvalidConfig, "StripKernels: width must be > 0");
}

double StripKernels::ginf(const Point& xi, const Point& eta) const {
  require_distinct(xi, eta, "StripKernels::ginf");
  double d = std::abs(xi.y() - eta.y());
  return -d / (2.0 * width) + strip_sumlog(d, xi.x(), eta.x(), width);
}

double StripKernels::gplus(const Point& xi, const Point& eta) const {
  require_distinct(xi, eta, "StripKernels::gplus");
  if (xi.y() > 1e-12 || eta.y() > 1e-12)
    fail(Err::NotInDomain, "StripKernels::gplus: arguments must have x2 <= 0");
  double d = std::abs(xi.y() - eta.y());
  double dimg = -(xi.y() + eta.y());
  return -std::max(xi.y(), eta.y()) / width + strip_sumlog(d, xi.x(), eta.x(), width) -
         strip_sumlog(dimg, xi.x(), eta.x(), width);
}

double StripKernels::gminus(const Point& xi, const Point& eta) const {
  require_distinct(xi, eta, "StripKernels::gminus");
  if (xi.y() < -1e-12 || eta.y() < -1e-12)
    fail(Err::NotInDomain, "StripKernels::gminus: arguments must have x2 >= 0");
  double d = std::abs(xi.y() - eta.y());
  double dimg = xi.y() + eta.y();
  return std::min(xi.y(), eta.y()) / width + strip_sumlog(d, xi.x(), eta.x(), width) -
         strip_sumlog(dimg, xi.x(), eta.x(), width);
}

// ---------------------------------------------------------------------------
// Sector kernels
// ---------------------------------------------------------------------------

namespace {

struct PolarPt {
  double r, t;
};

PolarPt to_polar(const Point& p) { return {norm(p), polar_angle(p)}; }

// Dirichlet Green of the unit disk in polar form; also valid for the disk
// exterior (the image formula vanishes on |u| = 1 from either side).
double disk_green_polar(double ru, double tu, double rv, double tv) {
  double c = std::cos(tu - tv);
  double num = 1.0 - 2.0 * ru * rv * c + ru * ru * rv * rv;
  double den = ru * ru - 2.0 * ru * rv * c + rv * rv;
  if (den == 0.0) fail(Err::Singular, "sector kernel: coincident mapped points");
  return 0.5 * std::log(num / den) / kTwoPi;
}

}  // namespace

SectorKernels::SectorKernels(double a, PsiNormalization norm) : alpha(a) {
  if (!(a > 0 && a < kTwoPi)) fail(Err::InvalidConfig, "SectorKernels: alpha must be in (0, 2pi)");
  eigen.lambda = kPi / a;
  eigen.lambda2 = 2.0 * kPi / a;
  eigen.normalization = norm;
  eigen.scale = norm == PsiNormalization::L2 ? std::sqrt(2.0 / a) : 1.0;
}

double SectorKernels::g_cone(const Point& x, const Point& y) const {
  require_distinct(x, y, "SectorKernels::g_cone");
  PolarPt px = to_polar(x), py = to_polar(y);
  if (px.t <= 0 || px.t >= alpha || py.t <= 0 || py.t >= alpha)
    fail(Err::OutsideSector, "g_cone: angle outside (0, alpha)");
  double l = eigen.lambda;
  double Rx = std::pow(px.r, l), Ry = std::pow(py.r, l);
  double fx = l * px.t, fy = l * py.t;
  // half-plane image formula at w = z^lambda
  double num = Rx * Rx - 2.0 * Rx * Ry * std::cos(fx + fy) + Ry * Ry;
  double den = Rx * Rx - 2.0 * Rx * Ry * std::cos(fx - fy) + Ry * Ry;
  if (den == 0.0) fail(Err::Singular, "g_cone: coincident mapped points");
  return 0.5 * std::log(num / den) / kTwoPi;
}

double SectorKernels::g_unit_sector(const Point& x, const Point& y) const {
  require_distinct(x, y, "SectorKernels::g_unit_sector");
  PolarPt px = to_polar(x), py = to_polar(y);
  if (px.t <= 0 || px.t >= alpha || py.t <= 0 || py.t >= alpha || px.r >= 1.0 + 1e-14 ||
      py.r >= 1.0 + 1e-14)
    fail(Err::OutsideSector, "g_unit_sector: point outside the unit sector");
  double l = eigen.lambda;
  double Rx = std::pow(px.r, l), Ry = std::pow(py.r, l);
  double fx = l * px.t, fy = l * py.t;
  return disk_green_polar(Rx, fx, Ry, fy) - disk_green_polar(Rx, fx, Ry, -fy);
}

double SectorKernels::g_exterior_sector(const Point& x, const Point& y) const {
  require_distinct(x, y, "SectorKernels::g_exterior_sector");
  PolarPt px = to_polar(x), py = to_polar(y);
  if (px.t <= 0 || px.t >= alpha || py.t <= 0 || py.t >= alpha || px.r <= 1.0 - 1e-14 ||
      py.r <= 1.0 - 1e-14)
    fail(Err::OutsideSector, "g_exterior_sector: point outside the exterior sector");
  double l = eigen.lambda;
  double Rx = std::pow(px.r, l), Ry = std::pow(py.r, l);
  double fx = l * px.t, fy = l * py.t;
  return disk_green_polar(Rx, fx, Ry, fy) - disk_green_polar(Rx, fx, Ry, -fy);
}

double SectorKernels::z0(const Point& x) const {
  PolarPt p = to_polar(x);
  if (p.t < 0 || p.t > alpha) fail(Err::OutsideSector, "z0: angle outside [0, alpha]");
  double l = eigen.lambda;
  return (std::pow(p.r, -l) - std::pow(p.r, l)) * psi(p.t);
}

double SectorKernels::zinf(const Point& x) const { return -z0(x); }

// ---------------------------------------------------------------------------
// Facade
// ---------------------------------------------------------------------------

ModelKernelSet ModelKernelSet::for_domain(const DomainSpec& spec, PsiNormalization norm) {
  ModelKernelSet set;
  set.dim_ = spec.dim();
  if (spec.is<ThinRodStrip>())
    set.strip_ = std::make_shared<StripKernels>(spec.as<ThinRodStrip>().width);
  if (spec.is<TruncatedSector>())
    set.sector_ = std::make_shared<SectorKernels>(spec.as<TruncatedSector>().alpha, norm);
  return set;
}

double ModelKernelSet::green(const Point& x, const Point& y) const {
  if (strip_)
    fail(Err::InvalidConfig,
         "ModelKernelSet: rod geometries expose their kernels through strip()");
  if (dim_ == 3) return ball_green(x, y);
  if (sector_) return sector_->g_unit_sector(x, y);
  return disk_green(x, y);
}

double ModelKernelSet::regular_part(const Point& x, const Point& y) const {
  if (strip_)
    fail(Err::InvalidConfig,
         "ModelKernelSet: rod geometries expose their kernels through strip()");
  if (dim_ == 3) return ball_regular_part(x, y);
  if (sector_) return fundamental_2d(x, y) - sector_->g_unit_sector(x, y);
  return disk_regular_part(x, y);
}

const StripKernels& ModelKernelSet::strip() const {
  if (!strip_) fail(Err::InvalidConfig, "ModelKernelSet: no strip kernels for this domain");
  return *strip_;
}

const SectorKernels& ModelKernelSet::sector() const {
  if (!sector_) fail(Err::InvalidConfig, "ModelKernelSet: no sector kernels for this domain");
  return *sector_;
}

}  // namespace greens
