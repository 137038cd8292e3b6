#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "greens/errors.hpp"

namespace greens {

/// Point (or vector) in R^2 or R^3.
struct Point {
  std::array<double, 3> a{0.0, 0.0, 0.0};
  int dim = 2;

  Point() = default;
  Point(double x, double y) : a{x, y, 0.0}, dim(2) {}
  Point(double x, double y, double z) : a{x, y, z}, dim(3) {}

  double x() const { return a[0]; }
  double y() const { return a[1]; }
  double z() const { return a[2]; }
  double& operator[](int i) { return a[i]; }
  double operator[](int i) const { return a[i]; }

  Point operator+(const Point& r) const {
    Point p = *this;
    for (int i = 0; i < 3; ++i) p.a[i] += r.a[i];
    return p;
  }
  Point operator-(const Point& r) const {
    Point p = *this;
    for (int i = 0; i < 3; ++i) p.a[i] -= r.a[i];
    return p;
  }
  Point operator*(double s) const {
    Point p = *this;
    for (auto& c : p.a) c *= s;
    return p;
  }
  Point operator/(double s) const { return *this * (1.0 / s); }
};

inline double dot(const Point& u, const Point& v) {
  return u.a[0] * v.a[0] + u.a[1] * v.a[1] + u.a[2] * v.a[2];
}
inline double norm2(const Point& u) { return dot(u, u); }
inline double norm(const Point& u) { return std::sqrt(norm2(u)); }
inline double dist(const Point& u, const Point& v) { return norm(u - v); }
inline Point normalized(const Point& u) {
  double n = norm(u);
  if (n == 0.0) fail(Err::InvalidConfig, "cannot normalize zero vector");
  return u / n;
}
/// Polar angle in [0, 2pi).
double polar_angle(const Point& p);

/// Trigonometric polynomial c0 + sum_k (ck[k-1] cos k t + sk[k-1] sin k t).
struct TrigPoly {
  double c0 = 1.0;
  std::vector<double> ck;
  std::vector<double> sk;

  double eval(double t) const;
  double deriv(double t) const;
  double deriv2(double t) const;
  double min_value() const;  // sampled minimum over a period
};

// ---------------------------------------------------------------------------
// Domain descriptions
// ---------------------------------------------------------------------------

/// Planar domain bounded by r(t) = 1 - epsilon * delta(t), delta > 0.
struct PerturbedDisk {
  TrigPoly delta;
  double epsilon = 0.0;  // epsilon = 0 degenerates to the unit disk
};

/// Unit disk minus a circular hole of radius epsilon centred at `center`.
struct DiskWithHole {
  Point center{0.0, 0.0};
  double epsilon = 0.05;
};

/// Unit ball minus a spherical hole of radius epsilon centred at `center`.
struct BallWithHole {
  Point center{0.0, 0.0, 0.0};
  double epsilon = 0.05;
};

/// Unit ball minus several disjoint spherical holes of common radius epsilon.
struct BallWithHoles {
  std::vector<Point> centers;
  double epsilon = 0.05;
};

/// Rectangle (0, epsilon*width) x (-half_length, half_length): Neumann sides,
/// Dirichlet ends.
struct ThinRodStrip {
  double half_length = 0.5;
  double width = 4.0;
  double epsilon = 0.1;
  std::string ends = "flat";
};

/// Annular sector epsilon < r < outer_radius, 0 < theta < alpha, Dirichlet.
struct TruncatedSector {
  double alpha = 1.5707963267948966;
  double epsilon = 0.05;
  double outer_radius = 1.0;
};

struct DomainSpec {
  std::variant<PerturbedDisk, DiskWithHole, BallWithHole, BallWithHoles, ThinRodStrip,
               TruncatedSector>
      v;

  int dim() const;
  double epsilon() const;
  std::string kind() const;

  template <class T>
  const T& as() const {
    const T* p = std::get_if<T>(&v);
    if (!p) fail(Err::InvalidConfig, "domain variant mismatch");
    return *p;
  }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(v);
  }
};

/// Validates invariants (positivity, containment, disjointness) and returns
/// the domain. Throws InvalidConfig / HolesOverlap on violation.
DomainSpec make_domain(PerturbedDisk d);
DomainSpec make_domain(DiskWithHole d);
DomainSpec make_domain(BallWithHole d);
DomainSpec make_domain(BallWithHoles d);
DomainSpec make_domain(ThinRodStrip d);
DomainSpec make_domain(TruncatedSector d);

DomainSpec with_epsilon(const DomainSpec& spec, double eps);

nlohmann::json domain_to_json(const DomainSpec& spec);
DomainSpec domain_from_json(const nlohmann::json& j);  // rejects unknown fields

/// Strict interior membership test (independent of grid construction).
bool is_inside(const DomainSpec& spec, const Point& x);

// ---------------------------------------------------------------------------
// Boundaries
// ---------------------------------------------------------------------------

enum class BoundaryKind {
  Outer,      // reference outer boundary (unit circle / sphere)
  Perturbed,  // perturbed outer curve of a PerturbedDisk
  Hole,       // hole circle (index selects the hole)
  InnerArc,   // sector arc r = epsilon
  OuterArc,   // sector arc r = outer_radius
};

struct BoundaryId {
  BoundaryKind kind = BoundaryKind::Outer;
  int index = 0;
};

/// Smooth closed curve t in [0, 2pi) with analytic derivatives.
struct BoundaryCurve {
  std::function<Point(double)> pos;
  std::function<Point(double)> dpos;
  std::function<Point(double)> ddpos;
  bool flip_normal = false;  // true when the curve bounds a hole

  /// Unit normal obtained by rotating the tangent; points away from the
  /// enclosed region unless flip_normal is set.
  Point unit_normal(double t) const;
};

BoundaryCurve boundary_curve(const DomainSpec& spec, BoundaryId which);

struct BoundaryPoint {
  Point location;
  Point normal;   // unit outward normal
  double param;   // curve parameter
  double weight;  // quadrature weight (arclength measure)
};

struct ProjectionResult {
  BoundaryPoint z_of_x;
  double rho = 0.0;
};

/// Global nearest point on the designated boundary (2048-sample scan plus 40
/// golden-section refinements). Throws AmbiguousProjection when two separated
/// minima tie within 1e-10.
ProjectionResult nearest_boundary_point(const DomainSpec& spec, const Point& x);
ProjectionResult nearest_boundary_point(const DomainSpec& spec, const Point& x, BoundaryId which);

/// Quadrature nodes/weights on the requested boundary. Closed curves use the
/// periodic trapezoid rule; sector arcs use Gauss-Legendre.
std::vector<BoundaryPoint> boundary_quadrature(const DomainSpec& spec, BoundaryId which, int m);

// ---------------------------------------------------------------------------
// Evaluation grids
// ---------------------------------------------------------------------------

struct GridPolicy {
  std::vector<double> near_offsets{0.5, 1.0, 2.0};     // multiples of epsilon
  std::vector<double> interior_radii{0.25, 0.4, 0.55, 0.7};
  int angles_near = 6;
  int angles_interior = 6;
  double r_min = -1.0;  // < 0 means max(1e-3, eps/10)
  double d0 = 0.3;      // half-width of the near-outer strip (boundary-layer strip)
  unsigned seed = 0;
  double jitter = 0.0;  // angular jitter amplitude; 0 keeps the grid RNG-free

  double effective_r_min(double eps) const {
    return r_min >= 0 ? r_min : std::max(1e-3, eps / 10.0);
  }
};

struct PairEntry {
  Point x;
  Point y;
  std::string stratum;  // "interior", "near-outer-0.5eps", "near-hole-1eps", ...
};

struct PairGrid {
  std::vector<PairEntry> pairs;
  std::vector<PairEntry> excluded;  // rejected pairs, tagged "coincidence-excluded"
};

PairGrid make_pair_grid(const DomainSpec& spec, const GridPolicy& policy);

}  // namespace greens
