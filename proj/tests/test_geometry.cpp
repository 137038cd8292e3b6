#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "greens/geometry.hpp"

using namespace greens;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

PerturbedDisk example_disk(double eps) {
  PerturbedDisk d;
  d.delta.c0 = 1.0;
  d.delta.ck = {0.3};
  d.epsilon = eps;
  return d;
}

// adaptive Simpson arclength of a radial curve r(t)
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double adaptive_arclength(const TrigPoly& delta, double eps) {
  auto f = [&](double t) {
    double r = 1.0 - eps * delta.eval(t);
    double dr = -eps * delta.deriv(t);
    return std::sqrt(r * r + dr * dr);
  };
  double a = 0.0, b = kTwoPi, m = kPi;
  double fa = f(a), fm = f(m), fb = f(b);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, 1e-12, 40);
}
}  // namespace

TEST_CASE("nearest point on the unit circle") {
  DomainSpec spec = make_domain(example_disk(0.0));
  ProjectionResult pr = nearest_boundary_point(spec, Point(0.5, 0.0));
  CHECK(pr.rho == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pr.z_of_x.location.x() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(pr.z_of_x.location.y()) < 1e-10);
}

TEST_CASE("projection from the center is ambiguous") {
  DomainSpec spec = make_domain(example_disk(0.0));
  CHECK_THROWS_AS(nearest_boundary_point(spec, Point(0.0, 0.0)), Error);
  try {
    nearest_boundary_point(spec, Point(0.0, 0.0));
  } catch (const Error& e) {
    CHECK(e.code() == Err::AmbiguousProjection);
  }
}

TEST_CASE("nearest point on a perturbed curve") {
  DomainSpec spec = make_domain(example_disk(0.1));
  ProjectionResult pr = nearest_boundary_point(spec, Point(0.8, 0.0));
  CHECK(pr.rho == doctest::Approx(0.07).epsilon(1e-9));
  CHECK(pr.z_of_x.location.x() == doctest::Approx(0.87).epsilon(1e-8));
  CHECK(std::abs(pr.z_of_x.location.y()) < 1e-7);
}

TEST_CASE("projection optimality: offset parallel to the normal") {
  DomainSpec spec = make_domain(example_disk(0.1));
  for (double t : {0.3, 1.1, 2.7, 4.0, 5.9}) {
    Point x(0.6 * std::cos(t), 0.6 * std::sin(t));
    ProjectionResult pr = nearest_boundary_point(spec, x);
    Point off = x - pr.z_of_x.location;
    double cross = off.x() * pr.z_of_x.normal.y() - off.y() * pr.z_of_x.normal.x();
    CHECK(std::abs(cross) / norm(off) < 1e-6);
  }
}

TEST_CASE("projection rejects exterior points") {
  DomainSpec spec = make_domain(example_disk(0.1));
  CHECK_THROWS_AS(nearest_boundary_point(spec, Point(2.0, 0.0)), Error);
}

TEST_CASE("trapezoid weights on the unit circle") {
  DomainSpec spec = make_domain(example_disk(0.0));
  auto q = boundary_quadrature(spec, {BoundaryKind::Outer, 0}, 64);
  double len = 0.0;
  for (const auto& bp : q) len += bp.weight;
  CHECK(len == doctest::Approx(kTwoPi).epsilon(1e-13));
  CHECK(q.size() == 64);
}

TEST_CASE("degenerate perturbation reproduces circle nodes") {
  DomainSpec flat = make_domain(example_disk(0.0));
  auto qp = boundary_quadrature(flat, {BoundaryKind::Perturbed, 0}, 32);
  auto qc = boundary_quadrature(flat, {BoundaryKind::Outer, 0}, 32);
  for (size_t i = 0; i < qp.size(); ++i) {
    CHECK(dist(qp[i].location, qc[i].location) < 1e-14);
    CHECK(std::abs(qp[i].weight - qc[i].weight) < 1e-14);
  }
}

TEST_CASE("boundary points satisfy the curve equation with unit normals") {
  PerturbedDisk d = example_disk(0.1);
  DomainSpec spec = make_domain(PerturbedDisk(d));
  for (const auto& bp : boundary_quadrature(spec, {BoundaryKind::Perturbed, 0}, 64)) {
    double r_curve = 1.0 - d.epsilon * d.delta.eval(polar_angle(bp.location));
    CHECK(std::abs(norm(bp.location) - r_curve) < 1e-10);
    CHECK(std::abs(norm(bp.normal) - 1.0) < 1e-12);
  }
}

TEST_CASE("perturbed arclength matches adaptive refinement") {
  PerturbedDisk d = example_disk(0.1);
  DomainSpec spec = make_domain(PerturbedDisk(d));
  auto q = boundary_quadrature(spec, {BoundaryKind::Perturbed, 0}, 256);
  double len = 0.0;
  for (const auto& bp : q) len += bp.weight;
  double ref = adaptive_arclength(d.delta, d.epsilon);
  CHECK(std::abs(len - ref) < 1e-8);
}

TEST_CASE("quadrature error decays spectrally") {
  // 1/(1.25 - cos t): geometric Fourier decay, exact integral 2 pi / 0.75
  DomainSpec spec = make_domain(example_disk(0.0));
  double exact = kTwoPi / 0.75;
  auto integral = [&](int m) {
    auto q = boundary_quadrature(spec, {BoundaryKind::Outer, 0}, m);
    double acc = 0.0;
    for (const auto& bp : q) acc += bp.weight / (1.25 - std::cos(bp.param));
    return acc;
  };
  double e16 = std::abs(integral(16) - exact);
  double e32 = std::abs(integral(32) - exact);
  double e64 = std::abs(integral(64) - exact);
  CHECK(e16 > 4.0 * e32);
  CHECK((e32 > 4.0 * e64 || e64 < 1e-12));
}

TEST_CASE("quadrature input validation") {
  DomainSpec spec = make_domain(example_disk(0.0));
  CHECK_THROWS_AS(boundary_quadrature(spec, {BoundaryKind::Outer, 0}, 8), Error);
  DomainSpec ball = make_domain(BallWithHole{Point(0, 0, 0), 0.05});
  try {
    boundary_quadrature(ball, {BoundaryKind::Outer, 0}, 64);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::UnsupportedBoundary);
  }
}

TEST_CASE("sector arc quadrature recovers arc lengths") {
  DomainSpec spec = make_domain(TruncatedSector{kPi / 2, 0.1, 1.0});
  for (auto kind : {BoundaryKind::OuterArc, BoundaryKind::InnerArc}) {
    auto q = boundary_quadrature(spec, {kind, 0}, 24);
    double len = 0.0;
    for (const auto& bp : q) len += bp.weight;
    double r = kind == BoundaryKind::OuterArc ? 1.0 : 0.1;
    CHECK(len == doctest::Approx(kPi / 2 * r).epsilon(1e-12));
  }
}

TEST_CASE("pair grid covers the near-hole stratum") {
  DomainSpec spec = make_domain(DiskWithHole{Point(0, 0), 0.1});
  PairGrid grid = make_pair_grid(spec, GridPolicy{});
  bool found = false;
  for (const auto& e : grid.pairs) {
    double m = std::min(norm(e.x), norm(e.y));
    if (e.stratum == "near-hole-0.5eps" && std::abs(m - 0.15) < 1e-12) found = true;
  }
  CHECK(found);
}

TEST_CASE("infeasible r_min empties the grid") {
  DomainSpec spec = make_domain(DiskWithHole{Point(0, 0), 0.1});
  GridPolicy policy;
  policy.r_min = 10.0;
  try {
    make_pair_grid(spec, policy);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::EmptyGrid);
  }
}

TEST_CASE("default grid is seed independent") {
  DomainSpec spec = make_domain(DiskWithHole{Point(0, 0), 0.1});
  GridPolicy a, b;
  a.seed = 1;
  b.seed = 99;
  PairGrid ga = make_pair_grid(spec, a);
  PairGrid gb = make_pair_grid(spec, b);
  REQUIRE(ga.pairs.size() == gb.pairs.size());
  for (size_t i = 0; i < ga.pairs.size(); ++i) {
    CHECK(dist(ga.pairs[i].x, gb.pairs[i].x) == 0.0);
    CHECK(dist(ga.pairs[i].y, gb.pairs[i].y) == 0.0);
    CHECK(ga.pairs[i].stratum == gb.pairs[i].stratum);
  }
}

TEST_CASE("grid pairs satisfy membership and separation") {
  for (DomainSpec spec :
       {make_domain(DiskWithHole{Point(0, 0), 0.08}), make_domain(example_disk(0.08)),
        make_domain(ThinRodStrip{0.5, 4.0, 0.1, "flat"}),
        make_domain(TruncatedSector{kPi / 2, 0.08, 1.0}),
        make_domain(BallWithHole{Point(0, 0, 0), 0.08})}) {
    GridPolicy policy;
    PairGrid grid = make_pair_grid(spec, policy);
    double rmin = policy.effective_r_min(spec.epsilon());
    CHECK(grid.pairs.size() > 10);
    for (const auto& e : grid.pairs) {
      CHECK(is_inside(spec, e.x));
      CHECK(is_inside(spec, e.y));
      CHECK(dist(e.x, e.y) >= rmin);
    }
    for (const auto& e : grid.excluded) CHECK(e.stratum == "coincidence-excluded");
  }
}

TEST_CASE("domain JSON round trip") {
  std::vector<DomainSpec> specs = {
      make_domain(example_disk(0.1)),
      make_domain(DiskWithHole{Point(0.1, -0.05), 0.05}),
      make_domain(BallWithHole{Point(0, 0, 0), 0.04}),
      make_domain(BallWithHoles{{Point(0.3, 0, 0), Point(-0.3, 0, 0)}, 0.05}),
      make_domain(ThinRodStrip{0.5, 4.0, 0.1, "flat"}),
      make_domain(TruncatedSector{3 * kPi / 4, 0.05, 1.0}),
  };
  for (const auto& spec : specs) {
    nlohmann::json j = domain_to_json(spec);
    DomainSpec back = domain_from_json(j);
    CHECK(back.kind() == spec.kind());
    CHECK(back.epsilon() == spec.epsilon());
    CHECK(domain_to_json(back) == j);
  }
}

TEST_CASE("domain JSON rejects unknown fields") {
  nlohmann::json j{{"type", "DiskWithHole"}, {"epsilon", 0.05}, {"radius", 2.0}};
  CHECK_THROWS_AS(domain_from_json(j), Error);
}

TEST_CASE("construction invariants") {
  CHECK_THROWS_AS(make_domain(DiskWithHole{Point(0, 0), 0.6}), Error);
  CHECK_THROWS_AS(make_domain(DiskWithHole{Point(0.9, 0), 0.05}), Error);
  CHECK_THROWS_AS(make_domain(TruncatedSector{7.0, 0.05, 1.0}), Error);
  try {
    make_domain(BallWithHoles{{Point(0.1, 0, 0), Point(0.12, 0, 0)}, 0.05});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::HolesOverlap);
  }
  PerturbedDisk bad = example_disk(0.1);
  bad.delta.c0 = -1.0;
  CHECK_THROWS_AS(make_domain(std::move(bad)), Error);
}
