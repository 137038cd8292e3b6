#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "greens/asymptotics.hpp"
#include "greens/oracle.hpp"

using namespace greens;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::mt19937 rng(4242);
double urand(double lo, double hi) {
  return lo + (hi - lo) * std::uniform_real_distribution<double>(0, 1)(rng);
}

PerturbedDisk example_disk(double eps) {
  PerturbedDisk d;
  d.delta.c0 = 1.0;
  d.delta.ck = {0.3};
  d.epsilon = eps;
  return d;
}

double term_sum(const KernelEval& e) {
  double s = 0.0;
  for (const auto& [k, v] : e.terms) s += v;
  return s;
}

// Fourier evaluation of int P(x,.) P(y,.) w dtheta for a tabulated smooth
// weight w; independent route for the quadrature inside the classical formula
double poisson_product_integral(const Point& x, const Point& y,
                                const std::function<double(double)>& w) {
  int m = 4096;
  std::vector<double> wtab(m);
  for (int i = 0; i < m; ++i) wtab[i] = w(kTwoPi * i / m);
  // DFT of the weight
  int kmaxw = 64;
  std::vector<double> wre(kmaxw + 1, 0.0), wim(kmaxw + 1, 0.0);
  for (int k = 0; k <= kmaxw; ++k)
    for (int i = 0; i < m; ++i) {
      double t = kTwoPi * i / m;
      wre[k] += wtab[i] * std::cos(k * t) / m;
      wim[k] -= wtab[i] * std::sin(k * t) / m;
    }
  double rx = norm(x), ry = norm(y), tx = polar_angle(x), ty = polar_angle(y);
  // P(x, t) = (2pi)^-1 sum_k r^{|k|} e^{ik(t - tx)}
  int K = (int)std::ceil(std::log(1e-18) / std::log(std::max(rx, ry))) + 1;
  std::vector<double> prx(K + 1, 1.0), pry(K + 1, 1.0);
  for (int k = 1; k <= K; ++k) {
    prx[k] = prx[k - 1] * rx;
    pry[k] = pry[k - 1] * ry;
  }
  double acc = 0.0;
  for (int k = -K; k <= K; ++k)
    for (int l = -K; l <= K; ++l) {
      int mm = -(k + l);
      if (std::abs(mm) > kmaxw) continue;
      double amp = prx[std::abs(k)] * pry[std::abs(l)];
      if (amp < 1e-18) continue;
      double wr = wre[std::abs(mm)];
      double wi = mm >= 0 ? wim[std::abs(mm)] : -wim[std::abs(mm)];
      double phase = -k * tx - l * ty;
      acc += amp * (wr * std::cos(phase) - wi * std::sin(phase));
    }
  return acc * kTwoPi / (kTwoPi * kTwoPi);
}

}  // namespace

TEST_CASE("classical formula: degenerate limit and symmetry") {
  PerturbedDisk flat = example_disk(0.0);
  Point x(0.3, 0.0), y(0.0, 0.4);
  KernelEval e = hadamard_classical(flat, x, y);
  CHECK(e.value == doctest::Approx(disk_green(x, y)).epsilon(1e-15));
  CHECK(e.terms.at("hadamard-integral") == 0.0);

  HadamardEvaluator ev(example_disk(0.05));
  for (int i = 0; i < 5; ++i) {
    Point a(urand(0.1, 0.7) * std::cos(urand(0, kTwoPi)), urand(0.1, 0.7) * std::sin(urand(0, 6)));
    Point b(urand(0.1, 0.7) * std::cos(urand(0, kTwoPi)), urand(0.1, 0.7) * std::sin(urand(0, 6)));
    if (dist(a, b) < 0.05) continue;
    CHECK(std::abs(ev.classical(a, b).value - ev.classical(b, a).value) < 1e-12);
  }
}

TEST_CASE("classical formula: quadrature agrees with a Fourier route") {
  PerturbedDisk d = example_disk(0.1);
  HadamardEvaluator ev(d);
  DomainSpec spec = make_domain(PerturbedDisk(d));
  Point x(0.55, 0.1), y(-0.2, 0.5);
  KernelEval e = ev.classical(x, y);
  // independent weight: the true normal distance over eps, via projections
  auto weight = [&](double t) {
    Point z(std::cos(t), std::sin(t));
    ProjectionResult pr = nearest_boundary_point(spec, z, {BoundaryKind::Perturbed, 0});
    return pr.rho / d.epsilon;
  };
  double ref = d.epsilon * poisson_product_integral(x, y, weight);
  CHECK(std::abs(-e.terms.at("hadamard-integral") - ref) < 1e-9);
}

TEST_CASE("uniform formula: boundary-layer structure") {
  double eps = 1e-6;
  HadamardEvaluator tiny(example_disk(eps));
  Point x(0.9 * std::cos(0.2), 0.9 * std::sin(0.2));
  Point y(0.88 * std::cos(0.21), 0.88 * std::sin(0.21));
  KernelEval e = tiny.uniform(x, y);
  CHECK(std::abs(e.terms.at("boundary-layer-log")) < 1e-5);
  CHECK(std::abs(e.terms.at("boundary-layer-rational")) < 1e-5);

  // both points close to one boundary point: the layer term is order one
  double eps2 = 0.05;
  PerturbedDisk d = example_disk(eps2);
  HadamardEvaluator ev(d);
  auto rb = [&](double t) { return 1.0 - eps2 * d.delta.eval(t); };
  double t0 = 0.4, t1 = 0.4 + 0.5 * eps2;
  Point xn((rb(t0) - 0.5 * eps2) * std::cos(t0), (rb(t0) - 0.5 * eps2) * std::sin(t0));
  Point yn((rb(t1) - 0.5 * eps2) * std::cos(t1), (rb(t1) - 0.5 * eps2) * std::sin(t1));
  KernelEval near = ev.uniform(xn, yn);
  CHECK(std::abs(near.terms.at("boundary-layer-log")) > 0.05);
  CHECK(std::abs(near.terms.at("boundary-layer-log")) < 1.0);

  // outside the strip the uniform expansion refuses to evaluate
  try {
    ev.uniform(Point(0.1, 0.0), Point(0.0, 0.2));
    CHECK(false);
  } catch (const Error& e2) {
    CHECK(e2.code() == Err::OutsideStrip);
  }
}

TEST_CASE("3d hole evaluator") {
  BallWithHole d{Point(0, 0, 0), 0.05};
  Point x(0.5, 0, 0), y(0, 0.5, 0);
  // symmetry
  CHECK(std::abs(dirichlet_hole_3d(d, x, y).value - dirichlet_hole_3d(d, y, x).value) < 1e-12);
  // value against the concentric oracle within the O(eps^2/min) budget
  double err = std::abs(dirichlet_hole_3d(d, x, y).value - concentric_spheres_green(0.05, x, y));
  CHECK(err < 1.0 * 0.05 * 0.05 / 0.5);
  // on the hole sphere the capacitary potential saturates and the value is O(eps)
  auto on_hole_value = [&](double eps) {
    BallWithHole dd{Point(0, 0, 0), eps};
    Point xs(eps, 0, 0);
    KernelEval e = dirichlet_hole_3d(dd, xs, y);
    return e;
  };
  KernelEval e1 = on_hole_value(0.04);
  KernelEval e2 = on_hole_value(0.02);
  CHECK(std::abs(e1.value) < 0.05);
  CHECK(std::abs(e1.value / e2.value) > 1.4);
  CHECK(std::abs(e1.value / e2.value) < 3.0);
  Point xs(0.04, 0, 0);
  Point xi = xs / 0.04;
  xi.dim = 3;
  CHECK(ball_capacitary_potential(xi) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("2d hole evaluator") {
  DiskWithHole d{Point(0, 0), 0.05};
  // unit disk and unit-disk hole: the resonance denominator reduces to log eps
  KernelEval e = dirichlet_hole_2d(d, Point(0.5, 0), Point(-0.4, 0.2));
  double den = std::log(0.05) / kTwoPi;
  double fx = std::log(0.05) / kTwoPi + exterior_disk_zeta(Point(0.5 / 0.05, 0)) +
              disk_regular_part(Point(0.5, 0), Point(0, 0));
  double fy = std::log(0.05) / kTwoPi + exterior_disk_zeta(Point(-0.4 / 0.05, 0.2 / 0.05)) +
              disk_regular_part(Point(0, 0), Point(-0.4, 0.2));
  CHECK(e.terms.at("resonance-rational") == doctest::Approx(fx * fy / den).epsilon(1e-13));
  // vanishes on the outer circle up to O(eps)
  Point y(0.5 * std::cos(0.9), 0.5 * std::sin(0.9));
  for (double t : {0.2, 2.8}) {
    Point z(std::cos(t), std::sin(t));
    CHECK(std::abs(dirichlet_hole_2d(d, z, y).value) < 0.05);
  }
  // matches the annulus oracle to O(eps)
  Point x(0.5, 0.0), y2(-0.4, 0.2);
  double err = std::abs(dirichlet_hole_2d(d, x, y2).value -
                        annulus_green(0.05, AnnulusBC::DD, x, y2));
  CHECK(err < 0.05);
  // off-center hole against the boundary-integral oracle
  DiskWithHole off{Point(0.2, 0.1), 0.04};
  DomainSpec off_spec = make_domain(DiskWithHole(off));
  BoundaryIntegralGreen bie(off_spec, 512);
  Point a(0.6, -0.1), b(-0.3, 0.4);
  CHECK(std::abs(dirichlet_hole_2d(off, a, b).value - bie(a, b)) < 10.0 * 0.04);
}

TEST_CASE("simplified far and near forms") {
  // n = 3 far form: discrepancy against the full expansion obeys the bound
  BallWithHole b3{Point(0, 0, 0), 0.04};
  DomainSpec s3 = make_domain(BallWithHole(b3));
  Point x(0.5, 0.1, -0.2), y(-0.3, 0.45, 0.2);
  double full = dirichlet_hole_3d(b3, x, y).value;
  double simp = simplified_far(s3, x, y).value;
  double rx = norm(x), ry = norm(y);
  double bound = 0.04 * 0.04 / (rx * rx * ry * ry * std::min(rx, ry));
  CHECK(std::abs(full - simp) < 2.0 * bound);

  // n = 2 near form
  DiskWithHole d2{Point(0, 0), 0.02};
  DomainSpec s2 = make_domain(DiskWithHole(d2));
  Point a(0.1 * std::cos(0.3), 0.1 * std::sin(0.3)), bb(0.08 * std::cos(2.1), 0.08 * std::sin(2.1));
  double full2 = dirichlet_hole_2d(d2, a, bb).value;
  double simp2 = simplified_near(s2, a, bb).value;
  CHECK(std::abs(full2 - simp2) < 1.0 * 0.1);

  // constraint guards
  try {
    simplified_far(s2, Point(0.019, 0.0), Point(0.5, 0.0));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::ConstraintViolated);
  }
  CHECK_THROWS_AS(simplified_near(s2, Point(0.6, 0.0), Point(0.1, 0.1)), Error);
}

TEST_CASE("Neumann-hole evaluator") {
  DiskWithHole d{Point(0, 0), 0.05};
  Point x(0.5, 0.1), y(-0.3, 0.4);
  CHECK(std::abs(mixed_outer_dirichlet(d, x, y).value - mixed_outer_dirichlet(d, y, x).value) <
        1e-12);
  double err = std::abs(mixed_outer_dirichlet(d, x, y).value -
                        annulus_green(0.05, AnnulusBC::DN, x, y));
  CHECK(err < 2.0 * 0.05 * 0.05);
  // Neumann data on the hole: the flux defect of the expansion vanishes with
  // eps (first order; the k = 2 exterior reflection is not modelled)
  auto hole_normal_derivative = [&](double eps) {
    DiskWithHole dd{Point(0, 0), eps};
    Point nu(std::cos(0.8), std::sin(0.8));
    double h = 1e-5;
    double g0 = mixed_outer_dirichlet(dd, nu * eps, y).value;
    double g1 = mixed_outer_dirichlet(dd, nu * (eps + h), y).value;
    double g2 = mixed_outer_dirichlet(dd, nu * (eps + 2 * h), y).value;
    return std::abs((-3 * g0 + 4 * g1 - g2) / (2 * h));
  };
  double n1 = hole_normal_derivative(0.08);
  double n2 = hole_normal_derivative(0.04);
  CHECK(n1 < 2.0 * 0.08);
  CHECK(n1 / n2 > 1.7);
  CHECK(n1 / n2 < 2.6);
}

TEST_CASE("Neumann-outer evaluator") {
  DiskWithHole d{Point(0, 0), 0.05};
  Point x(0.5, 0.1), y(-0.3, 0.4);
  // unit-disk outer boundary: the constant R(0,0) term drops
  KernelEval e = mixed_outer_neumann(d, x, y);
  CHECK(e.terms.at("neumann-regular-origin") == 0.0);
  CHECK(std::abs(e.value - mixed_outer_neumann(d, y, x).value) < 1e-12);
  double err = std::abs(e.value - annulus_green(0.05, AnnulusBC::ND, x, y));
  CHECK(err < 2.0 * 0.05 * 0.05);
  // Dirichlet data on the hole: the value is O(eps) there
  auto hole_value = [&](double eps) {
    DiskWithHole dd{Point(0, 0), eps};
    Point nu(std::cos(1.9), std::sin(1.9));
    return std::abs(mixed_outer_neumann(dd, nu * eps, y).value);
  };
  double v1 = hole_value(0.08), v2 = hole_value(0.04);
  CHECK(v1 < 2.0 * 0.08);  // vanishes at least linearly in eps
  CHECK(v1 / v2 > 1.4);
  CHECK(v1 / v2 < 4.6);
}

TEST_CASE("thin-rod evaluator") {
  ThinRodStrip rod{1.0, 1.0, 0.1, "flat"};
  Point x(0.03, 0.35), y(0.07, -0.4);
  KernelEval e = thin_rod(rod, x, y);
  CHECK(std::abs(e.value - thin_rod(rod, y, x).value) < 1e-10);
  // flat ends make the rational denominator 2 a / w exactly
  double num_x = -x.y() / (0.1 * 1.0);
  double num_y = -y.y() / (0.1 * 1.0);
  CHECK(e.terms.at("axial-rational") ==
        doctest::Approx(-0.1 * num_x * num_y / 2.0).epsilon(1e-12));
  // against the rectangle oracle
  ThinRodStrip rod2{0.5, 4.0, 0.2, "flat"};
  Point a(0.3, 0.2), b(0.5, -0.3);
  double err = std::abs(thin_rod(rod2, a, b).value - rectangle_mixed_green(0.5, 0.8, a, b));
  CHECK(err < 5e-3);
  ThinRodStrip rod3{0.5, 4.0, 0.1, "flat"};
  Point a3(0.15, 0.2), b3(0.25, -0.3);
  double err3 = std::abs(thin_rod(rod3, a3, b3).value - rectangle_mixed_green(0.5, 0.4, a3, b3));
  CHECK(err3 < err / 10.0);  // super-polynomial collapse
}

TEST_CASE("truncated-sector evaluator") {
  TruncatedSector ts{kPi / 2, 0.05, 1.0};
  Point x(0.5 * std::cos(0.6), 0.5 * std::sin(0.6)), y(0.7 * std::cos(1.1), 0.7 * std::sin(1.1));
  KernelEval e = truncated_sector(ts, x, y);
  CHECK(std::abs(e.value - truncated_sector(ts, y, x).value) < 1e-12);

  // closed-form cancellation: the bracket correction reduces to the
  // secondary r^{-+lambda} parts of Z
  SectorKernels sk(kPi / 2);
  double lam = sk.eigen.lambda, c2 = sk.eigen.scale * sk.eigen.scale;
  double rx = norm(x), ry = norm(y), tx = polar_angle(x), ty = polar_angle(y);
  double reduced = std::pow(0.05, 2.0 * lam) / (2.0 * lam) * c2 *
                   (std::pow(rx, -lam) * std::pow(ry, lam) +
                    std::pow(rx, lam) * std::pow(ry, -lam)) *
                   std::sin(lam * tx) * std::sin(lam * ty);
  CHECK(e.terms.at("eigen-correction") == doctest::Approx(reduced).epsilon(1e-12));

  double err = std::abs(e.value - truncated_sector_green(kPi / 2, 0.05, x, y));
  CHECK(err < 1e-5);
}

TEST_CASE("multi-hole evaluator") {
  BallWithHoles one;
  one.centers = {Point(0, 0, 0)};
  one.epsilon = 0.05;
  BallWithHole single{Point(0, 0, 0), 0.05};
  Point x(0.5, 0.1, -0.2), y(-0.3, 0.45, 0.2);
  CHECK(std::abs(multi_inclusion_3d(one, x, y).value - dirichlet_hole_3d(single, x, y).value) <
        1e-13);

  BallWithHoles two;
  two.centers = {Point(0.3, 0, 0), Point(-0.3, 0, 0)};
  two.epsilon = 0.04;
  KernelEval e = multi_inclusion_3d(two, x, y);
  CHECK(std::abs(e.value - multi_inclusion_3d(two, y, x).value) < 1e-12);
  KernelEval ed = multi_inclusion_3d(two, x, y, CrossTermMode::Doubled);
  CHECK(std::abs(ed.value - multi_inclusion_3d(two, y, x, CrossTermMode::Doubled).value) < 1e-12);
  CHECK(ed.terms.at("interaction-cross-sum") ==
        doctest::Approx(2.0 * e.terms.at("interaction-cross-sum")).epsilon(1e-13));
  // two-sphere oracle comparison at one epsilon
  SphereSuperpositionGreen oracle(two);
  CHECK(std::abs(e.value - oracle(x, y)) < 5.0 * 0.04 * 0.04);
}

TEST_CASE("kernel evaluations sum their terms") {
  DiskWithHole d{Point(0, 0), 0.05};
  Point x(0.5, 0.1), y(-0.3, 0.4);
  for (const KernelEval& e :
       {dirichlet_hole_2d(d, x, y), mixed_outer_dirichlet(d, x, y), mixed_outer_neumann(d, x, y)}) {
    CHECK(std::abs(e.value - term_sum(e)) < 1e-13);
  }
}

TEST_CASE("degenerate perturbation limits") {
  BallWithHole tiny{Point(0, 0, 0), 1e-6};
  Point X(0.5, 0, 0), Y(0, 0.5, 0);
  CHECK(std::abs(dirichlet_hole_3d(tiny, X, Y).value - ball_green(X, Y)) < 1e-5);
}

TEST_CASE("domain guards of the evaluators") {
  DiskWithHole dh{Point(0, 0), 0.05};
  try {
    dirichlet_hole_2d(dh, Point(0.02, 0.0), Point(0.5, 0.0));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::NotInPerforatedDomain);
  }
  ThinRodStrip rod{0.5, 4.0, 0.1, "flat"};
  try {
    thin_rod(rod, Point(0.9, 0.0), Point(0.2, 0.1));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::NotInRod);
  }
  TruncatedSector ts{kPi / 2, 0.05, 1.0};
  try {
    truncated_sector(ts, Point(-0.3, 0.2), Point(0.2, 0.3));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::NotInTruncatedSector);
  }
  try {
    dirichlet_hole_2d(dh, Point(0.5, 0.0), Point(0.5, 0.0));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::Singular);
  }
}

TEST_CASE("formula dispatch") {
  DomainSpec disk = make_domain(DiskWithHole{Point(0, 0), 0.05});
  KernelEval e = evaluate_formula("disk-green", disk, Point(0.5, 0), Point(0, 0));
  CHECK(e.value == doctest::Approx(std::log(2.0) / kTwoPi).epsilon(1e-14));
  CHECK(formula_known("thin-rod"));
  CHECK(!formula_known("no-such-formula"));
  CHECK_THROWS_AS(evaluate_formula("no-such-formula", disk, Point(0.5, 0), Point(0, 0)), Error);
}
