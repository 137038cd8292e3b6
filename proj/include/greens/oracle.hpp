#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>

#include "greens/geometry.hpp"

namespace greens {

enum class AnnulusBC {
  DD,  // Dirichlet outer, Dirichlet inner
  DN,  // Dirichlet outer, Neumann inner
  ND,  // Neumann outer, Dirichlet inner
};

/// Exact separable solution on the annulus eps < r < 1. Fourier modes are
/// resummed into closed log terms plus a geometrically small residual series.
double annulus_green(double eps, AnnulusBC bc, const Point& x, const Point& y);

/// Exact separable solution between concentric spheres eps < r < 1 (Dirichlet
/// both), Legendre series with generating-function acceleration.
double concentric_spheres_green(double eps, const Point& x, const Point& y);

/// Rectangle (0, W) x (-a, a), Neumann long sides, Dirichlet ends. Coordinates
/// are rod coordinates; callers pass W = eps * width.
double rectangle_mixed_green(double a, double W, const Point& x, const Point& y);

/// Annular sector eps < r < 1, 0 < theta < alpha, Dirichlet everywhere.
double truncated_sector_green(double alpha, double eps, const Point& x, const Point& y);

/// Nystrom solver for the interior Dirichlet Green's function of a planar
/// domain bounded by smooth closed curves (outer curve plus optional holes).
/// Double-layer density with one interior log charge per hole; periodic
/// trapezoid quadrature.
class BoundaryIntegralGreen {
 public:
  BoundaryIntegralGreen(const DomainSpec& spec, int panels);
  ~BoundaryIntegralGreen();
  BoundaryIntegralGreen(BoundaryIntegralGreen&&) noexcept;

  double operator()(const Point& x, const Point& y) const;
  double residual() const;  // discrete solve residual (inf norm)
  int panels() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Dirichlet Green's function of the unit ball minus several spherical holes,
/// by least-squares superposition of interior solid harmonics and exterior
/// multipoles about each hole center.
class SphereSuperpositionGreen {
 public:
  SphereSuperpositionGreen(const BallWithHoles& spec, double basis_tol = 1e-7);
  ~SphereSuperpositionGreen();
  SphereSuperpositionGreen(SphereSuperpositionGreen&&) noexcept;

  double operator()(const Point& x, const Point& y) const;
  /// Max-principle bound: sup of the boundary misfit on probe points.
  double boundary_residual(const Point& y) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct OracleSolution {
  std::function<double(const Point&, const Point&)> g;
  double accuracy = 0.0;
  std::string method;  // fourier-annulus, spherical-harmonics, cosine-rectangle,
                       // sector-series, boundary-integral, sphere-reflections
  std::map<std::string, double> params;
};

/// Reference solver for the true perturbed-domain kernel matched to a formula
/// family. `bc` is honoured for DiskWithHole mixed problems.
OracleSolution make_oracle(const DomainSpec& spec, const std::string& formula_id);

/// Resolution-doubling self-check: max |g_m - g_2m| over the probe pairs.
double oracle_doubling_error(const DomainSpec& spec, const std::string& formula_id,
                             const std::vector<PairEntry>& probes);

}  // namespace greens
