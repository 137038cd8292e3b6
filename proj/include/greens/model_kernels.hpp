#pragma once

#include <array>
#include <memory>

#include "greens/geometry.hpp"

namespace greens {

// All kernels use the sign convention -Delta g = +delta(x - y), with the
// positive fundamental solutions (2pi)^-1 log(1/|x-y|) in 2d and
// (4pi)^-1 |x-y|^-1 in 3d.

double fundamental_2d(const Point& x, const Point& y);
double fundamental_3d(const Point& x, const Point& y);

using Mat2 = std::array<std::array<double, 2>, 2>;

// -- Unit disk, Dirichlet -----------------------------------------------------

double disk_green(const Point& x, const Point& y);
double disk_regular_part(const Point& x, const Point& y);  // H
Point disk_regular_grad_x(const Point& x, const Point& y);
Point disk_regular_grad_y(const Point& x, const Point& y);
Mat2 disk_regular_hess_xy(const Point& x, const Point& y);

// -- Exterior of the unit disk, Dirichlet ------------------------------------

double exterior_disk_green(const Point& xi, const Point& eta);  // script-G
double exterior_disk_zeta(const Point& eta);                    // lim_{|xi|->inf} G(xi, eta)
double exterior_disk_zeta_inf();                                // 0 for the unit disk

/// Bounded harmonic vector with D = xi on the unit circle (Kelvin inversion).
Point exterior_disk_dirichlet_field(const Point& xi);

// -- Exterior of the unit disk, Neumann ---------------------------------------

double exterior_disk_neumann(const Point& xi, const Point& eta);  // script-N

/// Harmonic vector vanishing at infinity with dD/dnu = nu on the circle,,
/// nu oriented outward from the hole.
Point exterior_disk_dipole_field(const Point& xi);

// -- Unit disk, Neumann function with log-compensated flux --------------------

double disk_neumann_function(const Point& x, const Point& y);  // N
double disk_neumann_regular(const Point& x, const Point& y);   // R
Point disk_neumann_regular_grad_x(const Point& x, const Point& y);
Point disk_neumann_regular_grad_y(const Point& x, const Point& y);
Mat2 disk_neumann_regular_hess_xy(const Point& x, const Point& y);

// -- Unit ball (3d) ------------------------------------------------------------

double ball_green(const Point& x, const Point& y);
double ball_regular_part(const Point& x, const Point& y);
double exterior_ball_green(const Point& xi, const Point& eta);
double ball_capacitary_potential(const Point& xi);  // P = 1/|xi|
double ball_capacity();                             // 4 pi

// -- Semi-infinite / infinite strip (Neumann sides) ---------------------------

/// Kernels for the strip 0 < x1 < width with Neumann sides. The plus family
/// lives on {x2 <= 0} with a Dirichlet end at x2 = 0, the minus family on
/// {x2 >= 0}. The cosine cross-section series is summed in closed log form.
struct StripKernels {
  double width = 1.0;
  double zeta_inf_plus = 0.0;
  double zeta_inf_minus = 0.0;

  explicit StripKernels(double w);

  double gplus(const Point& xi, const Point& eta) const;
  double gminus(const Point& xi, const Point& eta) const;
  double ginf(const Point& xi, const Point& eta) const;
  double zeta_plus(const Point& xi) const { return -xi.y() / width; }
  double zeta_minus(const Point& xi) const { return xi.y() / width; }
};

// -- Planar wedge / sector ------------------------------------------------------

enum class PsiNormalization { L2, Sup };

struct SectorEigen {
  double lambda = 0.0;
  double lambda2 = 0.0;
  double scale = 1.0;  // c in Psi(theta) = c sin(lambda theta)
  PsiNormalization normalization = PsiNormalization::L2;
};

/// Dirichlet kernels for the wedge 0 < theta < alpha via the conformal power
/// map w = z^(pi/alpha) and half-plane / half-disk images.
struct SectorKernels {
  double alpha;
  SectorEigen eigen;

  SectorKernels(double alpha, PsiNormalization norm = PsiNormalization::L2);

  double psi(double theta) const { return eigen.scale * std::sin(eigen.lambda * theta); }
  double g_cone(const Point& x, const Point& y) const;           // infinite wedge
  double g_unit_sector(const Point& x, const Point& y) const;    // G_0, r < 1
  double g_exterior_sector(const Point& x, const Point& y) const;  // r > 1
  double z0(const Point& x) const;    // (r^-lambda - r^lambda) Psi
  double zinf(const Point& x) const;  // (r^lambda - r^-lambda) Psi
};

// -- Capability facade ----------------------------------------------------------

/// Bundle of the model-problem solutions available for a given domain; built
/// once, immutable, concurrently callable.
class ModelKernelSet {
 public:
  static ModelKernelSet for_domain(const DomainSpec& spec,
                                   PsiNormalization norm = PsiNormalization::L2);

  int dim() const { return dim_; }
  double green(const Point& x, const Point& y) const;
  double regular_part(const Point& x, const Point& y) const;
  bool has_strip() const { return strip_ != nullptr; }
  bool has_sector() const { return sector_ != nullptr; }
  const StripKernels& strip() const;
  const SectorKernels& sector() const;

 private:
  int dim_ = 2;
  std::shared_ptr<StripKernels> strip_;
  std::shared_ptr<SectorKernels> sector_;
};

}  // namespace greens
