#pragma once

#include <map>
#include <memory>
#include <string>

#include "greens/geometry.hpp"
#include "greens/model_kernels.hpp"

namespace greens {

/// One kernel evaluation with per-term introspection. `value` is the exact
/// sum of `terms`.
struct KernelEval {
  double value = 0.0;
  std::map<std::string, double> terms;
  std::string formula;
  Point x, y;
  double eps = 0.0;

  static KernelEval assemble(std::string formula, const Point& x, const Point& y, double eps,
                             std::map<std::string, double> terms);
};

struct QuadOptions {
  int m_start = 512;
  int m_max = 8192;
  double tol = 1e-8;  // doubling must move the integral by less than this
};

// -- Regular perturbation (outer boundary moved inward by eps*delta) ----------

/// Classical two-term formula: G - eps * int dG/dnu dG/dnu delta ds. The
/// boundary weight is the true normal distance to the perturbed curve divided
/// by eps, so the formula hypothesis holds without an O(eps^2) modelling gap.
KernelEval hadamard_classical(const PerturbedDisk& d, const Point& x, const Point& y,
                              const QuadOptions& q = {});

/// Classical formula plus the two boundary-layer corrections; valid for
/// points within distance d0 of the outer boundary.
KernelEval hadamard_uniform(const PerturbedDisk& d, const Point& x, const Point& y,
                            double d0 = 0.3, const QuadOptions& q = {});

/// Shared per-geometry state (boundary distance table) for sweep-scale use.
class HadamardEvaluator {
 public:
  explicit HadamardEvaluator(const PerturbedDisk& d, const QuadOptions& q = {});
  ~HadamardEvaluator();
  HadamardEvaluator(HadamardEvaluator&&) noexcept;

  KernelEval classical(const Point& x, const Point& y) const;
  KernelEval uniform(const Point& x, const Point& y, double d0 = 0.3) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// -- Singular perturbations ----------------------------------------------------

KernelEval dirichlet_hole_3d(const BallWithHole& d, const Point& x, const Point& y);
KernelEval dirichlet_hole_2d(const DiskWithHole& d, const Point& x, const Point& y);

/// Simplified forms valid on constrained point sets.
KernelEval simplified_far(const DomainSpec& spec, const Point& x, const Point& y);
KernelEval simplified_near(const DomainSpec& spec, const Point& x, const Point& y);

KernelEval mixed_outer_dirichlet(const DiskWithHole& d, const Point& x, const Point& y);
KernelEval mixed_outer_neumann(const DiskWithHole& d, const Point& x, const Point& y);

KernelEval thin_rod(const ThinRodStrip& d, const Point& x, const Point& y);

KernelEval truncated_sector(const TruncatedSector& d, const Point& x, const Point& y,
                            PsiNormalization norm = PsiNormalization::L2);

enum class CrossTermMode { Ordered, Doubled };

KernelEval multi_inclusion_3d(const BallWithHoles& d, const Point& x, const Point& y,
                              CrossTermMode mode = CrossTermMode::Ordered);

// -- Dispatch -------------------------------------------------------------------

struct EvalOptions {
  double d0 = 0.3;
  PsiNormalization psi_norm = PsiNormalization::L2;
  CrossTermMode cross_mode = CrossTermMode::Ordered;
  QuadOptions quad;
};

bool formula_known(const std::string& id);

/// Evaluate a formula id ("hadamard-classical", "dirichlet-hole-2d", ...,
/// "disk-green", "ball-green") against a compatible domain.
KernelEval evaluate_formula(const std::string& id, const DomainSpec& spec, const Point& x,
                            const Point& y, const EvalOptions& opt = {});

}  // namespace greens
