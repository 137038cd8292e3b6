#include <Eigen/Dense>
#include <mutex>
#include <numbers>

#include "greens/oracle.hpp"

namespace greens {

namespace {
constexpr double kPi = std::numbers::pi;

// Local image formula for the unit-ball Dirichlet kernel; the oracle stays
// independent of the model-kernel module.
double ball_green_local(const Point& x, const Point& y) {
  double s = std::sqrt(std::max(0.0, norm2(x) * norm2(y) - 2.0 * dot(x, y) + 1.0));
  return (1.0 / dist(x, y) - 1.0 / s) / (4.0 * kPi);
}

// Fully normalized real spherical harmonics, all degrees l <= L, at the unit
// direction u. Output size (L+1)^2, index l*l + l + m.
void real_harmonics(int L, const Point& u, std::vector<double>& out) {
  out.assign((L + 1) * (L + 1), 0.0);
  double ct = std::clamp(u.z(), -1.0, 1.0);
  double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  double cphi = 1.0, sphi = 0.0;
  double rho = std::hypot(u.x(), u.y());
  if (rho > 0) {
    cphi = u.x() / rho;
    sphi = u.y() / rho;
  }
  // recurrences on normalized associated Legendre values
  std::vector<double> cm(L + 1), sm(L + 1);
  cm[0] = 1.0;
  sm[0] = 0.0;
  for (int m = 1; m <= L; ++m) {
    cm[m] = cm[m - 1] * cphi - sm[m - 1] * sphi;
    sm[m] = sm[m - 1] * cphi + cm[m - 1] * sphi;
  }
  auto store = [&](int l, int m, double p) {
    int base = l * l + l;
    if (m == 0) {
      out[base] = p;
    } else {
      double f = std::sqrt(2.0) * p;
      out[base + m] = f * cm[m];
      out[base - m] = f * sm[m];
    }
  };
  double p_mm = std::sqrt(1.0 / (4.0 * kPi));
  for (int m = 0; m <= L; ++m) {
    if (m > 0) p_mm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st;
    store(m, m, p_mm);
    double plm2 = 0.0, plm1 = p_mm;
    for (int l = m + 1; l <= L; ++l) {
      double a = std::sqrt((4.0 * l * l - 1.0) / ((double)l * l - (double)m * m));
      double b = std::sqrt((((l - 1.0) * (l - 1.0) - m * m)) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      double p = a * (ct * plm1 - b * plm2);
      store(l, m, p);
      plm2 = plm1;
      plm1 = p;
    }
  }
}

std::vector<Point> fibonacci_sphere(int n, double rot) {
  std::vector<Point> out;
  const double ga = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double t = ga * i + rot;
    out.emplace_back(r * std::cos(t), r * std::sin(t), z);
  }
  return out;
}

}  // namespace

struct SphereSuperpositionGreen::Impl {
  BallWithHoles spec;
  int l_out = 12;
  int l_hole = 12;
  std::vector<Point> colloc;         // collocation points on all boundaries
  std::vector<int> colloc_surface;   // -1 outer, else hole index
  std::vector<Point> probes;
  std::vector<int> probe_surface;
  Eigen::MatrixXd A;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr;

  mutable std::mutex cache_mutex;
  mutable std::vector<std::pair<Point, Eigen::VectorXd>> cache;

  int n_cols() const {
    return (l_out + 1) * (l_out + 1) +
           (int)spec.centers.size() * (l_hole + 1) * (l_hole + 1);
  }

  void basis_row(const Point& p, double* row) const {
    std::vector<double> y;
    double r = norm(p);
    real_harmonics(l_out, r > 0 ? p / r : Point(0, 0, 1), y);
    int col = 0;
    double rl = 1.0;
    for (int l = 0; l <= l_out; ++l) {
      for (int m = -l; m <= l; ++m) row[col++] = rl * y[l * l + l + m];
      rl *= r;
    }
    for (const auto& c : spec.centers) {
      Point q = p - c;
      double s = norm(q);
      real_harmonics(l_hole, q / s, y);
      double f = spec.epsilon / s;  // (eps/s)^{l+1} keeps columns O(1)
      double fl = f;
      for (int l = 0; l <= l_hole; ++l) {
        for (int m = -l; m <= l; ++m) row[col++] = fl * y[l * l + l + m];
        fl *= f;
      }
    }
  }

  void build(double tol) {
    double eps = spec.epsilon;
    double clearance = 0.35;  // assumed source clearance; misfit is measured per y
    double hole_ratio = std::min(eps / clearance, 0.8);
    l_hole = std::clamp((int)std::ceil(std::log(tol) / std::log(hole_ratio)), 8, 26);
    double refl = 0.0;
    for (const auto& c : spec.centers) refl = std::max(refl, norm(c) + eps);
    refl = std::min(std::max(refl, 0.05), 0.8);
    l_out = std::clamp((int)std::ceil(std::log(tol) / std::log(refl)), 8, 26);

    int n_out = 2 * (l_out + 1) * (l_out + 1);
    int n_hol = 2 * (l_hole + 1) * (l_hole + 1);
    for (const auto& u : fibonacci_sphere(n_out, 0.0)) {
      colloc.push_back(u);
      colloc_surface.push_back(-1);
    }
    for (size_t h = 0; h < spec.centers.size(); ++h)
      for (const auto& u : fibonacci_sphere(n_hol, 0.3)) {
        colloc.push_back(spec.centers[h] + u * eps);
        colloc_surface.push_back((int)h);
      }
    for (const auto& u : fibonacci_sphere(n_out / 2 + 37, 1.1)) {
      probes.push_back(u);
      probe_surface.push_back(-1);
    }
    for (size_t h = 0; h < spec.centers.size(); ++h)
      for (const auto& u : fibonacci_sphere(n_hol / 2 + 41, 1.7)) {
        probes.push_back(spec.centers[h] + u * eps);
        probe_surface.push_back((int)h);
      }

    A.resize((int)colloc.size(), n_cols());
    std::vector<double> row(n_cols());
    for (size_t i = 0; i < colloc.size(); ++i) {
      basis_row(colloc[i], row.data());
      for (int j = 0; j < n_cols(); ++j) A((int)i, j) = row[j];
    }
    qr.compute(A);
  }

  // boundary data of the correction: 0 on the outer sphere, -G_ball on holes
  double data(const Point& p, int surface, const Point& y) const {
    return surface < 0 ? 0.0 : -ball_green_local(p, y);
  }

  Eigen::VectorXd coeffs_for(const Point& y) const {
    {
      std::lock_guard<std::mutex> lk(cache_mutex);
      for (const auto& [py, c] : cache)
        if (dist(py, y) == 0.0) return c;
    }
    Eigen::VectorXd rhs((int)colloc.size());
    for (size_t i = 0; i < colloc.size(); ++i)
      rhs((int)i) = data(colloc[i], colloc_surface[i], y);
    Eigen::VectorXd c = qr.solve(rhs);
    {
      std::lock_guard<std::mutex> lk(cache_mutex);
      if (cache.size() >= 4) cache.erase(cache.begin());
      cache.emplace_back(y, c);
    }
    return c;
  }

  double correction(const Point& x, const Eigen::VectorXd& c) const {
    std::vector<double> row(n_cols());
    basis_row(x, row.data());
    double v = 0.0;
    for (int j = 0; j < n_cols(); ++j) v += row[j] * c(j);
    return v;
  }
};

SphereSuperpositionGreen::SphereSuperpositionGreen(const BallWithHoles& spec, double basis_tol)
    : impl_(std::make_unique<Impl>()) {
  impl_->spec = spec;
  impl_->build(basis_tol);
}

SphereSuperpositionGreen::~SphereSuperpositionGreen() = default;
SphereSuperpositionGreen::SphereSuperpositionGreen(SphereSuperpositionGreen&&) noexcept = default;

double SphereSuperpositionGreen::operator()(const Point& x, const Point& y) const {
  if (dist(x, y) == 0.0) fail(Err::Singular, "SphereSuperpositionGreen: x == y");
  Eigen::VectorXd c = impl_->coeffs_for(y);
  return ball_green_local(x, y) + impl_->correction(x, c);
}

double SphereSuperpositionGreen::boundary_residual(const Point& y) const {
  Eigen::VectorXd c = impl_->coeffs_for(y);
  double worst = 0.0;
  for (size_t i = 0; i < impl_->probes.size(); ++i) {
    double misfit = impl_->correction(impl_->probes[i], c) -
                    impl_->data(impl_->probes[i], impl_->probe_surface[i], y);
    worst = std::max(worst, std::abs(misfit));
  }
  return worst;
}

}  // namespace greens
