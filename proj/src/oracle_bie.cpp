#include <Eigen/Dense>
#include <mutex>
#include <numbers>

#include "greens/oracle.hpp"

namespace greens {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Node {
  Point p;
  Point nrm;     // domain-outward normal
  double w;      // arclength weight
  double diag;   // double-layer diagonal limit (x''.n)/(2|x'|^2)
};

// d/dnu_q Phi(x - q) with Phi = -(2pi)^-1 log |.|
double dlp_kernel(const Point& x, const Node& q) {
  Point r = x - q.p;
  double r2 = norm2(r);
  return dot(r, q.nrm) / (kTwoPi * r2);
}

}  // namespace

struct BoundaryIntegralGreen::Impl {
  std::vector<Node> nodes;
  std::vector<std::pair<int, int>> curve_ranges;  // [begin, end) per curve
  std::vector<Point> charge_centers;              // one per hole
  int m = 0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  Eigen::MatrixXd A;

  mutable std::mutex cache_mutex;
  mutable std::vector<std::pair<Point, Eigen::VectorXd>> cache;
  mutable double worst_residual = 0.0;

  void assemble(const DomainSpec& spec, int panels) {
    m = panels;
    std::vector<BoundaryCurve> curves;
    if (spec.is<PerturbedDisk>()) {
      BoundaryId outer{spec.as<PerturbedDisk>().epsilon > 0 ? BoundaryKind::Perturbed
                                                            : BoundaryKind::Outer,
                       0};
      curves.push_back(boundary_curve(spec, outer));
    } else if (spec.is<DiskWithHole>()) {
      curves.push_back(boundary_curve(spec, {BoundaryKind::Outer, 0}));
      curves.push_back(boundary_curve(spec, {BoundaryKind::Hole, 0}));
      charge_centers.push_back(spec.as<DiskWithHole>().center);
    } else {
      fail(Err::InvalidConfig, "boundary-integral oracle supports planar Dirichlet domains");
    }

    for (const auto& c : curves) {
      int begin = (int)nodes.size();
      double h = kTwoPi / m;
      for (int i = 0; i < m; ++i) {
        double t = i * h;
        Node nd;
        nd.p = c.pos(t);
        nd.nrm = c.unit_normal(t);
        Point d1 = c.dpos(t), d2 = c.ddpos(t);
        nd.w = norm(d1) * h;
        nd.diag = dot(d2, nd.nrm) / (2.0 * norm2(d1));
        nodes.push_back(nd);
      }
      curve_ranges.emplace_back(begin, (int)nodes.size());
    }

    int n = (int)nodes.size();
    int nc = (int)charge_centers.size();
    A = Eigen::MatrixXd::Zero(n + nc, n + nc);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double k = (i == j) ? nodes[i].diag / kTwoPi : dlp_kernel(nodes[i].p, nodes[j]);
        A(i, j) = k * nodes[j].w;
      }
      A(i, i) += -0.5;
      for (int h = 0; h < nc; ++h)
        A(i, n + h) = -std::log(dist(nodes[i].p, charge_centers[h])) / kTwoPi;
    }
    // closure: total density on each hole curve vanishes
    for (int h = 0; h < nc; ++h) {
      auto [b, e] = curve_ranges[h + 1];
      for (int j = b; j < e; ++j) A(n + h, j) = nodes[j].w;
    }
    lu.compute(A);
  }

  Eigen::VectorXd solve_for(const Point& y) const {
    {
      std::lock_guard<std::mutex> lk(cache_mutex);
      for (const auto& [py, s] : cache)
        if (dist(py, y) == 0.0) return s;
    }
    int n = (int)nodes.size();
    int nc = (int)charge_centers.size();
    Eigen::VectorXd rhs(n + nc);
    for (int i = 0; i < n; ++i) rhs(i) = std::log(dist(nodes[i].p, y)) / kTwoPi;  // -Phi
    for (int h = 0; h < nc; ++h) rhs(n + h) = 0.0;
    Eigen::VectorXd sig = lu.solve(rhs);
    double res = (A * sig - rhs).lpNorm<Eigen::Infinity>();
    if (res > 1e-9) fail(Err::IllConditioned, "Nystrom residual " + std::to_string(res));
    {
      std::lock_guard<std::mutex> lk(cache_mutex);
      worst_residual = std::max(worst_residual, res);
      if (cache.size() >= 4) cache.erase(cache.begin());
      cache.emplace_back(y, sig);
    }
    return sig;
  }

  double eval(const Point& x, const Point& y) const {
    Eigen::VectorXd sig = solve_for(y);
    int n = (int)nodes.size();
    double u = 0.0;
    for (int j = 0; j < n; ++j) u += dlp_kernel(x, nodes[j]) * nodes[j].w * sig(j);
    for (size_t h = 0; h < charge_centers.size(); ++h)
      u += sig(n + (int)h) * (-std::log(dist(x, charge_centers[h])) / kTwoPi);
    return -std::log(dist(x, y)) / kTwoPi + u;
  }
};

BoundaryIntegralGreen::BoundaryIntegralGreen(const DomainSpec& spec, int panels)
    : impl_(std::make_unique<Impl>()) {
  if (panels < 32) fail(Err::InvalidConfig, "BoundaryIntegralGreen: panels < 32");
  impl_->assemble(spec, panels);
}

BoundaryIntegralGreen::~BoundaryIntegralGreen() = default;
BoundaryIntegralGreen::BoundaryIntegralGreen(BoundaryIntegralGreen&&) noexcept = default;

double BoundaryIntegralGreen::operator()(const Point& x, const Point& y) const {
  if (dist(x, y) == 0.0) fail(Err::Singular, "BoundaryIntegralGreen: x == y");
  return impl_->eval(x, y);
}

double BoundaryIntegralGreen::residual() const { return impl_->worst_residual; }

int BoundaryIntegralGreen::panels() const { return impl_->m; }

}  // namespace greens
