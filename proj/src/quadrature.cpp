#include "nullwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace nullwave {

// ======================== Gauss-Legendre on [-1,1] ========================

namespace {

GaussLegendre compute_gl(int n) {
  if (n < 1) throw std::invalid_argument("gauss-legendre order must be >= 1");
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // roots come in +/- pairs; solve for the upper half
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // recurrence: (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussLegendre& GaussLegendre::cached(int n) {
  static std::map<int, GaussLegendre> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gl(n)).first;
  return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int order) {
  const auto& rule = GaussLegendre::cached(order);
  const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + hw * rule.nodes[i]);
  return hw * sum;
}

double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& breakpoints, int order) {
  if (b <= a) return 0.0;
  std::vector<double> cuts{a, b};
  for (double c : breakpoints)
    if (c > a && c < b) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    // unit-length panels keep the per-panel error spectral for smooth f
    const int panels = std::max(1, static_cast<int>(std::ceil(hi - lo)));
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p)
      total += integrate_gl(f, lo + p * h, lo + (p + 1) * h, order);
  }
  return total;
}

// ============================ sphere quadrature ===========================

SphereQuadrature SphereQuadrature::product_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("sphere quadrature degree must be >= 0");
  const int n_polar = degree / 2 + 1;   // GL exact through degree 2n-1 in cos(theta)
  const int n_az = degree + 1;          // trapezoid exact for modes |k| <= n-1
  const auto& gl = GaussLegendre::cached(n_polar);

  SphereQuadrature q;
  q.degree = degree;
  q.nodes.reserve(static_cast<std::size_t>(n_polar) * n_az);
  q.weights.reserve(q.nodes.capacity());
  const double waz = 2.0 * std::numbers::pi / n_az;
  for (int i = 0; i < n_polar; ++i) {
    const double mu = gl.nodes[i];             // cos(theta)
    const double s = std::sqrt(1.0 - mu * mu);
    for (int j = 0; j < n_az; ++j) {
      const double ph = waz * j;
      q.nodes.push_back({s * std::cos(ph), s * std::sin(ph), mu});
      q.weights.push_back(gl.weights[i] * waz);
    }
  }
  return q;
}

double SphereQuadrature::integrate(const std::function<double(const Vec3&)>& f) const {
  double sum = 0.0;
  for (std::size_t m = 0; m < nodes.size(); ++m) sum += weights[m] * f(nodes[m]);
  return sum;
}

}  // namespace nullwave
