#include "nullwave/freefield.hpp"

#include <cmath>
#include <numbers>

#include "nullwave/weights.hpp"

namespace nullwave {

// ============================ Kirchhoff ===================================

double k0_solve(const FreeData& d, double c, double t, const Vec3& x,
                const SphereQuadrature& sq) {
  if (t == 0.0) return d.w0.value(x);
  const double R = c * t;
  double mean_w0 = 0.0, mean_gw0 = 0.0, mean_w1 = 0.0;
  for (std::size_t m = 0; m < sq.nodes.size(); ++m) {
    const Vec3& om = sq.nodes[m];
    const double w = sq.weights[m];
    const Vec3 y{x[0] + R * om[0], x[1] + R * om[1], x[2] + R * om[2]};
    mean_w0 += w * d.w0.value(y);
    const Vec3 g = d.w0.gradient(y);
    mean_gw0 += w * (g[0] * om[0] + g[1] * om[1] + g[2] * om[2]);
    mean_w1 += w * d.w1.value(y);
  }
  const double inv4pi = 1.0 / (4.0 * std::numbers::pi);
  return inv4pi * (mean_w0 + R * mean_gw0 + t * mean_w1);
}

// ============================== Duhamel ===================================

namespace {

double l0_fixed(const std::function<double(double, const Vec3&)>& g, double c, double t,
                const Vec3& x, const SphereQuadrature& sq, int n_time) {
  // int_0^t (t-s) M_{c(t-s)}[g(s,.)](x) ds
  const auto& gl = GaussLegendre::cached(n_time);
  const double inv4pi = 1.0 / (4.0 * std::numbers::pi);
  double total = 0.0;
  for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
    const double s = 0.5 * t * (gl.nodes[q] + 1.0);
    const double w = 0.5 * t * gl.weights[q];
    const double R = c * (t - s);
    double mean = 0.0;
    for (std::size_t m = 0; m < sq.nodes.size(); ++m) {
      const Vec3& om = sq.nodes[m];
      mean += sq.weights[m] * g(s, {x[0] + R * om[0], x[1] + R * om[1], x[2] + R * om[2]});
    }
    total += w * (t - s) * inv4pi * mean;
  }
  return total;
}

}  // namespace

L0Result l0_solve(const std::function<double(double, const Vec3&)>& g, double c, double t,
                  const Vec3& x, const SphereQuadrature& sq, int nodes_per_unit, double rel_tol,
                  int max_doublings) {
  L0Result res;
  if (t <= 0.0) return res;
  int n = std::max(8, static_cast<int>(std::ceil(nodes_per_unit * t)));
  double prev = l0_fixed(g, c, t, x, sq, n);
  for (int d = 0; d < max_doublings; ++d) {
    n *= 2;
    const double cur = l0_fixed(g, c, t, x, sq, n);
    res.est_error = std::abs(cur - prev);
    res.value = cur;
    res.time_nodes = n;
    if (res.est_error <= rel_tol * std::max(1.0, std::abs(cur))) return res;
    prev = cur;
  }
  res.converged = false;
  return res;
}

// =========================== radial reduction =============================

double radial_free_solution(const RadialProfile& p0, const RadialProfile& p1, double c,
                            double t, double r) {
  const double a = r - c * t, b = r + c * t;
  double U = 0.0;
  if (!p0.is_zero()) {
    U += 0.5 * (b * p0.value(std::abs(b)) + a * p0.value(std::abs(a)));
  }
  if (!p1.is_zero()) {
    const double lo = std::abs(a);
    if (b > lo) {
      const double I = integrate_piecewise([&](double s) { return s * p1.value(s); }, lo, b,
                                           p1.breakpoints());
      U += I / (2.0 * c);
    }
  }
  return U / r;
}

// ======================== measured decay constant =========================

FreeDecayReport measure_free_decay(const RadialProfile& phi, const RadialProfile& psi, double c,
                                   double rho,
                                   const std::vector<std::pair<double, double>>& samples) {
  FreeDecayReport rep;
  rep.rho = rho;
  rep.data_norm = data_norm_B(phi, psi, rho + 1.0, 0);
  for (const auto& [t, r] : samples) {
    FreeDecaySample s;
    s.t = t;
    s.r = r;
    s.value = std::abs(radial_free_solution(phi, psi, c, t, r));
    s.weighted = bracket(t + r) * phi_weight(rho - 1.0, c * t, r) * s.value;
    rep.sup_weighted = std::max(rep.sup_weighted, s.weighted);
    rep.samples.push_back(s);
  }
  rep.constant = rep.data_norm > 0.0 ? rep.sup_weighted / rep.data_norm : 0.0;
  return rep;
}

}  // namespace nullwave
