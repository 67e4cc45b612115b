#include "nullwave/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nullwave {

double phi_weight(double nu, double t, double r) {
  if (nu < 0.0) return std::pow(bracket(t + r), nu);
  if (nu > 0.0) return std::pow(bracket(t - r), nu);
  return 1.0 / std::log(2.0 + bracket(t + r) / bracket(t - r));
}

namespace {

double min_bracket(double t, double r, const std::vector<double>& speeds, bool exclude,
                   double c_excluded) {
  double m = bracket(-r);  // stationary speed c_0 = 0
  bool any = !(exclude && c_excluded == 0.0);
  if (exclude && c_excluded == 0.0) m = std::numeric_limits<double>::infinity();
  for (double cj : speeds) {
    if (exclude && cj == c_excluded) continue;
    m = std::min(m, bracket(cj * t - r));
    any = true;
  }
  if (!any) throw std::invalid_argument("weight_wc: exclusion removed every speed");
  return m;
}

}  // namespace

double weight_w(double nu, double kappa, double t, double r, const std::vector<double>& speeds) {
  return std::pow(bracket(t + r), nu) * std::pow(min_bracket(t, r, speeds, false, 0.0), kappa);
}

double weight_wc(double nu, double kappa, double c, double t, double r,
                 const std::vector<double>& speeds) {
  return std::pow(bracket(t + r), nu) * std::pow(min_bracket(t, r, speeds, true, c), kappa);
}

double evaluate_weight(const WeightSelector& w, double t, double r,
                       const std::vector<double>& speeds) {
  switch (w.kind) {
    case WeightSelector::Kind::phi: return phi_weight(w.nu, t, r);
    case WeightSelector::Kind::w: return weight_w(w.nu, w.kappa, t, r, speeds);
    case WeightSelector::Kind::wc: return weight_wc(w.nu, w.kappa, w.speed, t, r, speeds);
  }
  return 0.0;
}

// ========================= initial-data norm ==============================

namespace {

// centered stencils up to the fourth derivative; O(h^2)
double profile_deriv_fd(const RadialProfile& p, double r, int m, double h) {
  auto f = [&](double x) { return p.value(x); };
  switch (m) {
    case 0: return f(r);
    case 1: return p.deriv(r);
    case 2: return (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
    case 3: return (f(r + 2 * h) - 2 * f(r + h) + 2 * f(r - h) - f(r - 2 * h)) / (2 * h * h * h);
    case 4:
      return (f(r + 2 * h) - 4 * f(r + h) + 6 * f(r) - 4 * f(r - h) + f(r - 2 * h)) /
             (h * h * h * h);
    default: throw std::invalid_argument("data norm limited to four derivatives");
  }
}

double jet_sum(const RadialProfile& p, double r, int k, double h) {
  double s = 0.0;
  for (int m = 0; m <= k; ++m) s += std::abs(profile_deriv_fd(p, r, m, h));
  return s;
}

}  // namespace

double data_norm_B(const RadialProfile& phi, const RadialProfile& psi, double rho, int k,
                   double h) {
  // sample just past the support so the sup is not clipped
  double lo = 0.0, hi = 1.0;
  for (const RadialProfile* p : {&phi, &psi}) {
    if (p->is_zero()) continue;
    lo = std::min(lo, p->support_lo() - 1.0);
    hi = std::max(hi, p->support_hi() + 1.0);
  }
  lo = std::max(lo, 0.0);
  const int samples = std::max(64, static_cast<int>((hi - lo) / std::max(h, 1e-4)));
  const double step = (hi - lo) / samples;
  double sup = 0.0;
  for (int s = 0; s <= samples; ++s) {
    const double r = lo + s * step;
    // |phi|_k + |grad phi|_k + |psi|_k; the gradient contributes one extra
    // derivative order of phi
    double v = jet_sum(phi, r, k, h);
    for (int m = 1; m <= k + 1; ++m) v += std::abs(profile_deriv_fd(phi, r, m, h));
    v += jet_sum(psi, r, k, h);
    sup = std::max(sup, std::pow(bracket(r), rho) * v);
  }
  return sup;
}

double data_norm_B_system(const InitialData& data, const WaveSystem& sys, double rho, int k,
                          double h) {
  double total = 0.0;
  for (int i = 0; i < static_cast<int>(data.components.size()); ++i) {
    const auto& c = data.components[i];
    RadialProfile psi = c.psi;
    if (c.psi_outgoing) {
      // outgoing pairs differentiate phi; bound by the FD jet of phi scaled
      // by the speed, folded in through data_norm_B of (phi, zero) with one
      // extra order
      psi = RadialProfile::make_zero();
      total += sys.speeds[i] * data_norm_B(c.phi, psi, rho, k + 1, h);
      continue;
    }
    total += data_norm_B(c.phi, psi, rho, k, h);
  }
  return total * data.epsilon;
}

// ======================== monitor weight factors ==========================

MonitorWeights monitor_weights(double c, double t, double r) {
  MonitorWeights w;
  w.amplitude = bracket(t + r) * phi_weight(0.0, c * t, r);
  w.gradient = bracket(r) * bracket(c * t - r);
  w.outgoing = bracket(r) * bracket(t + r) / std::log(2.0 + t + r);
  return w;
}

}  // namespace nullwave
