#pragma once

#include <vector>

#include "nullwave/model.hpp"

// Space-time weight functions and the discrete weighted norms built from
// them.  All radial arguments are |x|; <y> denotes sqrt(1 + y^2).

namespace nullwave {

inline double bracket(double y) { return std::sqrt(1.0 + y * y); }

// phi_nu(t, r):
//   nu < 0 : <t + r>^nu
//   nu = 0 : 1 / log(2 + <t + r>/<t - r>)
//   nu > 0 : <t - r>^nu
// Callers measuring decay of a speed-c wave pass t already scaled by c.
double phi_weight(double nu, double t, double r);

// W_{nu,kappa}(t, r) = <t+r>^nu * (min_j <c_j t - r>)^kappa, with the
// stationary speed c_0 = 0 always in the minimum.
double weight_w(double nu, double kappa, double t, double r, const std::vector<double>& speeds);

// Variant excluding every c_j equal to c from the minimum (c_0 = 0 stays
// unless c == 0).  Throws when the exclusion empties the set.
double weight_wc(double nu, double kappa, double c, double t, double r,
                 const std::vector<double>& speeds);

double evaluate_weight(const WeightSelector& w, double t, double r,
                       const std::vector<double>& speeds);

// Running sup over sampled instants; the discrete stand-in for the
// sup_{(s,x), s <= t} norms.  Monotone by construction.
struct RunningSup {
  double value = 0.0;
  void absorb(double v) {
    if (v > value) value = v;
  }
};

// ==================== initial-data norm B_{rho,k} =========================

// B_{rho,k}[phi,psi] = sup_r <r>^rho (|phi|_k + |phi'|_k + |psi|_k) with
// |g|_k = sum_{m<=k} |d^m g / dr^m|.  Radial data has no rotational part,
// so the full vector-field sum collapses to radial derivatives; those are
// taken by centered differences at step h (second-order surrogate).
double data_norm_B(const RadialProfile& phi, const RadialProfile& psi, double rho, int k,
                   double h = 1e-3);

// All components of a data set, psi_outgoing resolved against the speeds.
double data_norm_B_system(const InitialData& data, const WaveSystem& sys, double rho, int k,
                          double h = 1e-3);

// ======================== monitor weight factors ==========================

// The three factors of the decay monitor for a speed-c component:
//   amplitude: <t+r> * phi_0(c t, r)            (multiplies |u|_{k+1})
//   gradient:  <r> <c t - r>                    (multiplies |du|_k)
//   outgoing:  <r> <t+r> / log(2 + t + r)       (multiplies |D_+ Z^a u|)
struct MonitorWeights {
  double amplitude = 0.0;
  double gradient = 0.0;
  double outgoing = 0.0;
};

MonitorWeights monitor_weights(double c, double t, double r);

}  // namespace nullwave
