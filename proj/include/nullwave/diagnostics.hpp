#pragma once

#include <string>
#include <vector>

#include "nullwave/model.hpp"

// Decay-rate measurement and inequality spot checks, all operating on
// plain sampled series so they can be driven by either solver or by
// oracle evaluations in tests.

namespace nullwave {

// ========================== least-squares fits ============================

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int n = 0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

enum class DecayModel { exponential, power, power_with_log };

struct DecayFit {
  DecayModel model = DecayModel::exponential;
  double t0 = 0.0, t1 = 0.0;
  double rate = 0.0;        // exponential: E ~ C exp(-rate t); power: y ~ C t^rate
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
  bool degenerate = false;  // empty window, zero data, or underflow
  std::string note;
};

// OLS of log E against t on [t0, t1]; samples below the underflow floor are
// dropped and a mostly-empty window is reported degenerate rather than
// fitted.  rate > 0 means decay.
DecayFit fit_local_energy_decay(const std::vector<double>& t, const std::vector<double>& energy,
                                double t0, double t1);

// ====================== pointwise decay surrogates ========================

// Exact weighted quantities of the pointwise estimates; eps scales out the
// data size.  The std0 log factor is log(1 + (1+ct+r)/(1+|ct-r|)), which
// equals log 2 at t = r = 0.
double std0_quantity(double c, double eps, double t, double r, double u_abs);
double std1_quantity(double c, double eps, double t, double r, double du_abs);
// <r> <t+r> |D+ u| / (eps log(2+t+r))
double dplus_quantity(double c, double eps, double t, double r, double dplus_abs);

struct BoundednessReport {
  std::vector<double> t;
  std::vector<double> running_sup;
  double growth_fraction = 0.0;   // over the second half of the window
  bool bounded = false;
};

// verdict: running sup grows by less than `frac` over the second half
BoundednessReport check_pointwise_decay(const std::vector<double>& t,
                                        const std::vector<double>& sup_series, double frac);

// ============================ ray decay fits ==============================

struct RaySample {
  double t = 0.0, r = 0.0;
  double dplus_abs = 0.0;
  double grad_abs = 0.0;
};

struct RayDecayReport {
  struct PerRay {
    double alpha_dplus = 0.0, alpha_grad = 0.0;
    double r2_dplus = 0.0, r2_grad = 0.0;
    int samples = 0;
    bool valid = false;
  };
  std::vector<PerRay> rays;
  // medians over valid rays
  double alpha_dplus = 0.0, alpha_grad = 0.0;
  double relative_exponent = 0.0;   // alpha_dplus - alpha_grad
  bool valid = false;
};

// Per ray: fits the log of <t+r>|D+ u|/log(2+t+r) and of <t+r>|du| against
// log<t+r>.  Samples smaller than 1e-13 of the ray maximum are discarded.
RayDecayReport fit_ray_decay(const std::vector<std::vector<RaySample>>& rays);

// =========================== lifespan sweeps ==============================

struct LifespanEntry {
  double eps = 0.0;
  double lifespan = 0.0;    // blow-up time when !survived
  bool survived = false;
  double max_amp = 0.0;
  std::string error;        // nonempty if the run failed outright
};

struct LifespanSweep {
  std::vector<LifespanEntry> entries;
  LinearFit fit;            // log T against 1/eps over blow-up entries
  bool fit_valid = false;
  bool strictly_decreasing = false;  // T decreasing as eps increases
  std::string note;
  std::string to_csv() const;
};

// Regression part of the sweep; survived entries and eps = 0 are excluded,
// and fewer than 3 blow-up points refuses the fit.
LifespanSweep fit_lifespan_curve(const std::vector<LifespanEntry>& entries);

// ====================== Sobolev-type inequality check =====================

struct KSEntry {
  std::string name;
  double lhs = 0.0;     // sup <|x|> |phi|
  double rhs = 0.0;     // sum over words of length <= 2 in the six spatial
                        // invariant fields of the discrete L2(Omega) norm
  double ratio = 0.0;
};

struct KSReport {
  std::vector<KSEntry> entries;
  double max_ratio = 0.0;
  double scale_drift = 0.0;   // relative ratio change under amplitude x10
  std::string to_csv() const;
};

// Built-in family of truncated Gaussian bumps at several widths and
// centers, sampled on per-function grids over their supports.
KSReport check_klainerman_sobolev();

}  // namespace nullwave
