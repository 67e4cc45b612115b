#pragma once

#include <functional>
#include <vector>

#include "nullwave/profiles.hpp"
#include "nullwave/quadrature.hpp"

// Free-space solution operators for a single wave speed c:
//   k0: Cauchy evolution by Kirchhoff spherical means
//   l0: Duhamel integral of a source, spherical means in space and
//       Gauss-Legendre in retarded time with adaptive node doubling
// plus the 1-d radial reduction used as an independent oracle.

namespace nullwave {

struct FreeData {
  Profile3 w0;   // initial value
  Profile3 w1;   // initial velocity
};

// u(t,x) = d_t[ t M_{ct} w0 ](x) + t M_{ct} w1 (x)
//        = M_{ct}[w0] + (ct/4pi) * sphere-mean of grad w0 . omega + t M_{ct}[w1]
double k0_solve(const FreeData& d, double c, double t, const Vec3& x,
                const SphereQuadrature& sq);

struct L0Result {
  double value = 0.0;
  double est_error = 0.0;   // last doubling difference
  int time_nodes = 0;
  bool converged = true;
};

// L0[g](t,x) = int_0^t (t-s) M_{c(t-s)}[g(s, .)](x) ds.
// Starts at nodes_per_unit Gauss-Legendre nodes per unit of integration
// time and doubles until two successive evaluations agree to rel_tol.
L0Result l0_solve(const std::function<double(double, const Vec3&)>& g, double c, double t,
                  const Vec3& x, const SphereQuadrature& sq, int nodes_per_unit = 64,
                  double rel_tol = 1e-8, int max_doublings = 4);

// Radial reduction about the origin: with G(s) = s * p0(|s|),
//   r u(t,r) = (G(r+ct) + G(r-ct))/2 + (1/2c) int_{r-ct}^{r+ct} s p1(|s|) ds.
// The lower limit folds to |r-ct| because the integrand is odd.  Valid for
// r > 0; quadrature split at profile support edges keeps it at roundoff
// for piecewise-polynomial profiles.
double radial_free_solution(const RadialProfile& p0, const RadialProfile& p1, double c,
                            double t, double r);

// ========================= measured decay constant ========================

struct FreeDecaySample {
  double t = 0.0, r = 0.0;
  double value = 0.0;      // |K0[w0]|
  double weighted = 0.0;   // <t+r> phi_{rho-1}(ct, r) |K0|
};

struct FreeDecayReport {
  double rho = 1.0;
  double data_norm = 0.0;       // B_{rho+1,0}
  double sup_weighted = 0.0;
  double constant = 0.0;        // sup_weighted / data_norm
  std::vector<FreeDecaySample> samples;
};

// Empirical constant in the free-field decay bound for radial data,
// evaluated through the radial oracle on the given (t, r) sample set.
FreeDecayReport measure_free_decay(const RadialProfile& phi, const RadialProfile& psi, double c,
                                   double rho, const std::vector<std::pair<double, double>>& samples);

}  // namespace nullwave
