#pragma once

#include <functional>
#include <vector>

#include "nullwave/profiles.hpp"

namespace nullwave {

// Gauss-Legendre rule on [-1,1].  Nodes by Newton iteration on P_n; good to
// ~1e-15 for n up to a few hundred.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
  static const GaussLegendre& cached(int n);  // memoized per order
};

// Integral of f over [a,b] with a fixed-order rule mapped to the interval.
double integrate_gl(const std::function<double(double)>& f, double a, double b, int order);

// Integral over [a,b] split at the given breakpoints, then at unit-length
// panels, fixed order per panel.  Exact to roundoff for piecewise
// polynomials of degree < 2*order between breakpoints; spectrally accurate
// for smooth pieces.
double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& breakpoints, int order = 24);

// Quadrature on the unit sphere: product of Gauss-Legendre in cos(theta)
// and a uniform trapezoid in azimuth.  Integrates spherical harmonics
// exactly up to `degree`.  Weights sum to 4*pi.
struct SphereQuadrature {
  std::vector<Vec3> nodes;
  std::vector<double> weights;
  int degree = 0;

  static SphereQuadrature product_rule(int degree);

  // sum_m w_m f(nodes[m]); fixed-order serial reduction
  double integrate(const std::function<double(const Vec3&)>& f) const;
};

}  // namespace nullwave
