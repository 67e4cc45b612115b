#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

// Analytic radial data profiles.  Every profile is compactly supported and
// reports its support edges so quadratures can split at the kinks.

namespace nullwave {

using Vec3 = std::array<double, 3>;

struct RadialProfile {
  enum class Kind {
    zero,
    bump,       // amplitude * exp(-s^2/(1-s^2)), s=(r-center)/width, smooth
    polybump,   // amplitude * (1-s^2)^power on |s|<1, C^{power-1}
    gaussian,   // amplitude * exp(-(decay*s)^2), truncated at |s|=1
  };

  Kind kind = Kind::zero;
  double amplitude = 0.0;
  double center = 0.0;
  double width = 1.0;
  int power = 4;        // polybump only
  double decay = 3.0;   // gaussian only

  double value(double r) const;
  double deriv(double r) const;

  bool operator==(const RadialProfile&) const = default;

  bool is_zero() const { return kind == Kind::zero || amplitude == 0.0; }
  double support_lo() const { return is_zero() ? 0.0 : center - width; }
  double support_hi() const { return is_zero() ? 0.0 : center + width; }

  // Support edges; integrands built from the profile are smooth between
  // consecutive breakpoints.
  std::vector<double> breakpoints() const;

  static RadialProfile make_zero() { return {}; }

  std::string describe() const;
};

// Radial profile translated to a 3-d center; used for Cartesian data and
// for the free-field evaluators.
struct Profile3 {
  RadialProfile radial;
  Vec3 center{0.0, 0.0, 0.0};

  double value(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const;
};

inline double norm3(const Vec3& x) {
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

}  // namespace nullwave
