#include "nullwave/profiles.hpp"

#include <cmath>
#include <sstream>

namespace nullwave {

double RadialProfile::value(double r) const {
  if (is_zero()) return 0.0;
  const double s = (r - center) / width;
  if (std::abs(s) >= 1.0) return 0.0;
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::bump: {
      const double d = 1.0 - s * s;
      return amplitude * std::exp(-s * s / d);
    }
    case Kind::polybump: {
      const double d = 1.0 - s * s;
      return amplitude * std::pow(d, power);
    }
    case Kind::gaussian: {
      const double z = decay * s;
      return amplitude * std::exp(-z * z);
    }
  }
  return 0.0;
}

double RadialProfile::deriv(double r) const {
  if (is_zero()) return 0.0;
  const double s = (r - center) / width;
  if (std::abs(s) >= 1.0) return 0.0;
  const double ds = 1.0 / width;
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::bump: {
      // d/ds exp(-s^2/(1-s^2)) = exp(...) * (-2s/(1-s^2)^2)
      const double d = 1.0 - s * s;
      return amplitude * std::exp(-s * s / d) * (-2.0 * s / (d * d)) * ds;
    }
    case Kind::polybump: {
      const double d = 1.0 - s * s;
      return amplitude * power * std::pow(d, power - 1) * (-2.0 * s) * ds;
    }
    case Kind::gaussian: {
      const double z = decay * s;
      return amplitude * std::exp(-z * z) * (-2.0 * z * decay) * ds;
    }
  }
  return 0.0;
}

std::vector<double> RadialProfile::breakpoints() const {
  if (is_zero()) return {};
  return {center - width, center + width};
}

std::string RadialProfile::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::zero: return "zero";
    case Kind::bump: os << "bump"; break;
    case Kind::polybump: os << "polybump(p=" << power << ")"; break;
    case Kind::gaussian: os << "gaussian(decay=" << decay << ")"; break;
  }
  os << " amp=" << amplitude << " center=" << center << " width=" << width;
  return os.str();
}

double Profile3::value(const Vec3& x) const {
  Vec3 d{x[0] - center[0], x[1] - center[1], x[2] - center[2]};
  return radial.value(norm3(d));
}

Vec3 Profile3::gradient(const Vec3& x) const {
  Vec3 d{x[0] - center[0], x[1] - center[1], x[2] - center[2]};
  const double r = norm3(d);
  if (r < 1e-14) return {0.0, 0.0, 0.0};
  const double g = radial.deriv(r) / r;
  return {g * d[0], g * d[1], g * d[2]};
}

}  // namespace nullwave
