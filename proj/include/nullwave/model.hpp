#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nullwave/profiles.hpp"
#include "nullwave/rational.hpp"

// Problem description shared by every other module: the system of wave
// operators, the nonlinear source, initial data, grid, and diagnostics
// plan.  Component indices are 0-based internally; the config surface is
// 1-based.  Derivative slots are 0 = d/dt, 1..3 = d/dx_a.

namespace nullwave {

// ============================== system ====================================

struct WaveSystem {
  std::vector<double> speeds;              // c_i > 0
  std::vector<Rational> speeds_exact;      // same values, exact

  int size() const { return static_cast<int>(speeds.size()); }
  double max_speed() const;
  // components sharing the speed of component i (exact comparison)
  bool same_speed(int i, int j) const { return speeds_exact[i] == speeds_exact[j]; }
  bool operator==(const WaveSystem&) const = default;
};

// ============================ nonlinearity ================================

// coeff * Q0(u_j, u_k; c_i) in the i-th equation; requires c_j = c_k = c_i
struct NullQ0Term {
  int i = 0, j = 0, k = 0;
  double coeff = 0.0;
  Rational coeff_exact;
  bool operator==(const NullQ0Term&) const = default;
};

// coeff * Q_ab(u_j, u_k) with 0 <= a < b <= 3; requires c_j = c_k = c_i
struct NullQabTerm {
  int i = 0, j = 0, k = 0, a = 0, b = 1;
  double coeff = 0.0;
  Rational coeff_exact;
  bool operator==(const NullQabTerm&) const = default;
};

// coeff * (d_a u_j)(d_b u_k).  Stored on canonical slots: j < k with a, b
// free, or j == k with a <= b.  The same monomial declared twice merges.
struct QuadTerm {
  int i = 0, j = 0, k = 0, a = 0, b = 0;
  double coeff = 0.0;
  Rational coeff_exact;
  bool operator==(const QuadTerm&) const = default;
};

// one factor of a cubic monomial: deriv = -1 means the undifferentiated u
struct CubicFactor {
  int comp = 0;
  int deriv = -1;
  bool operator==(const CubicFactor&) const = default;
};

struct CubicTerm {
  int i = 0;
  std::array<CubicFactor, 3> factors{};
  double coeff = 0.0;
  bool operator==(const CubicTerm&) const = default;
};

struct NonlinearitySpec {
  std::vector<NullQ0Term> null_q0;
  std::vector<NullQabTerm> null_qab;
  std::vector<QuadTerm> general_quadratic;   // canonical, merged
  std::vector<CubicTerm> cubic;

  // Folds (j,k,a,b) onto the canonical slot and merges with an existing
  // entry if present.  (d_a u_j)(d_b u_k) and (d_b u_k)(d_a u_j) are the
  // same monomial.
  void add_quadratic(int i, int j, int k, int a, int b, double coeff, const Rational& exact);

  bool empty() const {
    return null_q0.empty() && null_qab.empty() && general_quadratic.empty() && cubic.empty();
  }
  bool operator==(const NonlinearitySpec&) const = default;
};

// ================================ data ====================================

struct InitialData {
  struct Component {
    RadialProfile phi;                  // u_i(0) = eps * phi
    RadialProfile psi;                  // d_t u_i(0) = eps * psi
    bool psi_outgoing = false;          // psi derived from phi: d_t(r u) = -c d_r(r u)
    bool operator==(const Component&) const = default;
  };

  double epsilon = 0.1;
  std::vector<Component> components;
  Vec3 offset{0.0, 0.0, 0.0};           // Cartesian mode: translate the data

  // innermost support radius over all nonzero profiles (about the offset
  // center); must clear the obstacle
  double support_inner_radius() const;
  double support_outer_radius() const;
  bool operator==(const InitialData&) const = default;
};

// ================================ grid ====================================

enum class GridMode { radial, cartesian3d };

struct SpongeSpec {
  bool enabled = false;
  double width = 2.0;      // absorbing shell thickness at the outer boundary
  double strength = 4.0;   // peak damping rate
  bool operator==(const SpongeSpec&) const = default;
};

struct Grid {
  GridMode mode = GridMode::radial;
  bool obstacle = true;    // closed unit ball; false = free space

  // radial: nodes r_m = r_min + m*dr, r_min = 1 (obstacle) or 0 (free);
  // the time step is locked to dr / max speed
  double dr = 0.05;
  double r_max = 40.0;

  // cartesian3d: cube [-half_width, half_width]^3, spacing dx
  double dx = 0.2;
  double half_width = 8.0;
  double cfl = 0.55;       // c_max * dt / dx, must stay <= 1/sqrt(3)

  double t_max = 20.0;
  SpongeSpec sponge;

  double r_min() const { return obstacle ? 1.0 : 0.0; }
  bool operator==(const Grid&) const = default;
};

// ============================= diagnostics ================================

struct WeightSelector {
  enum class Kind { phi, w, wc };
  Kind kind = Kind::w;
  double nu = 0.0;
  double kappa = 1.0;   // w / wc
  double speed = 1.0;   // wc: excluded speed
  std::string label() const;
  static std::optional<WeightSelector> parse(const std::string& text);
  bool operator==(const WeightSelector&) const = default;
};

struct DiagnosticsSpec {
  double sample_dt = 0.5;         // snapped down to a whole number of steps
  double local_energy_b = 4.0;
  int monitor_k = 1;              // 0 disables the monitor series
  std::vector<double> probes;     // radii (radial) or |x| along +x (cartesian)
  std::vector<WeightSelector> norms;
  int snapshot_every = 0;         // every n-th sample instant; 0 = off
  bool operator==(const DiagnosticsSpec&) const = default;
};

// =============================== scenario =================================

struct Scenario {
  WaveSystem system;
  NonlinearitySpec nonlin;
  InitialData data;
  Grid grid;
  DiagnosticsSpec diag;
  bool operator==(const Scenario&) const = default;
};

// ============================== validation ================================

struct ValidationIssue {
  std::string field;     // "[section].key" style locator
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;
  bool ok() const { return errors.empty(); }
  std::string summary() const;
};

// Structural checks: speeds positive; term indices in range; null terms on
// same-speed triples; canonical quadratic slots; data clear of the
// obstacle; radial grid step locked to dr/c_max with integer speed ratios;
// Cartesian CFL below 1/sqrt(3); radial-mode nonlinearities compatible
// with radial symmetry (direction-dependent terms rejected, terms that
// vanish identically on radial fields flagged inert).
ValidationReport validate_scenario(const Scenario& s);

}  // namespace nullwave
