#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nullwave/exterior.hpp"
#include "nullwave/model.hpp"

// Cut-off representation of the exterior linear evolution by free-space
// pieces plus commutator-driven corrections, and its numerical
// verification.  With psi_a the radial ramp (0 inside radius a, 1 outside
// a+1) the homogeneous identity reads
//
//   K[v0] = psi_1 K0[psi_2 v0] + K1 + K2 + K3 + K4,
//
//   K1 = (1 - psi_2) L[ [psi_1, -c^2 D] K0[psi_2 v0] ]
//   K2 = -L0[ [psi_2, -c^2 D] L[ [psi_1, -c^2 D] K0[psi_2 v0] ] ]
//   K3 = (1 - psi_3) K[(1 - psi_2) v0]
//   K4 = -L0[ [psi_3, -c^2 D] K[(1 - psi_2) v0] ]
//
// (D = Laplacian; K/L exterior data/source solves, K0/L0 their free-space
// counterparts) and the inhomogeneous identity replaces K0[psi_2 v0] by
// L0[psi_2 f] and K[(1-psi_2) v0] by L[(1-psi_2) f].  Every inner solve is
// computed once on a shared unit-Courant radial grid whose spacing divides
// 1, so free and exterior node sets coincide where they overlap and no
// cross-grid interpolation enters the residual.

namespace nullwave {

// ============================== cutoffs ===================================

// psi_a = 0 on r <= a, 1 on r >= a+1, degree-9 polynomial ramp between;
// four derivatives vanish at both ends, so the ramp is C^4
struct CutoffSpec {
  double a = 1.0;

  double value(double r) const;
  double deriv(double r) const;
  double second(double r) const;
  // radial Laplacian psi'' + (2/r) psi'
  double laplacian(double r) const;
};

// [psi_a, -c^2 D]u at a point, from the value and radial derivative of u
double commutator_cutoff(double u, double du_r, const CutoffSpec& psi, double r, double c);

// ======================== retained linear solves ==========================

// Unit-Courant linear radial evolution with full level history; the
// decomposition pieces and the characteristic identity check both need
// space-time access.  Source is sampled at native (step, node) indices.
struct LinearRadialRun {
  double c = 1.0, r_floor = 0.0, dr = 0.02, dt = 0.02;
  int n_nodes = 0;
  std::vector<std::vector<double>> levels;   // levels[n][m] = U(n dt, r_floor + m dr)

  double r(int m) const { return r_floor + m * dr; }
  long n_steps() const { return static_cast<long>(levels.size()) - 1; }
  double U(long n, int m) const { return levels[n][m]; }
  double u(long n, int m) const { return levels[n][m] / r(m); }
  // centered radial derivative of u = U/r (interior nodes)
  double du_r(long n, int m) const;
};

using GridSource = std::function<double(long step, int node, double r)>;

LinearRadialRun solve_linear_radial(double c, double r_floor, double dr, double r_max,
                                    double t_max, const HalfLineData* data,
                                    const GridSource* source);

// =========================== residual reports =============================

struct DecompositionProbe {
  double t = 0.0;
  double r = 0.0;
};

struct DecompositionRow {
  DecompositionProbe probe;
  double base = 0.0;      // psi_1 K0[psi_2 v0] (or the L0 analogue)
  double k1 = 0.0, k2 = 0.0, k3 = 0.0, k4 = 0.0;
  double sum = 0.0;
  double direct = 0.0;
  double residual = 0.0;
};

struct DecompositionReport {
  double dr = 0.0;
  std::vector<DecompositionRow> rows;
  double max_residual = 0.0;
  double max_abs_direct = 0.0;
  // largest |K1| seen beyond r = 3 and |K3| beyond r = 4; exact zeros by
  // the cutoff supports
  double support_violation = 0.0;
  std::string to_csv() const;
};

// Homogeneous identity, radial mode, data supported strictly between the
// obstacle and its outer support radius.  dr must divide 1 exactly.
DecompositionReport assemble_homogeneous_decomposition(const InitialData& v0, double c,
                                                       const std::vector<DecompositionProbe>& probes,
                                                       double dr = 0.02);

// Inhomogeneous identity for a source f(t, r) vanishing near the obstacle
// and supported in r <= f_support_outer.
DecompositionReport assemble_inhomogeneous_decomposition(
    const std::function<double(double, double)>& f, double f_support_outer, double c,
    const std::vector<DecompositionProbe>& probes, double dr = 0.02);

// ==================== characteristic-factor identity ======================

// Along lattice rays r = offset + c t, the doubly characteristic second
// difference of U = r u must reproduce r f: machine zero for f = 0, O(dr^2)
// otherwise.
struct RayResidualReport {
  double dr = 0.0;
  int samples = 0;
  double max_residual = 0.0;
  double max_field = 0.0;    // scale reference: largest |D-D+U| seen
};

RayResidualReport dplus_identity_check(const InitialData& data,
                                       const std::function<double(double, double)>* f, double c,
                                       const std::vector<double>& ray_offsets, double t_max,
                                       double dr = 0.02);

}  // namespace nullwave
