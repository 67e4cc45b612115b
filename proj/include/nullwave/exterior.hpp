#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "nullwave/model.hpp"
#include "nullwave/nonlinearity.hpp"

// Exterior-domain evolution.  Two lattices:
//
//  * radial: U = r u on r_m = r_min + m dr, Dirichlet U = 0 at the obstacle
//    surface r = 1 (or regularity U = 0 at r = 0 in free space).  The
//    fastest component steps at unit Courant number dt = dr / c_max, which
//    transports d'Alembert solutions exactly between nodes; slower
//    components step every c_max/c_j common steps at their own unit Courant
//    number.  Sources enter through the characteristic-diamond midpoint
//    rule with one predictor/corrector pass (second order).
//
//  * cartesian3d: seven-point leapfrog on a cube with a staircase Dirichlet
//    mask for the unit ball, CFL-limited by 1/sqrt(3).
//
// Plus centered lattice realizations of the invariant vector fields and
// characteristic derivatives used by the diagnostics and operator checks.

namespace nullwave {

// ======================= half-line d'Alembert oracle ======================

// Exact solution of U_tt = c^2 U_rr on (r_floor, inf) with U(t, r_floor)=0,
// data U0/V0 given analytically; odd reflection about r_floor.  Shares only
// the 1-d quadrature helper with the stepping path.
struct HalfLineData {
  std::function<double(double)> U0;
  std::function<double(double)> V0;
  std::vector<double> breakpoints;
};

double half_line_dalembert(const HalfLineData& d, double c, double r_floor, double t, double r);

// U0/V0 = r * (eps phi, eps psi) for one component; psi_outgoing maps to
// V0 = -c dU0/dr.
HalfLineData half_line_data_for(const InitialData& data, int comp, double c);

// ============================ radial solver ===============================

struct RadialBlowup {
  double time = 0.0;
  int component = 0;
  double amplitude = 0.0;
};

class RadialSolver {
 public:
  explicit RadialSolver(const Scenario& s);

  // advance by one common step; false once blown up (state frozen)
  bool step_common();

  int n_nodes() const { return n_nodes_; }
  double dr() const { return dr_; }
  double r(int m) const { return r_min_ + m * dr_; }
  double r_min() const { return r_min_; }
  double dt_common() const { return dt_common_; }
  int components() const { return static_cast<int>(comp_.size()); }
  int stride(int i) const { return comp_[i].stride; }
  double dt_of(int i) const { return comp_[i].stride * dt_common_; }
  // common steps between instants at which every component owns a level
  int sync_stride() const { return sync_stride_; }

  double newest_time() const { return step_ * dt_common_; }
  const std::optional<RadialBlowup>& blowup() const { return blowup_; }

  // level of component i at exact time T (a multiple of dt_of(i)); null if
  // not retained or not yet computed
  const std::vector<double>* level_at(int i, double T) const;
  // T is diagnosable at depth q when levels T - q dt_i .. T + q dt_i exist
  bool sampleable(double T, int depth) const;

  // conserved leapfrog energy of the two newest levels, summed over
  // components (4 pi r^2 measure folded in through U)
  double energy_total() const;

  double max_abs_u() const;   // newest level, all components

 private:
  struct Comp {
    int stride = 1;
    double c = 1.0;
    // own levels, oldest first; times_[q] = (base + q) * dt_of(i)
    std::deque<std::vector<double>> levels;
    long base = 0;  // time index (in units of dt_of) of levels.front()
    double max_abs = 0.0;
  };

  void step_component(int i);
  void source_jets(double T, std::vector<std::vector<ComponentJet>>& jets) const;
  double interp_value(int i, double T, int m) const;

  Scenario scen_;
  double r_min_ = 1.0, dr_ = 0.05, dt_common_ = 0.05;
  int n_nodes_ = 0;
  long step_ = 0;
  int sync_stride_ = 1;
  int keep_levels_ = 7;
  bool has_nonlin_ = false;
  std::vector<Comp> comp_;
  std::optional<RadialBlowup> blowup_;
};

// =========================== cartesian solver =============================

class CartesianSolver {
 public:
  explicit CartesianSolver(const Scenario& s, int workers = 1);

  bool step();

  double dt() const { return dt_; }
  double dx() const { return dx_; }
  int n_axis() const { return n_; }
  double coord(int i) const { return -half_ + i * dx_; }
  double time_cur() const { return step_ * dt_; }
  int components() const { return static_cast<int>(cur_.size()); }
  const std::optional<RadialBlowup>& blowup() const { return blowup_; }

  // levels: previous, current, next kept per component
  const std::vector<double>& field(int comp) const { return cur_[comp]; }
  const std::vector<double>& field_prev(int comp) const { return prev_[comp]; }
  const std::vector<double>& field_next(int comp) const { return next_[comp]; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  bool masked(std::size_t idx) const { return mask_[idx] != 0; }

  double energy_total() const;
  // Sum over components of ||v|| + ||d_t v|| + ||grad v|| on Omega cap B_b
  double local_energy(double b) const;
  double max_abs_u() const;

 private:
  void update_range(int comp, int i_lo, int i_hi);
  ComponentJet jet_at(int comp, int i, int j, int k) const;

  Scenario scen_;
  int n_ = 0, workers_ = 1;
  double dx_ = 0.1, dt_ = 0.05, half_ = 8.0;
  long step_ = 0;
  int pass_ = 0;              // 0 predictor, 1 corrector
  bool has_nonlin_ = false;
  std::vector<std::vector<double>> prev_, cur_, next_;
  std::vector<unsigned char> mask_;     // 1 = obstacle node (forced zero)
  std::vector<double> sponge_;          // damping coefficient per node
  std::optional<RadialBlowup> blowup_;
};

// ===================== lattice operator applications ======================

// Scalar field sampled on a uniform space-time box; the substrate for the
// commutator and identity checks.  Every centered application widens the
// invalid margin by one cell.
struct LatticeField {
  int nt = 0, nx = 0, ny = 0, nz = 0;
  double t0 = 0.0, dt = 0.1;
  Vec3 x0{0, 0, 0};
  double h = 0.1;
  int margin = 0;
  std::vector<double> v;

  double& at(int it, int ix, int iy, int iz) {
    return v[((static_cast<std::size_t>(it) * nx + ix) * ny + iy) * nz + iz];
  }
  double at(int it, int ix, int iy, int iz) const {
    return v[((static_cast<std::size_t>(it) * nx + ix) * ny + iy) * nz + iz];
  }
  double tcoord(int it) const { return t0 + it * dt; }
  Vec3 xcoord(int ix, int iy, int iz) const {
    return {x0[0] + ix * h, x0[1] + iy * h, x0[2] + iz * h};
  }

  static LatticeField sample(const std::function<double(double, const Vec3&)>& f, int nt, int nx,
                             int ny, int nz, double t0, double dt, const Vec3& x0, double h);
  double max_abs_interior() const;   // over the valid region
};

// Z index: 0 d_t, 1..3 d_a, 4 Omega_12, 5 Omega_13, 6 Omega_23
LatticeField apply_vector_field(const LatticeField& f, int z);
LatticeField apply_box(const LatticeField& f, double c);
// D_{+-,c} = d_t +- c (x/r).grad
LatticeField apply_characteristic(const LatticeField& f, double c, int sign);
LatticeField lattice_sub(const LatticeField& a, const LatticeField& b);

}  // namespace nullwave
