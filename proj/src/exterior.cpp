#include "nullwave/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nullwave/constants.hpp"
#include "nullwave/quadrature.hpp"

namespace nullwave {

// ======================= half-line d'Alembert oracle ======================

namespace {

// odd extension about r_floor
double reflected_U0(const HalfLineData& d, double r_floor, double rho) {
  if (rho >= r_floor) return d.U0(rho);
  return -d.U0(2.0 * r_floor - rho);
}

}  // namespace

double half_line_dalembert(const HalfLineData& d, double c, double r_floor, double t, double r) {
  const double a = r - c * t;
  const double b = r + c * t;
  double value = 0.5 * (reflected_U0(d, r_floor, a) + reflected_U0(d, r_floor, b));
  // The reflected integral from a to b folds onto [fold(a), b] with
  // fold(a) = r_floor + |a - r_floor|: the stretch below the floor cancels
  // an equal stretch above it.
  const double fold_a = r_floor + std::abs(a - r_floor);
  const double lo = std::min(fold_a, b);
  const double hi = std::max(fold_a, b);
  double integral = integrate_piecewise(d.V0, lo, hi, d.breakpoints);
  if (fold_a > b) integral = -integral;
  value += integral / (2.0 * c);
  return value;
}

HalfLineData half_line_data_for(const InitialData& data, int comp, double c) {
  const auto& cd = data.components[comp];
  const double eps = data.epsilon;
  HalfLineData out;
  const RadialProfile phi = cd.phi;
  const RadialProfile psi = cd.psi;
  out.U0 = [phi, eps](double rho) { return rho * eps * phi.value(rho); };
  if (cd.psi_outgoing) {
    // d_t(r u)|_0 = -c d_r(r u)|_0
    out.V0 = [phi, eps, c](double rho) {
      return -c * eps * (phi.value(rho) + rho * phi.deriv(rho));
    };
    out.breakpoints = phi.breakpoints();
  } else {
    out.V0 = [psi, eps](double rho) { return rho * eps * psi.value(rho); };
    out.breakpoints = psi.breakpoints();
    for (double bp : phi.breakpoints()) out.breakpoints.push_back(bp);
  }
  return out;
}

// ============================ radial solver ===============================

RadialSolver::RadialSolver(const Scenario& s) : scen_(s) {
  const Grid& g = s.grid;
  if (g.mode != GridMode::radial) throw std::invalid_argument("radial solver needs a radial grid");
  r_min_ = g.r_min();
  dr_ = g.dr;
  n_nodes_ = static_cast<int>(std::llround((g.r_max - r_min_) / dr_)) + 1;
  const double c_max = s.system.max_speed();
  dt_common_ = dr_ / c_max;
  has_nonlin_ = !s.nonlin.empty();

  comp_.resize(s.system.size());
  sync_stride_ = 1;
  for (int i = 0; i < s.system.size(); ++i) {
    comp_[i].c = s.system.speeds[i];
    comp_[i].stride = static_cast<int>(std::llround(c_max / comp_[i].c));
    sync_stride_ = std::lcm(sync_stride_, comp_[i].stride);
  }

  // initial jets are analytic, so the Taylor source term of the first step
  // can be evaluated without any lattice differencing
  std::vector<ComponentJet> init_jets(comp_.size());
  std::vector<std::vector<ComponentJet>> jets_by_node;
  if (has_nonlin_) jets_by_node.assign(n_nodes_, init_jets);
  for (int m = 0; m < n_nodes_ && has_nonlin_; ++m) {
    const double rm = r(m);
    for (int j = 0; j < static_cast<int>(comp_.size()); ++j) {
      const auto& cd = s.data.components[j];
      ComponentJet jet;
      jet.u = s.data.epsilon * cd.phi.value(rm);
      jet.du[1] = s.data.epsilon * cd.phi.deriv(rm);
      if (cd.psi_outgoing) {
        const double cj = comp_[j].c;
        jet.du[0] = (rm > 0.0) ? -cj * (jet.du[1] + jet.u / rm) : 0.0;
      } else {
        jet.du[0] = s.data.epsilon * cd.psi.value(rm);
      }
      jets_by_node[m][j] = jet;
    }
  }

  for (int i = 0; i < static_cast<int>(comp_.size()); ++i) {
    Comp& cm = comp_[i];
    const double dt_i = cm.stride * dt_common_;
    const HalfLineData hd = half_line_data_for(s.data, i, cm.c);

    std::vector<double> level0(n_nodes_), level1(n_nodes_);
    for (int m = 0; m < n_nodes_; ++m) level0[m] = hd.U0(r(m));
    level0.front() = 0.0;
    for (int m = 1; m + 1 < n_nodes_; ++m) {
      level1[m] = half_line_dalembert(hd, cm.c, r_min_, dt_i, r(m));
      if (has_nonlin_) {
        const double f = evaluate_nonlinearity(s.nonlin, s.system, jets_by_node[m])[i];
        level1[m] += 0.5 * dt_i * dt_i * r(m) * f;
      }
    }
    level1.front() = 0.0;
    level1.back() = 0.0;

    for (int m = (r_min_ == 0.0 ? 1 : 0); m < n_nodes_; ++m) {
      cm.max_abs = std::max(cm.max_abs, std::abs(level0[m]) / r(m));
      cm.max_abs = std::max(cm.max_abs, std::abs(level1[m]) / r(m));
    }
    cm.levels.push_back(std::move(level0));
    cm.levels.push_back(std::move(level1));
    cm.base = 0;
  }
}

bool RadialSolver::step_common() {
  if (blowup_) return false;
  ++step_;
  for (int i = 0; i < static_cast<int>(comp_.size()); ++i) {
    if (step_ % comp_[i].stride == 0) step_component(i);
    if (blowup_) return false;
  }
  return true;
}

// values and one-sided d_t of component j's U at an arbitrary time, linear
// between (or just past) its own levels
void RadialSolver::source_jets(double T, std::vector<std::vector<ComponentJet>>& jets) const {
  const int nc = static_cast<int>(comp_.size());
  jets.assign(nc, std::vector<ComponentJet>(n_nodes_));
  std::vector<double> val(n_nodes_), dval(n_nodes_);
  for (int j = 0; j < nc; ++j) {
    const Comp& cm = comp_[j];
    const double dt_j = cm.stride * dt_common_;
    const double s = T / dt_j;
    const long last = cm.base + static_cast<long>(cm.levels.size()) - 1;
    long k = static_cast<long>(std::floor(s + 1e-9));
    if (k >= last) k = last - 1;  // extrapolate off the newest pair
    if (k < cm.base) k = cm.base;
    const double theta = s - static_cast<double>(k);
    const auto& lo = cm.levels[k - cm.base];
    const auto& hi = cm.levels[k + 1 - cm.base];
    for (int m = 0; m < n_nodes_; ++m) {
      val[m] = lo[m] + theta * (hi[m] - lo[m]);
      dval[m] = (hi[m] - lo[m]) / dt_j;
    }
    for (int m = 1; m + 1 < n_nodes_; ++m) {
      const double rm = r(m);
      ComponentJet& jet = jets[j][m];
      jet.u = val[m] / rm;
      jet.du[0] = dval[m] / rm;
      jet.du[1] = ((val[m + 1] - val[m - 1]) / (2.0 * dr_) - jet.u) / rm;
    }
  }
}

void RadialSolver::step_component(int i) {
  Comp& cm = comp_[i];
  const double dt = cm.stride * dt_common_;
  const std::vector<double>& cur = cm.levels.back();
  const std::vector<double>& prev = cm.levels[cm.levels.size() - 2];
  const double T = (cm.base + static_cast<long>(cm.levels.size()) - 1) * dt;

  std::vector<double> next(n_nodes_, 0.0);
  const SpongeSpec& sp = scen_.grid.sponge;
  const double r_damp0 = scen_.grid.r_max - sp.width;

  std::vector<double> source;  // r * F_i at the current level
  if (has_nonlin_) {
    std::vector<std::vector<ComponentJet>> jets;
    source_jets(T, jets);
    // predictor: replace own d_t by the lagged backward difference
    for (int m = 1; m + 1 < n_nodes_; ++m)
      jets[i][m].du[0] = (cur[m] - prev[m]) / dt / r(m);
    source.resize(n_nodes_, 0.0);
    std::vector<ComponentJet> point(comp_.size());
    for (int m = 1; m + 1 < n_nodes_; ++m) {
      for (int j = 0; j < static_cast<int>(comp_.size()); ++j) point[j] = jets[j][m];
      source[m] = r(m) * evaluate_nonlinearity(scen_.nonlin, scen_.system, point)[i];
    }
    std::vector<double> pred(n_nodes_, 0.0);
    for (int m = 1; m + 1 < n_nodes_; ++m)
      pred[m] = cur[m + 1] + cur[m - 1] - prev[m] + dt * dt * source[m];
    // corrector: centered own d_t through the predicted level
    for (int m = 1; m + 1 < n_nodes_; ++m) {
      for (int j = 0; j < static_cast<int>(comp_.size()); ++j) point[j] = jets[j][m];
      point[i].du[0] = (pred[m] - prev[m]) / (2.0 * dt) / r(m);
      source[m] = r(m) * evaluate_nonlinearity(scen_.nonlin, scen_.system, point)[i];
    }
  }

  for (int m = 1; m + 1 < n_nodes_; ++m) {
    double rhs = cur[m + 1] + cur[m - 1] - prev[m];
    if (has_nonlin_) rhs += dt * dt * source[m];
    if (sp.enabled) {
      const double xi = std::clamp((r(m) - r_damp0) / sp.width, 0.0, 1.0);
      const double sg = sp.strength * xi * xi;
      if (sg > 0.0) {
        rhs += 0.5 * sg * dt * prev[m];
        next[m] = rhs / (1.0 + 0.5 * sg * dt);
        continue;
      }
    }
    next[m] = rhs;
  }

  const double t_next = T + dt;
  for (int m = (r_min_ == 0.0 ? 1 : 0); m < n_nodes_; ++m) {
    const double amp = std::abs(next[m]) / r(m);
    if (!std::isfinite(amp) || amp > tol::blowup_amplitude) {
      blowup_ = RadialBlowup{t_next, i, amp};
      break;
    }
    cm.max_abs = std::max(cm.max_abs, amp);
  }

  cm.levels.push_back(std::move(next));
  if (static_cast<int>(cm.levels.size()) > keep_levels_) {
    cm.levels.pop_front();
    ++cm.base;
  }
}

const std::vector<double>* RadialSolver::level_at(int i, double T) const {
  const Comp& cm = comp_[i];
  const double dt = cm.stride * dt_common_;
  const double s = T / dt;
  const long k = std::llround(s);
  if (std::abs(s - static_cast<double>(k)) > 1e-6) return nullptr;
  const long idx = k - cm.base;
  if (idx < 0 || idx >= static_cast<long>(cm.levels.size())) return nullptr;
  return &cm.levels[idx];
}

bool RadialSolver::sampleable(double T, int depth) const {
  for (int i = 0; i < static_cast<int>(comp_.size()); ++i) {
    const Comp& cm = comp_[i];
    const double dt = cm.stride * dt_common_;
    const double s = T / dt;
    const long k = std::llround(s);
    if (std::abs(s - static_cast<double>(k)) > 1e-6) return false;
    if (k - depth < cm.base) return false;
    if (k + depth > cm.base + static_cast<long>(cm.levels.size()) - 1) return false;
  }
  return true;
}

double RadialSolver::energy_total() const {
  double total = 0.0;
  for (const Comp& cm : comp_) {
    const double dt = cm.stride * dt_common_;
    const auto& a = cm.levels[cm.levels.size() - 2];
    const auto& b = cm.levels.back();
    double kin = 0.0, pot = 0.0;
    for (int m = 0; m < n_nodes_; ++m) {
      const double v = (b[m] - a[m]) / dt;
      kin += v * v;
    }
    for (int m = 0; m + 1 < n_nodes_; ++m)
      pot += (b[m + 1] - b[m]) * (a[m + 1] - a[m]);
    pot *= cm.c * cm.c / (dr_ * dr_);
    total += 4.0 * M_PI * dr_ * 0.5 * (kin + pot);
  }
  return total;
}

double RadialSolver::max_abs_u() const {
  double out = 0.0;
  for (const Comp& cm : comp_) {
    const auto& b = cm.levels.back();
    for (int m = (r_min_ == 0.0 ? 1 : 0); m < n_nodes_; ++m)
      out = std::max(out, std::abs(b[m]) / r(m));
  }
  return out;
}

double RadialSolver::interp_value(int i, double T, int m) const {
  const Comp& cm = comp_[i];
  const double dt = cm.stride * dt_common_;
  const double s = T / dt;
  long k = static_cast<long>(std::floor(s + 1e-9));
  const long last = cm.base + static_cast<long>(cm.levels.size()) - 1;
  if (k >= last) k = last - 1;
  if (k < cm.base) k = cm.base;
  const double theta = s - static_cast<double>(k);
  const auto& lo = cm.levels[k - cm.base];
  const auto& hi = cm.levels[k + 1 - cm.base];
  return lo[m] + theta * (hi[m] - lo[m]);
}

}  // namespace nullwave
