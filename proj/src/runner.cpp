#include "nullwave/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <stdexcept>

#include <json.hpp>

#include "nullwave/config.hpp"
#include "nullwave/exterior.hpp"
#include "nullwave/version.hpp"
#include "nullwave/weights.hpp"

namespace nullwave {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// ======================== series bookkeeping ==============================

struct SeriesBuilder {
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  std::vector<double> t;
  std::vector<double> pending;

  int add(const std::string& name) {
    names.push_back(name);
    cols.emplace_back();
    return static_cast<int>(names.size()) - 1;
  }
  void begin_sample(double time) {
    t.push_back(time);
    pending.assign(names.size(), 0.0);
  }
  void set(int idx, double v) { pending[idx] = v; }
  void commit() {
    for (std::size_t k = 0; k < cols.size(); ++k) cols[k].push_back(pending[k]);
  }
};

struct SeriesPlan {
  int energy_total = -1, energy_local = -1;
  std::vector<int> sup_u, std0, std1, dplus;
  std::vector<int> mon_amp, mon_grad, mon_out, mon_grad2;
  std::vector<std::vector<int>> norm_cols;   // [selector][component]
};

SeriesPlan plan_series(SeriesBuilder& sb, const Scenario& s, bool second_order) {
  SeriesPlan plan;
  const int nc = s.system.size();
  plan.energy_total = sb.add("energy_total");
  plan.energy_local = sb.add("energy_local");
  auto per_comp = [&](const char* stem, std::vector<int>& out) {
    for (int c = 0; c < nc; ++c) out.push_back(sb.add(stem + std::string("[") + std::to_string(c + 1) + "]"));
  };
  per_comp("sup_u", plan.sup_u);
  per_comp("std0", plan.std0);
  per_comp("std1", plan.std1);
  per_comp("dplus", plan.dplus);
  if (s.diag.monitor_k >= 1) {
    per_comp("mon_amp", plan.mon_amp);
    per_comp("mon_grad", plan.mon_grad);
    per_comp("mon_out", plan.mon_out);
  }
  if (s.diag.monitor_k >= 2 && second_order) per_comp("mon_grad2", plan.mon_grad2);
  for (const auto& sel : s.diag.norms) {
    std::vector<int> cols;
    for (int c = 0; c < nc; ++c)
      cols.push_back(sb.add(sel.label() + "[" + std::to_string(c + 1) + "]"));
    plan.norm_cols.push_back(cols);
  }
  return plan;
}

// ========================== radial sampling ===============================

// node-wise first and second derivative fields of one component at one
// sampled instant, built from the three levels around it
struct RadialFrame {
  std::vector<double> u, ut, ur, du_abs, dp;
  std::vector<double> utt, utr, urr;
};

void build_frame(const RadialSolver& sol, int comp, double T, bool second, RadialFrame& fr) {
  const double dt = sol.dt_of(comp);
  const double dr = sol.dr();
  const std::vector<double>& L0 = *sol.level_at(comp, T);
  const std::vector<double>& Lm = *sol.level_at(comp, T - dt);
  const std::vector<double>& Lp = *sol.level_at(comp, T + dt);
  const int n = sol.n_nodes();
  fr.u.assign(n, 0.0);
  fr.ut.assign(n, 0.0);
  fr.ur.assign(n, 0.0);
  fr.du_abs.assign(n, 0.0);
  fr.dp.assign(n, 0.0);
  if (second) {
    fr.utt.assign(n, 0.0);
    fr.utr.assign(n, 0.0);
    fr.urr.assign(n, 0.0);
  }
  for (int m = 1; m + 1 < n; ++m) {
    const double r = sol.r(m);
    const double U = L0[m];
    const double Ut = (Lp[m] - Lm[m]) / (2.0 * dt);
    const double Ur = (L0[m + 1] - L0[m - 1]) / (2.0 * dr);
    fr.u[m] = U / r;
    fr.ut[m] = Ut / r;
    fr.ur[m] = (Ur - fr.u[m]) / r;
    fr.du_abs[m] = std::hypot(fr.ut[m], fr.ur[m]);
    if (second) {
      const double Utt = (Lp[m] - 2.0 * U + Lm[m]) / (dt * dt);
      const double Urr = (L0[m + 1] - 2.0 * U + L0[m - 1]) / (dr * dr);
      const double Utr = (Lp[m + 1] - Lp[m - 1] - Lm[m + 1] + Lm[m - 1]) / (4.0 * dt * dr);
      fr.utt[m] = Utt / r;
      fr.urr[m] = Urr / r - 2.0 * Ur / (r * r) + 2.0 * U / (r * r * r);
      fr.utr[m] = Utr / r - Ut / (r * r);
    }
  }
}

void fill_dplus(const RadialSolver& sol, double speed, RadialFrame& fr) {
  // D+ u = u_t + c u_r; built from the U-route fields so the outgoing
  // cancellation survives at unit Courant number
  const int n = sol.n_nodes();
  for (int m = 1; m + 1 < n; ++m) fr.dp[m] = fr.ut[m] + speed * fr.ur[m];
}

// analytic frame at t = 0 (profile derivatives; second order by centered
// differencing of the analytic first derivative)
void build_frame0(const Scenario& s, const RadialSolver& sol, int comp, bool second,
                  RadialFrame& fr) {
  const auto& cd = s.data.components[comp];
  const double eps = s.data.epsilon;
  const double c = s.system.speeds[comp];
  const double h = sol.dr();
  const int n = sol.n_nodes();
  fr.u.assign(n, 0.0);
  fr.ut.assign(n, 0.0);
  fr.ur.assign(n, 0.0);
  fr.du_abs.assign(n, 0.0);
  fr.dp.assign(n, 0.0);
  if (second) {
    fr.utt.assign(n, 0.0);
    fr.utr.assign(n, 0.0);
    fr.urr.assign(n, 0.0);
  }
  auto psi_val = [&](double r) {
    if (!cd.psi_outgoing) return cd.psi.value(r);
    return (r > 0.0) ? -c * (cd.phi.deriv(r) + cd.phi.value(r) / r) : 0.0;
  };
  for (int m = 1; m + 1 < n; ++m) {
    const double r = sol.r(m);
    fr.u[m] = eps * cd.phi.value(r);
    fr.ut[m] = eps * psi_val(r);
    fr.ur[m] = eps * cd.phi.deriv(r);
    fr.du_abs[m] = std::hypot(fr.ut[m], fr.ur[m]);
    fr.dp[m] = fr.ut[m] + c * fr.ur[m];
    if (second) {
      const double phi2 = (cd.phi.deriv(r + h) - cd.phi.deriv(r - h)) / (2.0 * h);
      fr.urr[m] = eps * phi2;
      fr.utr[m] = eps * (psi_val(r + h) - psi_val(r - h)) / (2.0 * h);
      fr.utt[m] = c * c * (eps * phi2 + 2.0 * fr.ur[m] / r);
    }
  }
}

double pair_energy(const RadialSolver& sol, double T) {
  double total = 0.0;
  for (int i = 0; i < sol.components(); ++i) {
    const double dt = sol.dt_of(i);
    const std::vector<double>* a = sol.level_at(i, T);
    const std::vector<double>* b = sol.level_at(i, T + dt);
    if (!a || !b) return std::nan("");
    double kin = 0.0, pot = 0.0;
    const int n = sol.n_nodes();
    for (int m = 0; m < n; ++m) {
      const double v = ((*b)[m] - (*a)[m]) / dt;
      kin += v * v;
    }
    for (int m = 0; m + 1 < n; ++m) pot += ((*b)[m + 1] - (*b)[m]) * ((*a)[m + 1] - (*a)[m]);
    const double speed = sol.dr() / dt;   // unit Courant number per component
    pot *= speed * speed / (sol.dr() * sol.dr());
    total += 4.0 * M_PI * sol.dr() * 0.5 * (kin + pot);
  }
  return total;
}

// ============================ radial driver ===============================

RunResult run_radial(const Scenario& s, const RunOptions& opt) {
  RunResult result;
  result.scenario = s;
  RadialSolver sol(s);

  const double dt = sol.dt_common();
  const double t_end = s.grid.t_max;
  long stride = std::max<long>(1, std::llround(s.diag.sample_dt / dt));
  const long sync = sol.sync_stride();
  stride = ((stride + sync - 1) / sync) * sync;

  const bool second = s.diag.monitor_k >= 2;
  SeriesBuilder sb;
  const SeriesPlan plan = plan_series(sb, s, true);
  const int nc = s.system.size();

  // probes snap to nodes
  std::vector<int> probe_nodes;
  for (double p : s.diag.probes) {
    const int m = static_cast<int>(std::llround((p - sol.r_min()) / sol.dr()));
    probe_nodes.push_back(std::clamp(m, 1, sol.n_nodes() - 2));
    for (int c = 0; c < nc; ++c) {
      char nm[64];
      std::snprintf(nm, sizeof nm, "u[%d]@r=%g", c + 1, sol.r(probe_nodes.back()));
      result.probe_names.push_back(nm);
    }
  }
  result.probe_series.assign(result.probe_names.size(), {});

  // outgoing rays for the tangential-derivative fit: five launch radii
  // spread across the interior of the data support, walked one node per
  // common multiple.  A ray keeps its launch radius as characteristic
  // coordinate, so only launches inside the support ride the outgoing
  // wave; launches ahead of it would report identically zero samples.
  std::vector<long> ray_nodes;
  {
    const double lo = std::max(s.data.support_inner_radius(), sol.r_min() + 2 * sol.dr());
    const double hi = s.data.support_outer_radius();
    for (int j = 0; j < 5; ++j) {
      const double rho = lo + (hi - lo) * (0.15 + 0.175 * j);
      const long k0 = std::llround(std::ceil((rho - sol.r_min()) / sol.dr()));
      if (k0 >= 2 && k0 < sol.n_nodes() - 3) ray_nodes.push_back(k0);
    }
    result.rays.assign(ray_nodes.size(), {});
  }
  const int c0_stride = sol.stride(0);

  std::vector<RadialFrame> frames(nc);
  long sample_index = 0;

  auto snapshot = [&](double T) {
    if (opt.out_dir.empty() || s.diag.snapshot_every <= 0) return;
    if (sample_index % s.diag.snapshot_every != 0) return;
    namespace fs = std::filesystem;
    fs::create_directories(opt.out_dir);
    char name[48];
    std::snprintf(name, sizeof name, "snap_%06ld.csv", sample_index);
    std::ofstream f(fs::path(opt.out_dir) / name, std::ios::binary);
    f << "# t = " << fmt17(T) << "\nr";
    for (int c = 0; c < nc; ++c) f << ",u[" << c + 1 << "]";
    f << '\n';
    for (int m = 0; m < sol.n_nodes(); ++m) {
      f << fmt17(sol.r(m));
      for (int c = 0; c < nc; ++c) f << ',' << fmt17(frames[c].u[m]);
      f << '\n';
    }
    result.files_written.push_back(name);
  };

  auto emit = [&](double T, bool analytic0) {
    for (int c = 0; c < nc; ++c) {
      if (analytic0)
        build_frame0(s, sol, c, second, frames[c]);
      else
        build_frame(sol, c, T, second, frames[c]);
      if (!analytic0) fill_dplus(sol, s.system.speeds[c], frames[c]);
    }
    sb.begin_sample(T);
    sb.set(plan.energy_total, analytic0 ? sol.energy_total() : pair_energy(sol, T));

    const double b = s.diag.local_energy_b;
    double e_loc = 0.0;
    for (int c = 0; c < nc; ++c) {
      const RadialFrame& fr = frames[c];
      double s_u = 0.0, s_t = 0.0, s_g = 0.0;
      for (int m = 1; m + 1 < sol.n_nodes(); ++m) {
        const double r = sol.r(m);
        if (r > b) break;
        const double U = fr.u[m] * r;
        const double Utv = fr.ut[m] * r;
        const double G = fr.ur[m] * r;
        s_u += U * U;
        s_t += Utv * Utv;
        s_g += G * G;
      }
      const double w = 4.0 * M_PI * sol.dr();
      e_loc += std::sqrt(w * s_u) + std::sqrt(w * s_t) + std::sqrt(w * s_g);
    }
    sb.set(plan.energy_local, e_loc);

    const double eps = s.data.epsilon;
    for (int c = 0; c < nc; ++c) {
      const RadialFrame& fr = frames[c];
      const double ci = s.system.speeds[c];
      double m_u = 0.0, m_std0 = 0.0, m_std1 = 0.0, m_dp = 0.0;
      double m_amp = 0.0, m_grad = 0.0, m_out = 0.0, m_grad2 = 0.0;
      std::vector<double> m_norm(plan.norm_cols.size(), 0.0);
      for (int m = 1; m + 1 < sol.n_nodes(); ++m) {
        const double r = sol.r(m);
        const double au = std::abs(fr.u[m]);
        const double adu = fr.du_abs[m];
        const double adp = std::abs(fr.dp[m]);
        m_u = std::max(m_u, au);
        m_std0 = std::max(m_std0, std0_quantity(ci, eps, T, r, au));
        m_std1 = std::max(m_std1, std1_quantity(ci, eps, T, r, adu));
        m_dp = std::max(m_dp, dplus_quantity(ci, eps, T, r, adp));
        if (s.diag.monitor_k >= 1) {
          const MonitorWeights mw = monitor_weights(ci, T, r);
          m_amp = std::max(m_amp, mw.amplitude * au);
          m_grad = std::max(m_grad, mw.gradient * adu);
          m_out = std::max(m_out, mw.outgoing * adp);
          if (second) {
            const double jet2 = std::abs(fr.utt[m]) + std::abs(fr.utr[m]) +
                                std::abs(fr.urr[m]) + 2.0 * std::abs(fr.ur[m]) / r;
            m_grad2 = std::max(m_grad2, mw.gradient * jet2);
          }
        }
        for (std::size_t k = 0; k < plan.norm_cols.size(); ++k) {
          const double w = evaluate_weight(s.diag.norms[k], T, r, s.system.speeds);
          m_norm[k] = std::max(m_norm[k], w * au);
        }
      }
      sb.set(plan.sup_u[c], m_u);
      sb.set(plan.std0[c], m_std0);
      sb.set(plan.std1[c], m_std1);
      sb.set(plan.dplus[c], m_dp);
      if (s.diag.monitor_k >= 1) {
        sb.set(plan.mon_amp[c], m_amp);
        sb.set(plan.mon_grad[c], m_grad);
        sb.set(plan.mon_out[c], m_out);
        if (second) sb.set(plan.mon_grad2[c], m_grad2);
      }
      for (std::size_t k = 0; k < plan.norm_cols.size(); ++k)
        sb.set(plan.norm_cols[k][c], m_norm[k]);
      result.max_amp = std::max(result.max_amp, m_u);
    }
    sb.commit();

    std::size_t pc = 0;
    for (std::size_t p = 0; p < probe_nodes.size(); ++p)
      for (int c = 0; c < nc; ++c) result.probe_series[pc++].push_back(frames[c].u[probe_nodes[p]]);

    // ray samples from component 1
    const long shift = std::llround(T / dt) / c0_stride;
    for (std::size_t j = 0; j < ray_nodes.size(); ++j) {
      const long m = ray_nodes[j] + shift;
      if (m < 2 || m + 2 >= sol.n_nodes()) continue;
      result.rays[j].push_back(RaySample{T, sol.r(static_cast<int>(m)),
                                         std::abs(frames[0].dp[m]), frames[0].du_abs[m]});
    }
    snapshot(T);
    ++sample_index;
  };

  emit(0.0, true);

  double next_T = stride * dt;
  while (next_T <= t_end + 1e-9) {
    if (!sol.step_common()) break;
    while (next_T <= t_end + 1e-9 && sol.sampleable(next_T, 1)) {
      emit(next_T, false);
      next_T += stride * dt;
    }
  }

  if (sol.blowup()) {
    result.blew_up = true;
    result.lifespan = sol.blowup()->time;
    result.max_amp = std::max(result.max_amp, sol.blowup()->amplitude);
  } else {
    result.lifespan = t_end;
  }
  result.t = sb.t;
  result.series_names = sb.names;
  result.series = sb.cols;
  return result;
}

// =========================== cartesian driver =============================

RunResult run_cartesian(const Scenario& s, const RunOptions& opt) {
  RunResult result;
  result.scenario = s;
  CartesianSolver sol(s, opt.workers);

  const double dt = sol.dt();
  const double t_end = s.grid.t_max;
  const long stride = std::max<long>(1, std::llround(s.diag.sample_dt / dt));

  SeriesBuilder sb;
  const SeriesPlan plan = plan_series(sb, s, false);
  const int nc = s.system.size();
  const int n = sol.n_axis();
  const int mid = n / 2;

  std::vector<std::array<int, 3>> probe_cells;
  for (double p : s.diag.probes) {
    const int i = std::clamp(mid + static_cast<int>(std::llround(p / sol.dx())), 1, n - 2);
    probe_cells.push_back({i, mid, mid});
    for (int c = 0; c < nc; ++c) {
      char nm[64];
      std::snprintf(nm, sizeof nm, "u[%d]@x=%g", c + 1, sol.coord(i));
      result.probe_names.push_back(nm);
    }
  }
  result.probe_series.assign(result.probe_names.size(), {});

  const double eps = s.data.epsilon;
  long sample_index = 0;

  auto snapshot = [&](double T) {
    if (opt.out_dir.empty() || s.diag.snapshot_every <= 0) return;
    if (sample_index % s.diag.snapshot_every != 0) return;
    namespace fs = std::filesystem;
    fs::create_directories(opt.out_dir);
    char name[48];
    std::snprintf(name, sizeof name, "snap_%06ld.csv", sample_index);
    std::ofstream f(fs::path(opt.out_dir) / name, std::ios::binary);
    f << "# t = " << fmt17(T) << "\nx";
    for (int c = 0; c < nc; ++c) f << ",u[" << c + 1 << "]";
    f << '\n';
    for (int i = 0; i < n; ++i) {
      f << fmt17(sol.coord(i));
      for (int c = 0; c < nc; ++c) f << ',' << fmt17(sol.field(c)[sol.index(i, mid, mid)]);
      f << '\n';
    }
    result.files_written.push_back(name);
  };

  auto emit = [&](double T) {
    sb.begin_sample(T);
    sb.set(plan.energy_total, sol.energy_total());
    sb.set(plan.energy_local, sol.local_energy(s.diag.local_energy_b));
    for (int c = 0; c < nc; ++c) {
      const double ci = s.system.speeds[c];
      const auto& u = sol.field(c);
      double m_u = 0.0, m_std0 = 0.0, m_std1 = 0.0, m_dp = 0.0;
      double m_amp = 0.0, m_grad = 0.0, m_out = 0.0;
      std::vector<double> m_norm(plan.norm_cols.size(), 0.0);
      for (int i = 1; i + 1 < n; ++i)
        for (int j = 1; j + 1 < n; ++j)
          for (int k = 1; k + 1 < n; ++k) {
            const std::size_t idx = sol.index(i, j, k);
            if (sol.masked(idx)) continue;
            const Vec3 x{sol.coord(i), sol.coord(j), sol.coord(k)};
            const double r = norm3(x);
            const double au = std::abs(u[idx]);
            const double ut = (sol.field_next(c)[idx] - sol.field_prev(c)[idx]) / (2.0 * dt);
            const double g1 = (u[sol.index(i + 1, j, k)] - u[sol.index(i - 1, j, k)]) / (2.0 * sol.dx());
            const double g2 = (u[sol.index(i, j + 1, k)] - u[sol.index(i, j - 1, k)]) / (2.0 * sol.dx());
            const double g3 = (u[sol.index(i, j, k + 1)] - u[sol.index(i, j, k - 1)]) / (2.0 * sol.dx());
            const double adu = std::sqrt(ut * ut + g1 * g1 + g2 * g2 + g3 * g3);
            const double radial = (r > 1e-9) ? (x[0] * g1 + x[1] * g2 + x[2] * g3) / r : 0.0;
            const double adp = std::abs(ut + ci * radial);
            m_u = std::max(m_u, au);
            m_std0 = std::max(m_std0, std0_quantity(ci, eps, T, r, au));
            m_std1 = std::max(m_std1, std1_quantity(ci, eps, T, r, adu));
            m_dp = std::max(m_dp, dplus_quantity(ci, eps, T, r, adp));
            if (s.diag.monitor_k >= 1) {
              const MonitorWeights mw = monitor_weights(ci, T, r);
              m_amp = std::max(m_amp, mw.amplitude * au);
              m_grad = std::max(m_grad, mw.gradient * adu);
              m_out = std::max(m_out, mw.outgoing * adp);
            }
            for (std::size_t q = 0; q < plan.norm_cols.size(); ++q) {
              const double w = evaluate_weight(s.diag.norms[q], T, r, s.system.speeds);
              m_norm[q] = std::max(m_norm[q], w * au);
            }
          }
      sb.set(plan.sup_u[c], m_u);
      sb.set(plan.std0[c], m_std0);
      sb.set(plan.std1[c], m_std1);
      sb.set(plan.dplus[c], m_dp);
      if (s.diag.monitor_k >= 1) {
        sb.set(plan.mon_amp[c], m_amp);
        sb.set(plan.mon_grad[c], m_grad);
        sb.set(plan.mon_out[c], m_out);
      }
      for (std::size_t q = 0; q < plan.norm_cols.size(); ++q)
        sb.set(plan.norm_cols[q][c], m_norm[q]);
      result.max_amp = std::max(result.max_amp, m_u);
    }
    sb.commit();
    std::size_t pc = 0;
    for (const auto& cell : probe_cells)
      for (int c = 0; c < nc; ++c)
        result.probe_series[pc++].push_back(sol.field(c)[sol.index(cell[0], cell[1], cell[2])]);
    snapshot(T);
    ++sample_index;
  };

  while (sol.time_cur() + dt <= t_end + 1e-9) {
    if (!sol.step()) break;
    const long k = std::llround(sol.time_cur() / dt);
    if (k % stride == 0) emit(sol.time_cur());
  }

  if (sol.blowup()) {
    result.blew_up = true;
    result.lifespan = sol.blowup()->time;
    result.max_amp = std::max(result.max_amp, sol.blowup()->amplitude);
  } else {
    result.lifespan = t_end;
  }
  result.t = sb.t;
  result.series_names = sb.names;
  result.series = sb.cols;
  return result;
}

// ============================ file emission ===============================

void write_files(RunResult& result, const Scenario& s, const RunOptions& opt, double wall_ms) {
  namespace fs = std::filesystem;
  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);

  {
    std::ofstream f(dir / "series.csv", std::ios::binary);
    f << "t";
    for (const auto& nm : result.series_names) f << ',' << csv_quote(nm);
    f << '\n';
    for (std::size_t i = 0; i < result.t.size(); ++i) {
      f << fmt17(result.t[i]);
      for (const auto& col : result.series) f << ',' << fmt17(col[i]);
      f << '\n';
    }
    result.files_written.push_back("series.csv");
  }
  if (!result.probe_names.empty()) {
    std::ofstream f(dir / "probes.csv", std::ios::binary);
    f << "t";
    for (const auto& nm : result.probe_names) f << ',' << csv_quote(nm);
    f << '\n';
    for (std::size_t i = 0; i < result.t.size(); ++i) {
      f << fmt17(result.t[i]);
      for (const auto& col : result.probe_series) f << ',' << fmt17(col[i]);
      f << '\n';
    }
    result.files_written.push_back("probes.csv");
  }
  {
    const std::vector<double>* el = result.find_series("energy_local");
    if (el && !result.t.empty()) {
      std::ofstream f(dir / "energy.svg", std::ios::binary);
      f << svg_line_plot(result.t, {*el}, {"energy_local"}, "local energy");
      result.files_written.push_back("energy.svg");
    }
  }
  {
    nlohmann::json j;
    j["format_version"] = 1;
    j["tool"] = "nullwave";
    j["version"] = NULLWAVE_VERSION;
    j["config_hash"] = config_hash(s);
    j["mode"] = s.grid.mode == GridMode::radial ? "radial" : "cartesian3d";
    j["spacing"] = s.grid.mode == GridMode::radial ? s.grid.dr : s.grid.dx;
    j["t_max"] = s.grid.t_max;
    j["sponge"] = s.grid.sponge.enabled;
    j["seed"] = opt.seed;
    j["workers"] = opt.workers;
    j["blew_up"] = result.blew_up;
    j["lifespan"] = result.lifespan;
    j["max_amp"] = result.max_amp;
    j["wall_ms"] = wall_ms;
    j["files"] = result.files_written;
    result.manifest_json = j.dump(2) + "\n";
    std::ofstream f(dir / "manifest.json", std::ios::binary);
    f << result.manifest_json;
    result.files_written.push_back("manifest.json");
  }
}

}  // namespace

const std::vector<double>* RunResult::find_series(const std::string& name) const {
  for (std::size_t i = 0; i < series_names.size(); ++i)
    if (series_names[i] == name) return &series[i];
  return nullptr;
}

RunResult run_scenario(const Scenario& s_in, const RunOptions& opt) {
  Scenario s = s_in;
  if (opt.t_max_override > 0.0) s.grid.t_max = opt.t_max_override;
  if (opt.resolution_scale != 1.0) {
    s.grid.dr /= opt.resolution_scale;
    s.grid.dx /= opt.resolution_scale;
  }
  const ValidationReport report = validate_scenario(s);
  if (!report.ok()) throw std::invalid_argument(report.summary());

  const auto start = std::chrono::steady_clock::now();
  RunResult result =
      (s.grid.mode == GridMode::radial) ? run_radial(s, opt) : run_cartesian(s, opt);
  const auto stop = std::chrono::steady_clock::now();
  result.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();

  if (!opt.out_dir.empty()) write_files(result, s, opt, result.wall_ms);
  return result;
}

LifespanSweep sweep_lifespan(const Scenario& templ, const std::vector<double>& eps_list,
                             const RunOptions& opt) {
  std::vector<LifespanEntry> entries(eps_list.size());
  const int workers = std::max(1, opt.workers);
  for (std::size_t begin = 0; begin < eps_list.size(); begin += workers) {
    const std::size_t end = std::min(eps_list.size(), begin + workers);
    std::vector<std::future<LifespanEntry>> futs;
    for (std::size_t i = begin; i < end; ++i) {
      futs.push_back(std::async(std::launch::async, [&templ, &opt, &eps_list, i]() {
        LifespanEntry e;
        e.eps = eps_list[i];
        try {
          Scenario sc = templ;
          sc.data.epsilon = eps_list[i];
          RunOptions o = opt;
          o.out_dir.clear();
          o.workers = 1;
          const RunResult r = run_scenario(sc, o);
          e.survived = !r.blew_up;
          e.lifespan = r.lifespan;
          e.max_amp = r.max_amp;
        } catch (const std::exception& ex) {
          e.error = ex.what();
        }
        return e;
      }));
    }
    for (std::size_t i = begin; i < end; ++i) entries[i] = futs[i - begin].get();
  }
  return fit_lifespan_curve(entries);
}

std::string svg_line_plot(const std::vector<double>& x,
                          const std::vector<std::vector<double>>& ys,
                          const std::vector<std::string>& labels, const std::string& title) {
  const int W = 640, H = 400, ML = 60, MR = 20, MT = 30, MB = 40;
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(W) + "\" height=\"" +
         std::to_string(H) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (x.size() < 2 || ys.empty()) return out + "</svg>\n";

  bool log_y = true;
  double ymin = 1e300, ymax = -1e300;
  for (const auto& col : ys)
    for (double v : col) {
      if (v <= 0.0) log_y = false;
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  auto ty = [&](double v) {
    double lo = ymin, hi = ymax, w = v;
    if (log_y) {
      lo = std::log10(ymin);
      hi = std::log10(ymax);
      w = std::log10(v);
    }
    if (hi <= lo) hi = lo + 1.0;
    return MT + (H - MT - MB) * (1.0 - (w - lo) / (hi - lo));
  };
  const double x0 = x.front(), x1 = x.back();
  auto tx = [&](double v) { return ML + (W - ML - MR) * (v - x0) / std::max(1e-300, x1 - x0); };

  const char* colors[4] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  for (std::size_t k = 0; k < ys.size(); ++k) {
    out += "<polyline fill=\"none\" stroke=\"" + std::string(colors[k % 4]) +
           "\" stroke-width=\"1.5\" points=\"";
    char buf[48];
    for (std::size_t i = 0; i < x.size() && i < ys[k].size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", tx(x[i]), ty(ys[k][i]));
      out += buf;
    }
    out += "\"/>\n";
    if (k < labels.size()) {
      out += "<text x=\"" + std::to_string(ML + 8) + "\" y=\"" +
             std::to_string(MT + 16 + 16 * static_cast<int>(k)) + "\" fill=\"" + colors[k % 4] +
             "\" font-size=\"12\">" + labels[k] + "</text>\n";
    }
  }
  out += "<line x1=\"" + std::to_string(ML) + "\" y1=\"" + std::to_string(H - MB) + "\" x2=\"" +
         std::to_string(W - MR) + "\" y2=\"" + std::to_string(H - MB) +
         "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + std::to_string(ML) + "\" y1=\"" + std::to_string(MT) + "\" x2=\"" +
         std::to_string(ML) + "\" y2=\"" + std::to_string(H - MB) + "\" stroke=\"black\"/>\n";
  out += "<text x=\"" + std::to_string(W / 2) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" +
         title + "</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace nullwave
