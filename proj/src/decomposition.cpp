#include "nullwave/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nullwave {

// ============================== cutoffs ===================================

namespace {

// ramp polynomial on [0,1]: S(0)=0, S(1)=1, S'..S'''' vanish at both ends
double ramp(double s) {
  return s * s * s * s * s * (126.0 + s * (-420.0 + s * (540.0 + s * (-315.0 + s * 70.0))));
}
double ramp_d1(double s) {
  const double a = s * (1.0 - s);
  return 630.0 * a * a * a * a;
}
double ramp_d2(double s) {
  const double a = s * (1.0 - s);
  return 2520.0 * a * a * a * (1.0 - 2.0 * s);
}

}  // namespace

double CutoffSpec::value(double r) const {
  if (r <= a) return 0.0;
  if (r >= a + 1.0) return 1.0;
  return ramp(r - a);
}

double CutoffSpec::deriv(double r) const {
  if (r <= a || r >= a + 1.0) return 0.0;
  return ramp_d1(r - a);
}

double CutoffSpec::second(double r) const {
  if (r <= a || r >= a + 1.0) return 0.0;
  return ramp_d2(r - a);
}

double CutoffSpec::laplacian(double r) const {
  if (r <= a || r >= a + 1.0) return 0.0;
  return second(r) + 2.0 * deriv(r) / r;
}

double commutator_cutoff(double u, double du_r, const CutoffSpec& psi, double r, double c) {
  if (r <= psi.a || r >= psi.a + 1.0) return 0.0;
  return c * c * (u * psi.laplacian(r) + 2.0 * psi.deriv(r) * du_r);
}

// ======================== retained linear solves ==========================

double LinearRadialRun::du_r(long n, int m) const {
  const double up = levels[n][m + 1] / r(m + 1);
  const double um = levels[n][m - 1] / r(m - 1);
  return (up - um) / (2.0 * dr);
}

LinearRadialRun solve_linear_radial(double c, double r_floor, double dr, double r_max,
                                    double t_max, const HalfLineData* data,
                                    const GridSource* source) {
  LinearRadialRun run;
  run.c = c;
  run.r_floor = r_floor;
  run.dr = dr;
  run.dt = dr / c;
  run.n_nodes = static_cast<int>(std::llround((r_max - r_floor) / dr)) + 1;
  const long steps = std::llround(t_max / run.dt);
  run.levels.reserve(steps + 1);

  std::vector<double> level0(run.n_nodes, 0.0), level1(run.n_nodes, 0.0);
  if (data) {
    for (int m = 1; m + 1 < run.n_nodes; ++m) level0[m] = data->U0(run.r(m));
    for (int m = 1; m + 1 < run.n_nodes; ++m)
      level1[m] = half_line_dalembert(*data, c, r_floor, run.dt, run.r(m));
  }
  if (source) {
    for (int m = 1; m + 1 < run.n_nodes; ++m)
      level1[m] += 0.5 * run.dt * run.dt * run.r(m) * (*source)(0, m, run.r(m));
  }
  run.levels.push_back(std::move(level0));
  run.levels.push_back(std::move(level1));

  for (long n = 1; n < steps; ++n) {
    const auto& cur = run.levels[n];
    const auto& prev = run.levels[n - 1];
    std::vector<double> next(run.n_nodes, 0.0);
    for (int m = 1; m + 1 < run.n_nodes; ++m) {
      next[m] = cur[m + 1] + cur[m - 1] - prev[m];
      if (source) next[m] += run.dt * run.dt * run.r(m) * (*source)(n, m, run.r(m));
    }
    run.levels.push_back(std::move(next));
  }
  return run;
}

// =========================== residual reports =============================

namespace {

void require_unit_divisor(double dr) {
  const double q = 1.0 / dr;
  if (std::abs(q - std::llround(q)) > 1e-9)
    throw std::invalid_argument("decomposition grid spacing must divide 1 exactly");
}

HalfLineData scale_by_cutoff(const HalfLineData& full, const CutoffSpec& psi, bool complement) {
  HalfLineData out;
  const auto u0 = full.U0;
  const auto v0 = full.V0;
  const CutoffSpec p = psi;
  if (complement) {
    out.U0 = [u0, p](double rho) { return (1.0 - p.value(rho)) * u0(rho); };
    out.V0 = [v0, p](double rho) { return (1.0 - p.value(rho)) * v0(rho); };
  } else {
    out.U0 = [u0, p](double rho) { return p.value(rho) * u0(rho); };
    out.V0 = [v0, p](double rho) { return p.value(rho) * v0(rho); };
  }
  out.breakpoints = full.breakpoints;
  out.breakpoints.push_back(psi.a);
  out.breakpoints.push_back(psi.a + 1.0);
  return out;
}

// commutator of psi against a retained run, read at the caller's grid
// through the exact node offset between the two floors
GridSource commutator_source(const LinearRadialRun& inner, const CutoffSpec& psi, double c,
                             double outer_floor) {
  const long off = std::llround((outer_floor - inner.r_floor) / inner.dr);
  const LinearRadialRun* run = &inner;
  const CutoffSpec p = psi;
  return [run, p, c, off](long n, int m, double r) {
    if (r <= p.a || r >= p.a + 1.0) return 0.0;
    const int mi = static_cast<int>(m + off);
    if (mi < 1 || mi + 1 >= run->n_nodes) return 0.0;
    if (n >= static_cast<long>(run->levels.size())) return 0.0;
    return commutator_cutoff(run->u(n, mi), run->du_r(n, mi), p, r, c);
  };
}

struct AssemblyGrids {
  double dr = 0.0, dt = 0.0, R = 0.0, T = 0.0;
  long off = 0;  // free-grid index of the exterior floor r = 1
};

DecompositionReport assemble_common(
    double c, double dr, const std::vector<DecompositionProbe>& probes,
    const std::function<LinearRadialRun(double R, double T, bool exterior, const GridSource*,
                                        int which)>& make_run) {
  require_unit_divisor(dr);
  double t_need = 0.0, r_need = 0.0;
  for (const auto& p : probes) {
    t_need = std::max(t_need, p.t);
    r_need = std::max(r_need, p.r);
  }
  AssemblyGrids g;
  g.dr = dr;
  g.dt = dr / c;
  g.T = t_need + 2.0 * g.dt;
  g.R = std::max(r_need, 5.0) + c * g.T + 2.0;
  g.off = std::llround(1.0 / dr);

  const CutoffSpec psi1{1.0}, psi2{2.0}, psi3{3.0};

  // which: 0 = base inner (free), 3 = complementary inner (exterior),
  // 5 = reference (exterior); sources are attached by the caller
  LinearRadialRun W = make_run(g.R, g.T, false, nullptr, 0);
  GridSource g1 = commutator_source(W, psi1, c, 1.0);
  LinearRadialRun G1 = make_run(g.R, g.T, true, &g1, 1);
  GridSource g2 = commutator_source(G1, psi2, c, 0.0);
  LinearRadialRun G2 = make_run(g.R, g.T, false, &g2, 2);
  LinearRadialRun K3run = make_run(g.R, g.T, true, nullptr, 3);
  GridSource g4 = commutator_source(K3run, psi3, c, 0.0);
  LinearRadialRun K4run = make_run(g.R, g.T, false, &g4, 4);
  LinearRadialRun ref = make_run(g.R, g.T, true, nullptr, 5);

  DecompositionReport report;
  report.dr = dr;
  for (const auto& p : probes) {
    const long n = std::llround(p.t / g.dt);
    const int me = static_cast<int>(std::llround((p.r - 1.0) / dr));
    const int mf = static_cast<int>(me + g.off);
    DecompositionRow row;
    row.probe = {n * g.dt, 1.0 + me * dr};
    const double r = row.probe.r;
    row.base = psi1.value(r) * W.u(n, mf);
    row.k1 = (1.0 - psi2.value(r)) * G1.u(n, me);
    row.k2 = -G2.u(n, mf);
    row.k3 = (1.0 - psi3.value(r)) * K3run.u(n, me);
    row.k4 = -K4run.u(n, mf);
    row.sum = row.base + row.k1 + row.k2 + row.k3 + row.k4;
    row.direct = ref.u(n, me);
    row.residual = std::abs(row.sum - row.direct);
    report.max_residual = std::max(report.max_residual, row.residual);
    report.max_abs_direct = std::max(report.max_abs_direct, std::abs(row.direct));
    if (r > 3.0) {
      const double k1_val = std::abs(G1.u(n, me)) * (1.0 - psi2.value(r));
      report.support_violation = std::max(report.support_violation, k1_val);
    }
    if (r > 4.0) {
      const double k3_val = std::abs(K3run.u(n, me)) * (1.0 - psi3.value(r));
      report.support_violation = std::max(report.support_violation, k3_val);
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace

std::string DecompositionReport::to_csv() const {
  std::string out = "t,r,base,k1,k2,k3,k4,sum,direct,residual\n";
  char buf[256];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  row.probe.t, row.probe.r, row.base, row.k1, row.k2, row.k3, row.k4, row.sum,
                  row.direct, row.residual);
    out += buf;
  }
  return out;
}

DecompositionReport assemble_homogeneous_decomposition(
    const InitialData& v0, double c, const std::vector<DecompositionProbe>& probes, double dr) {
  const HalfLineData full = half_line_data_for(v0, 0, c);
  const CutoffSpec psi2{2.0};
  const HalfLineData far_part = scale_by_cutoff(full, psi2, false);
  const HalfLineData near_part = scale_by_cutoff(full, psi2, true);

  auto make_run = [&](double R, double T, bool exterior, const GridSource* src,
                      int which) -> LinearRadialRun {
    const double floor = exterior ? 1.0 : 0.0;
    const HalfLineData* data = nullptr;
    if (which == 0) data = &far_part;
    if (which == 3) data = &near_part;
    if (which == 5) data = &full;
    return solve_linear_radial(c, floor, dr, R, T, data, src);
  };
  return assemble_common(c, dr, probes, make_run);
}

DecompositionReport assemble_inhomogeneous_decomposition(
    const std::function<double(double, double)>& f, double f_support_outer, double c,
    const std::vector<DecompositionProbe>& probes, double dr) {
  (void)f_support_outer;
  const CutoffSpec psi2{2.0};
  const double dt = dr / c;
  const auto far_source = [&f, psi2, dt](long n, int, double r) {
    return psi2.value(r) * f(n * dt, r);
  };
  const auto near_source = [&f, psi2, dt](long n, int, double r) {
    return (1.0 - psi2.value(r)) * f(n * dt, r);
  };
  const auto full_source = [&f, dt](long n, int, double r) { return f(n * dt, r); };

  auto make_run = [&](double R, double T, bool exterior, const GridSource* src,
                      int which) -> LinearRadialRun {
    const double floor = exterior ? 1.0 : 0.0;
    GridSource own;
    if (which == 0) own = far_source;
    if (which == 3) own = near_source;
    if (which == 5) own = full_source;
    const GridSource* use = src ? src : (own ? &own : nullptr);
    return solve_linear_radial(c, floor, dr, R, T, nullptr, use);
  };
  return assemble_common(c, dr, probes, make_run);
}

// ==================== characteristic-factor identity ======================

RayResidualReport dplus_identity_check(const InitialData& data,
                                       const std::function<double(double, double)>* f, double c,
                                       const std::vector<double>& ray_offsets, double t_max,
                                       double dr) {
  const HalfLineData hd = half_line_data_for(data, 0, c);
  double r_need = 0.0;
  for (double off : ray_offsets) r_need = std::max(r_need, off);
  const double R = r_need + c * t_max + data.support_outer_radius() + 3.0;

  GridSource src;
  if (f) {
    const double dt = dr / c;
    src = [f, dt](long n, int, double r) { return (*f)(n * dt, r); };
  }
  const LinearRadialRun run =
      solve_linear_radial(c, 1.0, dr, R, t_max + 3.0 * dr / c, &hd, f ? &src : nullptr);

  const long N = run.n_steps();
  const int M = run.n_nodes;
  const double dt = run.dt;
  // characteristic first difference on the whole retained lattice
  std::vector<std::vector<double>> dp(N + 1, std::vector<double>(M, 0.0));
  for (long n = 1; n < N; ++n)
    for (int m = 1; m + 1 < M; ++m)
      dp[n][m] = (run.U(n + 1, m) - run.U(n - 1, m)) / (2.0 * dt) +
                 c * (run.U(n, m + 1) - run.U(n, m - 1)) / (2.0 * run.dr);

  RayResidualReport report;
  report.dr = dr;
  for (double off : ray_offsets) {
    const long k0 = std::llround((off - 1.0) / dr);
    for (long n = 2; n + 2 <= N; ++n) {
      const long m = k0 + n;
      if (m < 2 || m + 2 >= M) continue;
      const double dmdp = (dp[n + 1][m] - dp[n - 1][m]) / (2.0 * dt) -
                          c * (dp[n][m + 1] - dp[n][m - 1]) / (2.0 * run.dr);
      const double rm = run.r(static_cast<int>(m));
      const double rhs = f ? rm * (*f)(n * dt, rm) : 0.0;
      report.max_residual = std::max(report.max_residual, std::abs(dmdp - rhs));
      report.max_field = std::max({report.max_field, std::abs(dmdp), std::abs(rhs)});
      ++report.samples;
    }
  }
  return report;
}

}  // namespace nullwave
