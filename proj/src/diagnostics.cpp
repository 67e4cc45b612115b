#include "nullwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nullwave/weights.hpp"

namespace nullwave {

// ========================== least-squares fits ============================

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit fit;
  fit.n = static_cast<int>(std::min(x.size(), y.size()));
  if (fit.n < 2) return fit;
  double sx = 0, sy = 0;
  for (int i = 0; i < fit.n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / fit.n, my = sy / fit.n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < fit.n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

DecayFit fit_local_energy_decay(const std::vector<double>& t, const std::vector<double>& energy,
                                double t0, double t1) {
  DecayFit out;
  out.model = DecayModel::exponential;
  out.t0 = t0;
  out.t1 = t1;
  if (t1 <= t0) {
    out.degenerate = true;
    out.note = "empty window";
    return out;
  }
  constexpr double kFloor = 1e-280;
  std::vector<double> xs, ys;
  int in_window = 0;
  for (std::size_t i = 0; i < t.size() && i < energy.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    ++in_window;
    if (energy[i] > kFloor) {
      xs.push_back(t[i]);
      ys.push_back(std::log(energy[i]));
    }
  }
  if (in_window == 0) {
    out.degenerate = true;
    out.note = "no samples in window";
    return out;
  }
  // a window that is mostly underflow is a Huygens-style exit, not a decay
  // curve worth fitting
  if (static_cast<int>(xs.size()) < 3 || xs.size() * 2 < static_cast<std::size_t>(in_window)) {
    out.degenerate = true;
    out.note = "energy below floor over most of the window";
    return out;
  }
  const LinearFit fit = least_squares(xs, ys);
  out.rate = -fit.slope;
  out.intercept = fit.intercept;
  out.r2 = fit.r2;
  out.points = fit.n;
  return out;
}

// ====================== pointwise decay surrogates ========================

double std0_quantity(double c, double eps, double t, double r, double u_abs) {
  const double log_factor = std::log1p((1.0 + c * t + r) / (1.0 + std::abs(c * t - r)));
  return bracket(t + r) * u_abs / (eps * log_factor);
}

double std1_quantity(double c, double eps, double t, double r, double du_abs) {
  return bracket(r) * bracket(c * t - r) * du_abs / eps;
}

double dplus_quantity(double c, double eps, double t, double r, double dplus_abs) {
  (void)c;
  return bracket(r) * bracket(t + r) * dplus_abs / (eps * std::log(2.0 + t + r));
}

BoundednessReport check_pointwise_decay(const std::vector<double>& t,
                                        const std::vector<double>& sup_series, double frac) {
  BoundednessReport out;
  out.t = t;
  out.running_sup.reserve(sup_series.size());
  double sup = 0.0;
  for (double v : sup_series) {
    sup = std::max(sup, v);
    out.running_sup.push_back(sup);
  }
  if (out.running_sup.empty()) {
    out.bounded = true;
    return out;
  }
  const std::size_t mid = out.running_sup.size() / 2;
  const double at_mid = out.running_sup[mid];
  const double at_end = out.running_sup.back();
  if (at_mid <= 0.0) {
    out.growth_fraction = (at_end > 0.0) ? 1.0 : 0.0;
  } else {
    out.growth_fraction = at_end / at_mid - 1.0;
  }
  out.bounded = out.growth_fraction < frac;
  return out;
}

// ============================ ray decay fits ==============================

RayDecayReport fit_ray_decay(const std::vector<std::vector<RaySample>>& rays) {
  RayDecayReport out;
  std::vector<double> alphas_d, alphas_g;
  for (const auto& ray : rays) {
    RayDecayReport::PerRay pr;
    double max_d = 0.0, max_g = 0.0;
    for (const auto& s : ray) {
      max_d = std::max(max_d, s.dplus_abs);
      max_g = std::max(max_g, s.grad_abs);
    }
    std::vector<double> x, yd, yg;
    for (const auto& s : ray) {
      if (s.dplus_abs < 1e-13 * max_d || s.grad_abs < 1e-13 * max_g) continue;
      if (s.dplus_abs <= 0.0 || s.grad_abs <= 0.0) continue;
      const double tau = bracket(s.t + s.r);
      x.push_back(std::log(tau));
      yd.push_back(std::log(tau * s.dplus_abs / std::log(2.0 + s.t + s.r)));
      yg.push_back(std::log(tau * s.grad_abs));
    }
    pr.samples = static_cast<int>(x.size());
    if (pr.samples >= 4) {
      const LinearFit fd = least_squares(x, yd);
      const LinearFit fg = least_squares(x, yg);
      pr.alpha_dplus = fd.slope;
      pr.alpha_grad = fg.slope;
      pr.r2_dplus = fd.r2;
      pr.r2_grad = fg.r2;
      pr.valid = true;
      alphas_d.push_back(fd.slope);
      alphas_g.push_back(fg.slope);
    }
    out.rays.push_back(pr);
  }
  if (!alphas_d.empty()) {
    auto median = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      const std::size_t n = v.size();
      return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    out.alpha_dplus = median(alphas_d);
    out.alpha_grad = median(alphas_g);
    out.relative_exponent = out.alpha_dplus - out.alpha_grad;
    out.valid = true;
  }
  return out;
}

// =========================== lifespan sweeps ==============================

std::string LifespanSweep::to_csv() const {
  std::string out = "eps,lifespan,survived,max_amp,error\n";
  char buf[256];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%.17g,%s\n", e.eps, e.lifespan,
                  e.survived ? 1 : 0, e.max_amp, e.error.c_str());
    out += buf;
  }
  return out;
}

LifespanSweep fit_lifespan_curve(const std::vector<LifespanEntry>& entries) {
  LifespanSweep sweep;
  sweep.entries = entries;
  std::vector<const LifespanEntry*> blew;
  for (const auto& e : entries) {
    if (e.eps <= 0.0 || e.survived || !e.error.empty()) continue;
    blew.push_back(&e);
  }
  if (blew.size() < 3) {
    sweep.note = "fewer than 3 blow-up points; fit refused";
    return sweep;
  }
  std::vector<double> x, y;
  for (const auto* e : blew) {
    x.push_back(1.0 / e->eps);
    y.push_back(std::log(e->lifespan));
  }
  sweep.fit = least_squares(x, y);
  sweep.fit_valid = true;

  std::vector<const LifespanEntry*> sorted = blew;
  std::sort(sorted.begin(), sorted.end(),
            [](const LifespanEntry* a, const LifespanEntry* b) { return a->eps < b->eps; });
  sweep.strictly_decreasing = true;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i]->lifespan >= sorted[i - 1]->lifespan) sweep.strictly_decreasing = false;
  return sweep;
}

// ====================== Sobolev-type inequality check =====================

namespace {

// small dense 3-d lattice for the spatial invariant fields
struct Grid3 {
  int n[3] = {0, 0, 0};
  Vec3 x0{0, 0, 0};
  double h = 0.1;
  std::vector<double> v;

  std::size_t idx(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n[1] + j) * n[2] + k;
  }
  Vec3 coord(int i, int j, int k) const {
    return {x0[0] + i * h, x0[1] + j * h, x0[2] + k * h};
  }
};

// z in 0..5: d_1, d_2, d_3, Omega_12, Omega_13, Omega_23
Grid3 apply_spatial_field(const Grid3& f, int z) {
  Grid3 out = f;
  std::fill(out.v.begin(), out.v.end(), 0.0);
  for (int i = 1; i + 1 < f.n[0]; ++i)
    for (int j = 1; j + 1 < f.n[1]; ++j)
      for (int k = 1; k + 1 < f.n[2]; ++k) {
        const double d1 = (f.v[f.idx(i + 1, j, k)] - f.v[f.idx(i - 1, j, k)]) / (2 * f.h);
        const double d2 = (f.v[f.idx(i, j + 1, k)] - f.v[f.idx(i, j - 1, k)]) / (2 * f.h);
        const double d3 = (f.v[f.idx(i, j, k + 1)] - f.v[f.idx(i, j, k - 1)]) / (2 * f.h);
        const Vec3 x = f.coord(i, j, k);
        double val = 0.0;
        switch (z) {
          case 0: val = d1; break;
          case 1: val = d2; break;
          case 2: val = d3; break;
          case 3: val = x[0] * d2 - x[1] * d1; break;
          case 4: val = x[0] * d3 - x[2] * d1; break;
          case 5: val = x[1] * d3 - x[2] * d2; break;
        }
        out.v[out.idx(i, j, k)] = val;
      }
  return out;
}

double l2ic_omega(const Grid3& f) {
  double s = 0.0;
  for (int i = 0; i < f.n[0]; ++i)
    for (int j = 0; j < f.n[1]; ++j)
      for (int k = 0; k < f.n[2]; ++k) {
        const Vec3 x = f.coord(i, j, k);
        if (norm3(x) <= 1.0) continue;   // obstacle interior
        const double v = f.v[f.idx(i, j, k)];
        s += v * v;
      }
  return std::sqrt(s * f.h * f.h * f.h);
}

struct KSTestee {
  std::string name;
  Profile3 phi;
};

double ks_lhs(const Grid3& f) {
  double s = 0.0;
  for (int i = 0; i < f.n[0]; ++i)
    for (int j = 0; j < f.n[1]; ++j)
      for (int k = 0; k < f.n[2]; ++k) {
        const Vec3 x = f.coord(i, j, k);
        if (norm3(x) <= 1.0) continue;
        s = std::max(s, bracket(norm3(x)) * std::abs(f.v[f.idx(i, j, k)]));
      }
  return s;
}

double ks_rhs(const Grid3& f) {
  double total = l2ic_omega(f);
  for (int a = 0; a < 6; ++a) {
    const Grid3 fa = apply_spatial_field(f, a);
    total += l2ic_omega(fa);
    for (int b = 0; b < 6; ++b) total += l2ic_omega(apply_spatial_field(fa, b));
  }
  return total;
}

double ks_ratio_for(const KSTestee& tc, double amp_scale) {
  const RadialProfile& rp = tc.phi.radial;
  const double extent = rp.support_hi();
  Grid3 g;
  g.h = std::max(rp.width / 14.0, 0.01);
  for (int d = 0; d < 3; ++d) {
    const double lo = tc.phi.center[d] - extent - 3 * g.h;
    const double hi = tc.phi.center[d] + extent + 3 * g.h;
    g.x0[d] = lo;
    g.n[d] = static_cast<int>(std::ceil((hi - lo) / g.h)) + 1;
  }
  g.v.resize(static_cast<std::size_t>(g.n[0]) * g.n[1] * g.n[2]);
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k)
        g.v[g.idx(i, j, k)] = amp_scale * tc.phi.value(g.coord(i, j, k));
  const double lhs = ks_lhs(g);
  const double rhs = ks_rhs(g);
  return (rhs > 0.0) ? lhs / rhs : 0.0;
}

}  // namespace

std::string KSReport::to_csv() const {
  std::string out = "name,lhs,rhs,ratio\n";
  char buf[256];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n", e.name.c_str(), e.lhs, e.rhs,
                  e.ratio);
    out += buf;
  }
  return out;
}

KSReport check_klainerman_sobolev() {
  std::vector<KSTestee> family;
  const double widths[5] = {0.6, 0.9, 1.3, 1.8, 2.5};
  for (int w = 0; w < 5; ++w) {
    RadialProfile rp;
    rp.kind = RadialProfile::Kind::gaussian;
    rp.amplitude = 1.0;
    rp.center = 0.0;
    rp.width = widths[w];
    rp.decay = 3.0;
    KSTestee centered{"gauss_w" + std::to_string(w), Profile3{rp, {2.5 + widths[w], 0.0, 0.0}}};
    family.push_back(centered);
    KSTestee shifted{"gauss_s" + std::to_string(w),
                     Profile3{rp, {0.0, 2.0 + widths[w], 1.0 + 0.5 * widths[w]}}};
    family.push_back(shifted);
  }

  KSReport report;
  for (const auto& tc : family) {
    const RadialProfile& rp = tc.phi.radial;
    const double extent = rp.support_hi();
    Grid3 g;
    g.h = std::max(rp.width / 14.0, 0.01);
    for (int d = 0; d < 3; ++d) {
      const double lo = tc.phi.center[d] - extent - 3 * g.h;
      const double hi = tc.phi.center[d] + extent + 3 * g.h;
      g.x0[d] = lo;
      g.n[d] = static_cast<int>(std::ceil((hi - lo) / g.h)) + 1;
    }
    g.v.resize(static_cast<std::size_t>(g.n[0]) * g.n[1] * g.n[2]);
    for (int i = 0; i < g.n[0]; ++i)
      for (int j = 0; j < g.n[1]; ++j)
        for (int k = 0; k < g.n[2]; ++k)
          g.v[g.idx(i, j, k)] = tc.phi.value(g.coord(i, j, k));
    KSEntry entry;
    entry.name = tc.name;
    entry.lhs = ks_lhs(g);
    entry.rhs = ks_rhs(g);
    entry.ratio = (entry.rhs > 0.0) ? entry.lhs / entry.rhs : 0.0;
    report.entries.push_back(entry);
    report.max_ratio = std::max(report.max_ratio, entry.ratio);
  }

  // degree-1 homogeneity of both sides
  const double base = ks_ratio_for(family.front(), 1.0);
  const double scaled = ks_ratio_for(family.front(), 10.0);
  report.scale_drift = (base > 0.0) ? std::abs(scaled / base - 1.0) : 0.0;
  return report;
}

}  // namespace nullwave
