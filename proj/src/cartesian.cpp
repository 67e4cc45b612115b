#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "nullwave/constants.hpp"
#include "nullwave/exterior.hpp"

namespace nullwave {

// =========================== cartesian solver =============================

namespace {

double outgoing_rate(const RadialProfile& phi, double c, double rho) {
  if (rho < 1e-12) return 0.0;
  return -c * (phi.deriv(rho) + phi.value(rho) / rho);
}

}  // namespace

CartesianSolver::CartesianSolver(const Scenario& s, int workers) : scen_(s), workers_(workers) {
  const Grid& g = s.grid;
  if (g.mode != GridMode::cartesian3d)
    throw std::invalid_argument("cartesian solver needs a cartesian3d grid");
  dx_ = g.dx;
  half_ = g.half_width;
  n_ = 2 * static_cast<int>(std::llround(half_ / dx_)) + 1;
  dt_ = g.cfl * dx_ / s.system.max_speed();
  has_nonlin_ = !s.nonlin.empty();
  workers_ = std::max(1, workers_);

  const std::size_t nn = static_cast<std::size_t>(n_) * n_ * n_;
  const int nc = s.system.size();
  prev_.assign(nc, std::vector<double>(nn, 0.0));
  cur_.assign(nc, std::vector<double>(nn, 0.0));
  next_.assign(nc, std::vector<double>(nn, 0.0));
  mask_.assign(nn, 0);
  sponge_.assign(nn, 0.0);

  const SpongeSpec& sp = g.sponge;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        const Vec3 x{coord(i), coord(j), coord(k)};
        const std::size_t idx = index(i, j, k);
        if (g.obstacle && norm3(x) <= 1.0) mask_[idx] = 1;
        if (sp.enabled) {
          const double d = std::max({std::abs(x[0]), std::abs(x[1]), std::abs(x[2])});
          const double xi = std::clamp((d - (half_ - sp.width)) / sp.width, 0.0, 1.0);
          sponge_[idx] = sp.strength * xi * xi;
        }
      }

  // level 0 from the data, level 1 by a Taylor step consistent with the
  // discrete Laplacian
  const double eps = s.data.epsilon;
  for (int c = 0; c < nc; ++c) {
    const auto& cd = s.data.components[c];
    const Profile3 phi3{cd.phi, s.data.offset};
    const Profile3 psi3{cd.psi, s.data.offset};
    const double ci = s.system.speeds[c];
    auto& u0 = prev_[c];
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) {
          const std::size_t idx = index(i, j, k);
          if (mask_[idx]) continue;
          u0[idx] = eps * phi3.value({coord(i), coord(j), coord(k)});
        }
    auto& u1 = cur_[c];
    const double lam2 = ci * ci * dt_ * dt_ / (dx_ * dx_);
    for (int i = 1; i + 1 < n_; ++i)
      for (int j = 1; j + 1 < n_; ++j)
        for (int k = 1; k + 1 < n_; ++k) {
          const std::size_t idx = index(i, j, k);
          if (mask_[idx]) continue;
          const Vec3 x{coord(i), coord(j), coord(k)};
          double psi_val;
          if (cd.psi_outgoing) {
            Vec3 rel{x[0] - s.data.offset[0], x[1] - s.data.offset[1], x[2] - s.data.offset[2]};
            psi_val = eps * outgoing_rate(cd.phi, ci, norm3(rel));
          } else {
            psi_val = eps * psi3.value(x);
          }
          const double lap = u0[index(i + 1, j, k)] + u0[index(i - 1, j, k)] +
                             u0[index(i, j + 1, k)] + u0[index(i, j - 1, k)] +
                             u0[index(i, j, k + 1)] + u0[index(i, j, k - 1)] - 6.0 * u0[idx];
          u1[idx] = u0[idx] + dt_ * psi_val + 0.5 * lam2 * lap;
        }
  }
  if (has_nonlin_) {
    // dt^2/2 * F at t = 0, from analytic jets
    std::vector<ComponentJet> jets(nc);
    for (int i = 1; i + 1 < n_; ++i)
      for (int j = 1; j + 1 < n_; ++j)
        for (int k = 1; k + 1 < n_; ++k) {
          const std::size_t idx = index(i, j, k);
          if (mask_[idx]) continue;
          const Vec3 x{coord(i), coord(j), coord(k)};
          for (int c = 0; c < nc; ++c) {
            const auto& cd = s.data.components[c];
            const Profile3 phi3{cd.phi, s.data.offset};
            ComponentJet jet;
            jet.u = eps * phi3.value(x);
            const Vec3 gr = phi3.gradient(x);
            jet.du[1] = eps * gr[0];
            jet.du[2] = eps * gr[1];
            jet.du[3] = eps * gr[2];
            if (cd.psi_outgoing) {
              Vec3 rel{x[0] - s.data.offset[0], x[1] - s.data.offset[1], x[2] - s.data.offset[2]};
              jet.du[0] = eps * outgoing_rate(cd.phi, s.system.speeds[c], norm3(rel));
            } else {
              jet.du[0] = eps * Profile3{cd.psi, s.data.offset}.value(x);
            }
            jets[c] = jet;
          }
          const std::vector<double> f = evaluate_nonlinearity(scen_.nonlin, scen_.system, jets);
          for (int c = 0; c < nc; ++c) cur_[c][idx] += 0.5 * dt_ * dt_ * f[c];
        }
  }
  step_ = 1;

  // seed next_ so the current level always has both neighbors
  for (int c = 0; c < nc; ++c) update_range(c, 1, n_ - 1);
  if (has_nonlin_) {
    pass_ = 1;
    for (int c = 0; c < nc; ++c) update_range(c, 1, n_ - 1);
    pass_ = 0;
  }
}

ComponentJet CartesianSolver::jet_at(int comp, int i, int j, int k) const {
  const auto& u = cur_[comp];
  const std::size_t idx = index(i, j, k);
  ComponentJet jet;
  jet.u = u[idx];
  jet.du[0] = (u[idx] - prev_[comp][idx]) / dt_;
  jet.du[1] = (u[index(i + 1, j, k)] - u[index(i - 1, j, k)]) / (2.0 * dx_);
  jet.du[2] = (u[index(i, j + 1, k)] - u[index(i, j - 1, k)]) / (2.0 * dx_);
  jet.du[3] = (u[index(i, j, k + 1)] - u[index(i, j, k - 1)]) / (2.0 * dx_);
  return jet;
}

void CartesianSolver::update_range(int comp, int i_lo, int i_hi) {
  const double ci = scen_.system.speeds[comp];
  const double lam2 = ci * ci * dt_ * dt_ / (dx_ * dx_);
  const auto& u = cur_[comp];
  const auto& um = prev_[comp];
  auto& un = next_[comp];
  const int nc = static_cast<int>(cur_.size());
  std::vector<ComponentJet> jets(nc);
  for (int i = i_lo; i < i_hi; ++i)
    for (int j = 1; j + 1 < n_; ++j)
      for (int k = 1; k + 1 < n_; ++k) {
        const std::size_t idx = index(i, j, k);
        if (mask_[idx]) {
          un[idx] = 0.0;
          continue;
        }
        const double lap = u[index(i + 1, j, k)] + u[index(i - 1, j, k)] + u[index(i, j + 1, k)] +
                           u[index(i, j - 1, k)] + u[index(i, j, k + 1)] + u[index(i, j, k - 1)] -
                           6.0 * u[idx];
        double rhs = 2.0 * u[idx] + lam2 * lap;
        if (has_nonlin_) {
          for (int c = 0; c < nc; ++c) jets[c] = jet_at(c, i, j, k);
          if (pass_ == 1) {
            // corrector: centered own d_t through the predicted level
            for (int c = 0; c < nc; ++c)
              jets[c].du[0] = (next_[c][idx] - prev_[c][idx]) / (2.0 * dt_);
          }
          rhs += dt_ * dt_ * evaluate_nonlinearity(scen_.nonlin, scen_.system, jets)[comp];
        }
        const double sg = sponge_[idx];
        if (sg > 0.0) {
          un[idx] = (rhs - (1.0 - 0.5 * sg * dt_) * um[idx]) / (1.0 + 0.5 * sg * dt_);
        } else {
          un[idx] = rhs - um[idx];
        }
      }
}

bool CartesianSolver::step() {
  if (blowup_) return false;
  const int nc = static_cast<int>(cur_.size());
  for (int c = 0; c < nc; ++c) {
    std::swap(prev_[c], cur_[c]);
    std::swap(cur_[c], next_[c]);
  }
  ++step_;

  auto run_pass = [&]() {
    for (int c = 0; c < nc; ++c) {
      if (workers_ <= 1 || n_ < 32) {
        update_range(c, 1, n_ - 1);
        continue;
      }
      std::vector<std::thread> pool;
      const int span = (n_ - 2 + workers_ - 1) / workers_;
      for (int w = 0; w < workers_; ++w) {
        const int lo = 1 + w * span;
        const int hi = std::min(n_ - 1, lo + span);
        if (lo < hi) pool.emplace_back([this, c, lo, hi] { update_range(c, lo, hi); });
      }
      for (auto& th : pool) th.join();
    }
  };
  pass_ = 0;
  run_pass();
  if (has_nonlin_) {
    pass_ = 1;
    run_pass();
    pass_ = 0;
  }

  const double t_next = (step_ + 1) * dt_;
  for (int c = 0; c < nc && !blowup_; ++c)
    for (std::size_t idx = 0; idx < next_[c].size(); ++idx) {
      const double a = std::abs(next_[c][idx]);
      if (!std::isfinite(a) || a > tol::blowup_amplitude) {
        blowup_ = RadialBlowup{t_next, c, a};
        break;
      }
    }
  return !blowup_;
}

double CartesianSolver::energy_total() const {
  const double vol = dx_ * dx_ * dx_;
  double total = 0.0;
  for (int c = 0; c < static_cast<int>(cur_.size()); ++c) {
    const double ci = scen_.system.speeds[c];
    double kin = 0.0, pot = 0.0;
    const auto& a = cur_[c];
    const auto& b = next_[c];
    for (std::size_t idx = 0; idx < a.size(); ++idx) {
      const double v = (b[idx] - a[idx]) / dt_;
      kin += v * v;
    }
    for (int i = 0; i + 1 < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          pot += (b[index(i + 1, j, k)] - b[index(i, j, k)]) *
                 (a[index(i + 1, j, k)] - a[index(i, j, k)]);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j + 1 < n_; ++j)
        for (int k = 0; k < n_; ++k)
          pot += (b[index(i, j + 1, k)] - b[index(i, j, k)]) *
                 (a[index(i, j + 1, k)] - a[index(i, j, k)]);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k + 1 < n_; ++k)
          pot += (b[index(i, j, k + 1)] - b[index(i, j, k)]) *
                 (a[index(i, j, k + 1)] - a[index(i, j, k)]);
    pot *= ci * ci / (dx_ * dx_);
    total += 0.5 * vol * (kin + pot);
  }
  return total;
}

double CartesianSolver::local_energy(double b) const {
  const double vol = dx_ * dx_ * dx_;
  double total = 0.0;
  for (int c = 0; c < static_cast<int>(cur_.size()); ++c) {
    double s_u = 0.0, s_t = 0.0, s_g = 0.0;
    for (int i = 1; i + 1 < n_; ++i)
      for (int j = 1; j + 1 < n_; ++j)
        for (int k = 1; k + 1 < n_; ++k) {
          const Vec3 x{coord(i), coord(j), coord(k)};
          if (norm3(x) > b) continue;
          const std::size_t idx = index(i, j, k);
          if (mask_[idx]) continue;
          const auto& u = cur_[c];
          const double ut = (next_[c][idx] - prev_[c][idx]) / (2.0 * dt_);
          const double g1 = (u[index(i + 1, j, k)] - u[index(i - 1, j, k)]) / (2.0 * dx_);
          const double g2 = (u[index(i, j + 1, k)] - u[index(i, j - 1, k)]) / (2.0 * dx_);
          const double g3 = (u[index(i, j, k + 1)] - u[index(i, j, k - 1)]) / (2.0 * dx_);
          s_u += u[idx] * u[idx];
          s_t += ut * ut;
          s_g += g1 * g1 + g2 * g2 + g3 * g3;
        }
    total += std::sqrt(vol * s_u) + std::sqrt(vol * s_t) + std::sqrt(vol * s_g);
  }
  return total;
}

double CartesianSolver::max_abs_u() const {
  double out = 0.0;
  for (const auto& u : cur_)
    for (double v : u) out = std::max(out, std::abs(v));
  return out;
}

// ===================== lattice operator applications ======================

LatticeField LatticeField::sample(const std::function<double(double, const Vec3&)>& f, int nt,
                                  int nx, int ny, int nz, double t0, double dt, const Vec3& x0,
                                  double h) {
  LatticeField out;
  out.nt = nt;
  out.nx = nx;
  out.ny = ny;
  out.nz = nz;
  out.t0 = t0;
  out.dt = dt;
  out.x0 = x0;
  out.h = h;
  out.v.resize(static_cast<std::size_t>(nt) * nx * ny * nz);
  for (int it = 0; it < nt; ++it)
    for (int ix = 0; ix < nx; ++ix)
      for (int iy = 0; iy < ny; ++iy)
        for (int iz = 0; iz < nz; ++iz)
          out.at(it, ix, iy, iz) = f(out.tcoord(it), out.xcoord(ix, iy, iz));
  return out;
}

double LatticeField::max_abs_interior() const {
  double out = 0.0;
  for (int it = margin; it < nt - margin; ++it)
    for (int ix = margin; ix < nx - margin; ++ix)
      for (int iy = margin; iy < ny - margin; ++iy)
        for (int iz = margin; iz < nz - margin; ++iz)
          out = std::max(out, std::abs(at(it, ix, iy, iz)));
  return out;
}

namespace {

LatticeField like(const LatticeField& f) {
  LatticeField out = f;
  std::fill(out.v.begin(), out.v.end(), 0.0);
  out.margin = f.margin + 1;
  return out;
}

}  // namespace

LatticeField apply_vector_field(const LatticeField& f, int z) {
  LatticeField out = like(f);
  for (int it = 1; it < f.nt - 1; ++it)
    for (int ix = 1; ix < f.nx - 1; ++ix)
      for (int iy = 1; iy < f.ny - 1; ++iy)
        for (int iz = 1; iz < f.nz - 1; ++iz) {
          const double dt_v = (f.at(it + 1, ix, iy, iz) - f.at(it - 1, ix, iy, iz)) / (2 * f.dt);
          const double d1 = (f.at(it, ix + 1, iy, iz) - f.at(it, ix - 1, iy, iz)) / (2 * f.h);
          const double d2 = (f.at(it, ix, iy + 1, iz) - f.at(it, ix, iy - 1, iz)) / (2 * f.h);
          const double d3 = (f.at(it, ix, iy, iz + 1) - f.at(it, ix, iy, iz - 1)) / (2 * f.h);
          const Vec3 x = f.xcoord(ix, iy, iz);
          double val = 0.0;
          switch (z) {
            case 0: val = dt_v; break;
            case 1: val = d1; break;
            case 2: val = d2; break;
            case 3: val = d3; break;
            case 4: val = x[0] * d2 - x[1] * d1; break;   // Omega_12
            case 5: val = x[0] * d3 - x[2] * d1; break;   // Omega_13
            case 6: val = x[1] * d3 - x[2] * d2; break;   // Omega_23
            default: throw std::invalid_argument("vector field index out of range");
          }
          out.at(it, ix, iy, iz) = val;
        }
  return out;
}

LatticeField apply_box(const LatticeField& f, double c) {
  LatticeField out = like(f);
  for (int it = 1; it < f.nt - 1; ++it)
    for (int ix = 1; ix < f.nx - 1; ++ix)
      for (int iy = 1; iy < f.ny - 1; ++iy)
        for (int iz = 1; iz < f.nz - 1; ++iz) {
          const double c0 = f.at(it, ix, iy, iz);
          const double dtt =
              (f.at(it + 1, ix, iy, iz) - 2 * c0 + f.at(it - 1, ix, iy, iz)) / (f.dt * f.dt);
          const double lap = (f.at(it, ix + 1, iy, iz) + f.at(it, ix - 1, iy, iz) +
                              f.at(it, ix, iy + 1, iz) + f.at(it, ix, iy - 1, iz) +
                              f.at(it, ix, iy, iz + 1) + f.at(it, ix, iy, iz - 1) - 6 * c0) /
                             (f.h * f.h);
          out.at(it, ix, iy, iz) = dtt - c * c * lap;
        }
  return out;
}

LatticeField apply_characteristic(const LatticeField& f, double c, int sign) {
  LatticeField out = like(f);
  for (int it = 1; it < f.nt - 1; ++it)
    for (int ix = 1; ix < f.nx - 1; ++ix)
      for (int iy = 1; iy < f.ny - 1; ++iy)
        for (int iz = 1; iz < f.nz - 1; ++iz) {
          const double dt_v = (f.at(it + 1, ix, iy, iz) - f.at(it - 1, ix, iy, iz)) / (2 * f.dt);
          const double d1 = (f.at(it, ix + 1, iy, iz) - f.at(it, ix - 1, iy, iz)) / (2 * f.h);
          const double d2 = (f.at(it, ix, iy + 1, iz) - f.at(it, ix, iy - 1, iz)) / (2 * f.h);
          const double d3 = (f.at(it, ix, iy, iz + 1) - f.at(it, ix, iy, iz - 1)) / (2 * f.h);
          const Vec3 x = f.xcoord(ix, iy, iz);
          const double r = norm3(x);
          double radial = 0.0;
          if (r > 1e-12) radial = (x[0] * d1 + x[1] * d2 + x[2] * d3) / r;
          out.at(it, ix, iy, iz) = dt_v + sign * c * radial;
        }
  return out;
}

LatticeField lattice_sub(const LatticeField& a, const LatticeField& b) {
  if (a.v.size() != b.v.size()) throw std::invalid_argument("lattice size mismatch");
  LatticeField out = a;
  out.margin = std::max(a.margin, b.margin);
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] -= b.v[i];
  return out;
}

}  // namespace nullwave
