#include <doctest.h>

#include <cmath>
#include <vector>

#include "nullwave/constants.hpp"
#include "nullwave/exterior.hpp"
#include "nullwave/freefield.hpp"
#include "nullwave/model.hpp"

using namespace nullwave;

namespace {

RadialProfile bump(double amp, double center, double width) {
  RadialProfile p;
  p.kind = RadialProfile::Kind::bump;
  p.amplitude = amp;
  p.center = center;
  p.width = width;
  return p;
}

Scenario radial_scenario(double c, double dr, double r_max, double t_max) {
  Scenario s;
  s.system.speeds = {c};
  s.system.speeds_exact = {Rational(static_cast<long>(c))};
  s.data.epsilon = 0.1;
  s.data.components.resize(1);
  s.data.components[0].phi = bump(1.0, 2.5, 0.5);
  s.grid.mode = GridMode::radial;
  s.grid.obstacle = true;
  s.grid.dr = dr;
  s.grid.r_max = r_max;
  s.grid.t_max = t_max;
  return s;
}

// method of images on r >= 1 for pure displacement data: the odd extension
// of U0 = r eps phi about the obstacle surface, evolved by d'Alembert
double images_U(const RadialProfile& phi, double eps, double c, double t, double r) {
  auto odd = [&](double s) {
    if (s >= 1.0) return s * eps * phi.value(s);
    const double m = 2.0 - s;
    return -(m * eps * phi.value(m));
  };
  return 0.5 * (odd(r - c * t) + odd(r + c * t));
}

void advance_to(RadialSolver& sol, double t) {
  while (sol.newest_time() < t - 1e-12) REQUIRE(sol.step_common());
}

}  // namespace

TEST_SUITE("exterior") {

TEST_CASE("outgoing data transports one node per step without error") {
  Scenario s = radial_scenario(2.0, 0.05, 12.0, 4.0);
  s.data.components[0].psi_outgoing = true;
  RadialSolver sol(s);
  advance_to(sol, 2.0);
  const std::vector<double>* lev = sol.level_at(0, 2.0);
  REQUIRE(lev);
  for (int m = 0; m < sol.n_nodes(); ++m) {
    const double arg = sol.r(m) - 2.0 * 2.0;
    const double want = arg >= 1.0 ? arg * s.data.epsilon * s.data.components[0].phi.value(arg) : 0.0;
    // the only error source is the quadrature seeding the first level;
    // transport itself adds nothing
    CHECK(std::abs((*lev)[m] - want) < 1e-11);
  }
}

TEST_CASE("solution matches the method of images at every node") {
  Scenario s = radial_scenario(1.0, 0.05, 12.0, 8.0);
  RadialSolver sol(s);
  for (double t : {1.0, 2.5, 4.0, 6.0}) {
    advance_to(sol, t);
    const std::vector<double>* lev = sol.level_at(0, t);
    REQUIRE(lev);
    double worst = 0.0;
    for (int m = 0; m < sol.n_nodes(); ++m) {
      const double want = images_U(s.data.components[0].phi, s.data.epsilon, 1.0, t, sol.r(m));
      worst = std::max(worst, std::abs((*lev)[m] - want));
    }
    CHECK(worst <= tol::images_node_agreement);
  }
}

TEST_CASE("the obstacle surface value stays pinned at zero") {
  Scenario s = radial_scenario(1.0, 0.05, 12.0, 6.0);
  RadialSolver sol(s);
  for (int k = 0; k < 120; ++k) {
    REQUIRE(sol.step_common());
    const std::vector<double>* lev = sol.level_at(0, sol.newest_time());
    REQUIRE(lev);
    CHECK((*lev)[0] == 0.0);
  }
}

TEST_CASE("no signal outruns the propagation cone") {
  Scenario s = radial_scenario(1.0, 0.05, 12.0, 6.0);
  RadialSolver sol(s);
  advance_to(sol, 3.0);
  const std::vector<double>* lev = sol.level_at(0, 3.0);
  REQUIRE(lev);
  // data supported in [2, 3]: everything past r = 3 + ct is untouched
  for (int m = 0; m < sol.n_nodes(); ++m)
    if (sol.r(m) > 3.0 + 3.0 + 1e-9) CHECK((*lev)[m] == 0.0);
}

TEST_CASE("the linear solver is linear in the data amplitude") {
  Scenario s = radial_scenario(1.0, 0.05, 12.0, 6.0);
  Scenario s2 = s;
  s2.data.epsilon = 0.3;
  RadialSolver a(s), b(s2);
  advance_to(a, 4.0);
  advance_to(b, 4.0);
  const std::vector<double>*la = a.level_at(0, 4.0), *lb = b.level_at(0, 4.0);
  REQUIRE(la);
  REQUIRE(lb);
  for (int m = 0; m < a.n_nodes(); ++m)
    CHECK(std::abs((*lb)[m] - 3.0 * (*la)[m]) < 1e-13);
}

TEST_CASE("leapfrog energy is conserved through boundary reflections") {
  Scenario s = radial_scenario(1.0, 0.05, 12.0, 100.0);
  RadialSolver sol(s);
  REQUIRE(sol.step_common());
  const double e0 = sol.energy_total();
  REQUIRE(e0 > 0.0);
  double worst = 0.0;
  for (int k = 0; k < 800; ++k) {
    REQUIRE(sol.step_common());
    worst = std::max(worst, std::abs(sol.energy_total() - e0) / e0);
  }
  CHECK(worst <= tol::energy_drift_rel);
}

TEST_CASE("slow components on the common grid match a single-speed run") {
  Scenario two = radial_scenario(1.0, 0.05, 12.0, 6.0);
  two.system.speeds = {1.0, 2.0};
  two.system.speeds_exact = {Rational(1), Rational(2)};
  two.data.components.resize(2);
  two.data.components[1].phi = RadialProfile::make_zero();
  Scenario one = radial_scenario(1.0, 0.05, 12.0, 6.0);

  RadialSolver st(two), so(one);
  CHECK(st.stride(0) == 2);
  CHECK(st.stride(1) == 1);
  CHECK(st.sync_stride() == 2);
  CHECK(st.dt_common() == doctest::Approx(0.025));
  CHECK(st.dt_of(0) == doctest::Approx(0.05));

  advance_to(st, 2.0);
  advance_to(so, 2.0);
  const std::vector<double>*lt = st.level_at(0, 2.0), *lo = so.level_at(0, 2.0);
  REQUIRE(lt);
  REQUIRE(lo);
  for (int m = 0; m < so.n_nodes(); ++m) CHECK(std::abs((*lt)[m] - (*lo)[m]) < 1e-13);
  // the silent fast component stays identically zero
  const std::vector<double>* l1 = st.level_at(1, 2.0);
  REQUIRE(l1);
  for (double v : *l1) CHECK(v == 0.0);
}

TEST_CASE("old levels fall out of the retention window") {
  Scenario s = radial_scenario(1.0, 0.05, 12.0, 6.0);
  RadialSolver sol(s);
  advance_to(sol, 4.0);
  CHECK(sol.level_at(0, 4.0) != nullptr);
  CHECK(sol.level_at(0, 0.5) == nullptr);
  CHECK(sol.level_at(0, 1000.0) == nullptr);
  CHECK(sol.sampleable(4.0 - 2 * sol.dt_of(0), 2));
  CHECK_FALSE(sol.sampleable(4.0, 2));
}

TEST_CASE("focusing self-interaction trips the blow-up detector") {
  Scenario s = radial_scenario(1.0, 0.05, 12.0, 8.0);
  s.data.epsilon = 0.5;
  s.data.components[0].phi = bump(2.0, 2.5, 0.5);
  s.nonlin.add_quadratic(0, 0, 0, 0, 0, 1.0, Rational(1));
  RadialSolver sol(s);
  while (sol.newest_time() < 8.0 && sol.step_common()) {
  }
  REQUIRE(sol.blowup().has_value());
  CHECK(sol.blowup()->component == 0);
  CHECK(sol.blowup()->time > 0.0);
  CHECK(sol.blowup()->time < 8.0);
  CHECK(sol.blowup()->amplitude >= tol::blowup_amplitude);
  // the state is frozen: further stepping refuses and changes nothing
  const double t_frozen = sol.newest_time();
  CHECK_FALSE(sol.step_common());
  CHECK(sol.newest_time() == t_frozen);
}

TEST_CASE("cartesian fields spread at most one node per step") {
  Scenario s;
  s.system.speeds = {1.0};
  s.system.speeds_exact = {Rational(1)};
  s.data.epsilon = 0.1;
  s.data.components.resize(1);
  s.data.components[0].phi = bump(1.0, 0.0, 2.0);
  s.grid.mode = GridMode::cartesian3d;
  s.grid.obstacle = false;
  s.grid.dx = 0.2;
  s.grid.half_width = 6.0;
  s.grid.cfl = 0.5;
  s.grid.t_max = 4.0;
  CartesianSolver sol(s);
  const int n_steps = 10;
  for (int k = 0; k < n_steps; ++k) REQUIRE(sol.step());
  const int mid = sol.n_axis() / 2;
  const std::vector<double>& u = sol.field(0);
  for (int i = 0; i < sol.n_axis(); ++i) {
    const double x = sol.coord(i);
    if (std::abs(x) > 2.0 + (n_steps + 2) * s.grid.dx)
      CHECK(u[sol.index(i, mid, mid)] == 0.0);
  }
}

TEST_CASE("cartesian evolution converges to the spherical means solution") {
  auto run = [](double dx) {
    Scenario s;
    s.system.speeds = {1.0};
    s.system.speeds_exact = {Rational(1)};
    s.data.epsilon = 1.0;
    s.data.components.resize(1);
    s.data.components[0].phi = bump(1.0, 0.0, 2.0);
    s.grid.mode = GridMode::cartesian3d;
    s.grid.obstacle = false;
    s.grid.dx = dx;
    s.grid.half_width = 4.8;
    s.grid.cfl = 0.5;
    s.grid.t_max = 2.0;
    CartesianSolver sol(s);
    while (sol.time_cur() < 1.0 - 1e-9) REQUIRE(sol.step());
    const RadialProfile zero = RadialProfile::make_zero();
    const Scenario& sc = s;
    double err = 0.0;
    const int mid = sol.n_axis() / 2;
    for (double px : {0.6, 1.2, 2.2}) {
      const int i = static_cast<int>(std::llround((px + sc.grid.half_width) / dx));
      const double got = sol.field(0)[sol.index(i, mid, mid)];
      const double want = radial_free_solution(sc.data.components[0].phi, zero, 1.0, 1.0, px);
      err = std::max(err, std::abs(got - want));
    }
    return err;
  };
  const double coarse = run(0.2), fine = run(0.1);
  CHECK(fine < coarse);
  CHECK(coarse / fine > 2.5);
  CHECK(fine < 5e-3);
}

TEST_CASE("masked obstacle nodes hold zero under cartesian stepping") {
  Scenario s;
  s.system.speeds = {1.0};
  s.system.speeds_exact = {Rational(1)};
  s.data.epsilon = 0.2;
  s.data.components.resize(1);
  s.data.components[0].phi = bump(1.0, 0.0, 1.0);
  s.data.offset = {3.0, 0.0, 0.0};
  s.grid.mode = GridMode::cartesian3d;
  s.grid.obstacle = true;
  s.grid.dx = 0.2;
  s.grid.half_width = 6.0;
  s.grid.cfl = 0.5;
  s.grid.t_max = 4.0;
  CartesianSolver sol(s);
  for (int k = 0; k < 30; ++k) REQUIRE(sol.step());
  const int n = sol.n_axis();
  bool any_masked = false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const std::size_t idx = sol.index(i, j, k);
        if (sol.masked(idx)) {
          any_masked = true;
          CHECK(sol.field(0)[idx] == 0.0);
        }
      }
  CHECK(any_masked);
  // and the wave demonstrably reached the obstacle neighborhood
  CHECK(sol.max_abs_u() > 1e-4);
}

TEST_CASE("lattice rotations act correctly on coordinate fields") {
  auto x2 = [](double, const Vec3& x) { return x[1]; };
  auto x1 = [](double, const Vec3& x) { return x[0]; };
  const LatticeField f2 = LatticeField::sample(x2, 5, 7, 7, 7, 0.0, 0.1, {-0.3, -0.3, -0.3}, 0.1);
  const LatticeField f1 = LatticeField::sample(x1, 5, 7, 7, 7, 0.0, 0.1, {-0.3, -0.3, -0.3}, 0.1);
  const LatticeField r2 = apply_vector_field(f2, 4);   // Omega_12 x2 = x1
  const LatticeField r1 = apply_vector_field(f1, 4);   // Omega_12 x1 = -x2
  CHECK(r2.margin == 1);
  const LatticeField d2 = lattice_sub(r2, f1);
  double worst = 0.0;
  for (int it = 1; it < 4; ++it)
    for (int ix = 1; ix < 6; ++ix)
      for (int iy = 1; iy < 6; ++iy)
        for (int iz = 1; iz < 6; ++iz) {
          worst = std::max(worst, std::abs(d2.at(it, ix, iy, iz)));
          worst = std::max(worst, std::abs(r1.at(it, ix, iy, iz) + f2.at(it, ix, iy, iz)));
        }
  CHECK(worst < 1e-12);
}

TEST_CASE("outgoing characteristic derivative annihilates free waves to leading order") {
  // u = p(r - ct)/r solves the wave equation outward; D_+ u = -c p / r^2
  const RadialProfile p = bump(1.0, 0.0, 8.0);
  const double c = 1.0;
  auto u = [&](double t, const Vec3& x) {
    const double r = norm3(x);
    return p.value(r - c * t) / r;
  };
  const LatticeField f =
      LatticeField::sample(u, 7, 9, 9, 9, 1.0, 0.02, {2.0, 1.5, 1.2}, 0.02);
  const LatticeField dp = apply_characteristic(f, c, +1);
  double worst = 0.0;
  for (int it = 1; it < 6; ++it)
    for (int ix = 1; ix < 8; ++ix)
      for (int iy = 1; iy < 8; ++iy)
        for (int iz = 1; iz < 8; ++iz) {
          const Vec3 x = f.xcoord(ix, iy, iz);
          const double r = norm3(x);
          const double want = -c * p.value(r - c * f.tcoord(it)) / (r * r);
          worst = std::max(worst, std::abs(dp.at(it, ix, iy, iz) - want));
        }
  CHECK(worst < 5e-4);
}

TEST_CASE("box and rotation commute on polynomial fields") {
  auto poly = [](double t, const Vec3& x) {
    return x[0] * x[0] * x[1] - t * x[2] * x[2] + x[0] * x[1] * x[2] + t * t * x[0];
  };
  const LatticeField f =
      LatticeField::sample(poly, 7, 9, 9, 9, 0.0, 0.1, {-0.4, -0.4, -0.4}, 0.1);
  const LatticeField a = apply_box(apply_vector_field(f, 4), 1.0);
  const LatticeField b = apply_vector_field(apply_box(f, 1.0), 4);
  const LatticeField d = lattice_sub(a, b);
  CHECK(d.margin == 2);
  CHECK(d.max_abs_interior() < tol::commutator_cubic_abs);
}

}  // TEST_SUITE
