#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "nullwave/constants.hpp"
#include "nullwave/diagnostics.hpp"
#include "nullwave/weights.hpp"

using namespace nullwave;

TEST_SUITE("diagnostics") {

TEST_CASE("least squares recovers an exact line") {
  std::vector<double> x, y;
  for (int i = 0; i < 12; ++i) {
    x.push_back(0.3 * i - 1.0);
    y.push_back(3.0 * x.back() - 2.0);
  }
  const LinearFit fit = least_squares(x, y);
  CHECK(fit.n == 12);
  CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(fit.intercept == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("least squares refuses degenerate inputs") {
  CHECK(least_squares({1.0}, {2.0}).n < 2);
  CHECK(least_squares({}, {}).slope == 0.0);
  // vertical data: all x equal
  const LinearFit v = least_squares({2.0, 2.0, 2.0}, {1.0, 5.0, 9.0});
  CHECK(v.slope == 0.0);
  CHECK(v.r2 == 0.0);
}

TEST_CASE("energy fit recovers an exact exponential") {
  std::vector<double> t, e;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(0.5 * i);
    e.push_back(5.0 * std::exp(-0.3 * t.back()));
  }
  const DecayFit fit = fit_local_energy_decay(t, e, 10.0, 80.0);
  CHECK_FALSE(fit.degenerate);
  CHECK(fit.rate == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(5.0)).epsilon(1e-10));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.points > 100);
}

TEST_CASE("energy fit reports degenerate windows instead of fitting them") {
  std::vector<double> t, e;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(0.5 * i);
    e.push_back(t.back() < 10.0 ? std::exp(-t.back()) : 0.0);
  }
  CHECK(fit_local_energy_decay(t, e, 30.0, 20.0).degenerate);
  CHECK(fit_local_energy_decay(t, e, 200.0, 300.0).degenerate);
  // mostly-underflow window: a Huygens exit, not a decay curve
  const DecayFit exit_fit = fit_local_energy_decay(t, e, 0.0, 50.0);
  CHECK(exit_fit.degenerate);
  CHECK(exit_fit.note == "energy below floor over most of the window");
}

TEST_CASE("weighted pointwise quantities match their closed forms") {
  const double log2 = std::log(2.0);
  CHECK(std0_quantity(1.0, 0.1, 0.0, 0.0, 0.05) == doctest::Approx(0.05 / (0.1 * log2)).epsilon(1e-13));
  // <t+r> |u| / (eps log(1 + (1+ct+r)/(1+|ct-r|)))
  {
    const double c = 2.0, eps = 0.2, t = 3.0, r = 1.0, u = 0.7;
    const double lf = std::log1p((1.0 + c * t + r) / (1.0 + std::abs(c * t - r)));
    CHECK(std0_quantity(c, eps, t, r, u) ==
          doctest::Approx(bracket(t + r) * u / (eps * lf)).epsilon(1e-13));
  }
  // <r> <ct - r> |du| / eps
  CHECK(std1_quantity(2.0, 0.1, 1.0, 3.0, 0.4) ==
        doctest::Approx(std::sqrt(10.0) * std::sqrt(2.0) * 0.4 / 0.1).epsilon(1e-13));
  // <r> <t+r> |D+ u| / (eps log(2+t+r))
  CHECK(dplus_quantity(1.0, 0.5, 2.0, 1.0, 0.3) ==
        doctest::Approx(std::sqrt(2.0) * std::sqrt(10.0) * 0.3 /
                        (0.5 * std::log(5.0))).epsilon(1e-13));
}

TEST_CASE("running sup verdicts separate bounded from growing series") {
  std::vector<double> t;
  for (int i = 0; i < 100; ++i) t.push_back(i);

  std::vector<double> bounded;
  for (int i = 0; i < 100; ++i) bounded.push_back(2.0 - 1.0 / (1.0 + i));
  const BoundednessReport ok = check_pointwise_decay(t, bounded, 0.10);
  CHECK(ok.bounded);
  CHECK(ok.growth_fraction >= 0.0);
  CHECK(ok.growth_fraction < 0.02);
  for (std::size_t i = 1; i < ok.running_sup.size(); ++i)
    CHECK(ok.running_sup[i] >= ok.running_sup[i - 1]);

  std::vector<double> growing;
  for (int i = 0; i < 100; ++i) growing.push_back(1.0 + 0.05 * i);
  CHECK_FALSE(check_pointwise_decay(t, growing, 0.10).bounded);

  const BoundednessReport empty = check_pointwise_decay({}, {}, 0.10);
  CHECK(empty.bounded);
  const BoundednessReport zeros = check_pointwise_decay(t, std::vector<double>(100, 0.0), 0.10);
  CHECK(zeros.bounded);
  CHECK(zeros.growth_fraction == 0.0);
}

TEST_CASE("ray fits recover synthetic power laws") {
  auto make_ray = [](double r0, double alpha_d, double alpha_g) {
    std::vector<RaySample> ray;
    for (int i = 0; i < 40; ++i) {
      RaySample s;
      s.t = 1.0 + i;
      s.r = r0 + s.t;
      const double tau = bracket(s.t + s.r);
      s.dplus_abs = 3.0 * std::pow(tau, alpha_d - 1.0) * std::log(2.0 + s.t + s.r);
      s.grad_abs = 0.5 * std::pow(tau, alpha_g - 1.0);
      ray.push_back(s);
    }
    return ray;
  };
  std::vector<std::vector<RaySample>> rays;
  rays.push_back(make_ray(2.0, -1.0, 0.0));
  rays.push_back(make_ray(2.5, -1.2, 0.1));
  rays.push_back(make_ray(3.0, -1.4, -0.1));
  const RayDecayReport rep = fit_ray_decay(rays);
  REQUIRE(rep.valid);
  REQUIRE(rep.rays.size() == 3);
  for (const auto& pr : rep.rays) {
    CHECK(pr.valid);
    CHECK(pr.samples == 40);
    CHECK(pr.r2_dplus > 0.999);
  }
  CHECK(rep.rays[0].alpha_dplus == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(rep.rays[0].alpha_grad == doctest::Approx(0.0).epsilon(1e-9));
  // medians over the three rays
  CHECK(rep.alpha_dplus == doctest::Approx(-1.2).epsilon(1e-9));
  CHECK(rep.alpha_grad == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(rep.relative_exponent == doctest::Approx(-1.2).epsilon(1e-9));
}

TEST_CASE("ray fits discard invalid rays and tiny samples") {
  std::vector<std::vector<RaySample>> rays;
  // too short
  rays.push_back({{1, 3, 0.1, 0.1}, {2, 4, 0.1, 0.1}, {3, 5, 0.1, 0.1}});
  // all-zero ray: every sample culled
  rays.push_back(std::vector<RaySample>(10));
  const RayDecayReport rep = fit_ray_decay(rays);
  CHECK_FALSE(rep.valid);
  CHECK_FALSE(rep.rays[0].valid);
  CHECK_FALSE(rep.rays[1].valid);
}

TEST_CASE("lifespan fit recovers an exact exponential law") {
  std::vector<LifespanEntry> entries;
  for (double eps : {0.4, 0.2, 0.1, 0.05}) {
    LifespanEntry e;
    e.eps = eps;
    e.lifespan = std::exp(1.0 + 0.5 / eps);
    entries.push_back(e);
  }
  const LifespanSweep sweep = fit_lifespan_curve(entries);
  REQUIRE(sweep.fit_valid);
  CHECK(sweep.fit.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sweep.fit.intercept == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sweep.fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sweep.strictly_decreasing);
  CHECK(sweep.to_csv().find("eps,lifespan") == 0);
}

TEST_CASE("lifespan fit excludes survivors, failures, and zero amplitude") {
  std::vector<LifespanEntry> entries;
  for (double eps : {0.4, 0.2, 0.1}) {
    LifespanEntry e;
    e.eps = eps;
    e.lifespan = std::exp(0.5 / eps);
    entries.push_back(e);
  }
  LifespanEntry survivor;
  survivor.eps = 0.05;
  survivor.survived = true;
  survivor.lifespan = 1e9;
  entries.push_back(survivor);
  LifespanEntry zero;
  zero.eps = 0.0;
  zero.lifespan = 7.0;
  entries.push_back(zero);
  LifespanEntry failed;
  failed.eps = 0.3;
  failed.lifespan = 2.0;
  failed.error = "diverged";
  entries.push_back(failed);

  const LifespanSweep sweep = fit_lifespan_curve(entries);
  REQUIRE(sweep.fit_valid);
  CHECK(sweep.fit.n == 3);
  CHECK(sweep.fit.slope == doctest::Approx(0.5).epsilon(1e-10));

  // dropping to two blow-up points refuses the fit
  const LifespanSweep refused = fit_lifespan_curve({entries[0], entries[1], survivor});
  CHECK_FALSE(refused.fit_valid);
  CHECK_FALSE(refused.note.empty());

  // non-monotone lifespans are reported
  std::vector<LifespanEntry> shuffled = {entries[0], entries[1], entries[2]};
  shuffled[2].lifespan = shuffled[1].lifespan * 0.5;   // smaller eps, smaller T
  CHECK_FALSE(fit_lifespan_curve(shuffled).strictly_decreasing);
}

TEST_CASE("bump family satisfies the weighted sup inequality uniformly") {
  const KSReport rep = check_klainerman_sobolev();
  CHECK(rep.entries.size() == 10);
  for (const KSEntry& e : rep.entries) {
    CHECK(e.lhs > 0.0);
    CHECK(e.rhs > 0.0);
    CHECK(e.ratio == doctest::Approx(e.lhs / e.rhs).epsilon(1e-14));
    CHECK(e.ratio <= tol::ks_ratio_bound);
  }
  CHECK(rep.max_ratio > 0.0);
  CHECK(rep.scale_drift <= tol::ks_scale_invariance_rel);
  CHECK(rep.to_csv().find("name,lhs,rhs,ratio") == 0);
}

}  // TEST_SUITE
