#include "nullwave/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace nullwave {

double WaveSystem::max_speed() const {
  double m = 0.0;
  for (double c : speeds) m = std::max(m, c);
  return m;
}

// ====================== nonlinearity canonicalization =====================

void NonlinearitySpec::add_quadratic(int i, int j, int k, int a, int b, double coeff,
                                     const Rational& exact) {
  // fold onto j < k, or j == k with a <= b
  if (j > k || (j == k && a > b)) {
    std::swap(j, k);
    std::swap(a, b);
  }
  for (auto& t : general_quadratic) {
    if (t.i == i && t.j == j && t.k == k && t.a == a && t.b == b) {
      t.coeff += coeff;
      t.coeff_exact += exact;
      return;
    }
  }
  general_quadratic.push_back({i, j, k, a, b, coeff, exact});
}

// ================================= data ===================================

namespace {

void profile_support(const RadialProfile& p, double& lo, double& hi) {
  if (p.is_zero()) return;
  lo = std::min(lo, p.support_lo());
  hi = std::max(hi, p.support_hi());
}

}  // namespace

double InitialData::support_inner_radius() const {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& c : components) {
    profile_support(c.phi, lo, hi);
    if (!c.psi_outgoing) profile_support(c.psi, lo, hi);
  }
  return lo;
}

double InitialData::support_outer_radius() const {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& c : components) {
    profile_support(c.phi, lo, hi);
    if (!c.psi_outgoing) profile_support(c.psi, lo, hi);
  }
  return hi;
}

// ============================ weight selectors ============================

namespace {

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);  // round-trips through strtod
  return buf;
}

}  // namespace

std::string WeightSelector::label() const {
  switch (kind) {
    case Kind::phi: return "phi(" + fmt_g(nu) + ")";
    case Kind::w: return "W(" + fmt_g(nu) + "," + fmt_g(kappa) + ")";
    case Kind::wc: return "Wc(" + fmt_g(nu) + "," + fmt_g(kappa) + "," + fmt_g(speed) + ")";
  }
  return "?";
}

std::optional<WeightSelector> WeightSelector::parse(const std::string& text) {
  auto open = text.find('(');
  auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open) return std::nullopt;
  const std::string name = text.substr(0, open);
  std::string args = text.substr(open + 1, close - open - 1);
  std::replace(args.begin(), args.end(), ',', ' ');
  std::istringstream is(args);
  std::vector<double> v;
  double x;
  while (is >> x) v.push_back(x);

  WeightSelector w;
  if (name == "phi" && v.size() == 1) {
    w.kind = Kind::phi;
    w.nu = v[0];
    return w;
  }
  if (name == "W" && v.size() == 2) {
    w.kind = Kind::w;
    w.nu = v[0];
    w.kappa = v[1];
    return w;
  }
  if (name == "Wc" && v.size() == 3) {
    w.kind = Kind::wc;
    w.nu = v[0];
    w.kappa = v[1];
    w.speed = v[2];
    return w;
  }
  return std::nullopt;
}

// =============================== validation ===============================

namespace {

struct Checker {
  ValidationReport rep;

  void error(const std::string& field, const std::string& msg) {
    rep.errors.push_back({field, msg});
  }
  void warn(const std::string& field, const std::string& msg) {
    rep.warnings.push_back({field, msg});
  }
};

bool comp_ok(const WaveSystem& sys, int idx) { return idx >= 0 && idx < sys.size(); }

// Radial compatibility of the same-pair quadratic block: collect the 4x4
// monomial matrix for an unordered pair and demand that it act on radial
// jets without introducing a direction dependence.
struct PairMatrix {
  double m[4][4] = {};
  bool any = false;
};

}  // namespace

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& e : errors) os << "error: " << e.field << ": " << e.message << "\n";
  for (const auto& w : warnings) os << "warning: " << w.field << ": " << w.message << "\n";
  if (errors.empty()) os << "scenario valid (" << warnings.size() << " warning(s))\n";
  return os.str();
}

ValidationReport validate_scenario(const Scenario& s) {
  Checker ck;
  const auto& sys = s.system;
  const int n = sys.size();

  // ------------------------------ system ----------------------------------
  if (n < 1) ck.error("system.speeds", "at least one component required");
  if (sys.speeds_exact.size() != sys.speeds.size())
    ck.error("system.speeds", "exact and floating speed lists disagree in length");
  for (int i = 0; i < n; ++i) {
    if (!(sys.speeds[i] > 0.0)) ck.error("system.speeds", "speeds must be positive");
    if (i < static_cast<int>(sys.speeds_exact.size()) &&
        std::abs(to_double(sys.speeds_exact[i]) - sys.speeds[i]) > 1e-14 * (1.0 + sys.speeds[i]))
      ck.error("system.speeds", "exact speed does not match floating value");
  }
  if (!ck.rep.errors.empty()) return ck.rep;  // index checks below need a sane system

  // --------------------------- nonlinearity -------------------------------
  for (const auto& t : s.nonlin.null_q0) {
    if (!comp_ok(sys, t.i) || !comp_ok(sys, t.j) || !comp_ok(sys, t.k))
      ck.error("nonlinearity.q0", "component index out of range");
    else if (!sys.same_speed(t.i, t.j) || !sys.same_speed(t.i, t.k))
      ck.error("nonlinearity.q0", "Q0 couplings must join components of one speed");
  }
  for (const auto& t : s.nonlin.null_qab) {
    if (!comp_ok(sys, t.i) || !comp_ok(sys, t.j) || !comp_ok(sys, t.k))
      ck.error("nonlinearity.qab", "component index out of range");
    else {
      if (!(0 <= t.a && t.a < t.b && t.b <= 3))
        ck.error("nonlinearity.qab", "slots must satisfy 0 <= a < b <= 3");
      if (!sys.same_speed(t.i, t.j) || !sys.same_speed(t.i, t.k))
        ck.error("nonlinearity.qab", "Q_ab couplings must join components of one speed");
    }
  }
  for (const auto& t : s.nonlin.general_quadratic) {
    if (!comp_ok(sys, t.i) || !comp_ok(sys, t.j) || !comp_ok(sys, t.k))
      ck.error("nonlinearity.quad", "component index out of range");
    if (t.a < 0 || t.a > 3 || t.b < 0 || t.b > 3)
      ck.error("nonlinearity.quad", "derivative slot out of range");
    if (t.j > t.k || (t.j == t.k && t.a > t.b))
      ck.error("nonlinearity.quad", "term not on canonical slots; use add_quadratic");
  }
  for (const auto& t : s.nonlin.cubic) {
    if (!comp_ok(sys, t.i)) ck.error("nonlinearity.cubic", "component index out of range");
    for (const auto& f : t.factors) {
      if (!comp_ok(sys, f.comp)) ck.error("nonlinearity.cubic", "factor component out of range");
      if (f.deriv < -1 || f.deriv > 3) ck.error("nonlinearity.cubic", "factor derivative slot out of range");
    }
  }

  // ------------------------------- data -----------------------------------
  if (static_cast<int>(s.data.components.size()) != n)
    ck.error("data", "one (phi, psi) pair per component required");
  if (!(s.data.epsilon > 0.0)) ck.error("data.epsilon", "epsilon must be positive");
  for (const auto& c : s.data.components) {
    for (const RadialProfile* p : {&c.phi, &c.psi}) {
      if (p == &c.psi && c.psi_outgoing) continue;
      if (!p->is_zero() && !(p->width > 0.0))
        ck.error("data.profile", "profile width must be positive");
    }
  }

  const double inner = s.data.support_inner_radius();
  const double outer = s.data.support_outer_radius();
  const bool has_data = std::isfinite(inner);
  const double off = norm3(s.data.offset);

  if (s.grid.mode == GridMode::radial && off != 0.0)
    ck.error("data.offset", "radial mode requires origin-centered data");

  if (has_data && s.grid.obstacle) {
    // distance from the origin ball to the data shell about the offset point
    double clearance;
    if (off < inner)
      clearance = inner - off;
    else if (off > outer)
      clearance = off - outer;
    else
      clearance = 0.0;
    if (!(clearance > 1.0))
      ck.error("data", "initial data must vanish on a neighborhood of the unit-ball obstacle");
  }
  if (has_data && !s.grid.obstacle && inner < 0.0)
    ck.error("data", "profile support extends to negative radii");

  // ------------------------------- grid -----------------------------------
  if (!(s.grid.t_max > 0.0)) ck.error("grid.t_max", "t_max must be positive");
  const double cmax = sys.max_speed();
  if (s.grid.mode == GridMode::radial) {
    if (!(s.grid.dr > 0.0)) ck.error("grid.dr", "dr must be positive");
    if (!(s.grid.r_max > s.grid.r_min() + 2.0 * s.grid.dr))
      ck.error("grid.r_max", "radial domain is empty");
    // unit Courant number for the fastest component; slower components step
    // every c_max/c_j common steps, so the ratio must be a whole number
    for (int j = 0; j < n; ++j) {
      const Rational ratio = sys.speeds_exact.empty() ? Rational(1)
                                                      : Rational(*std::max_element(
                                                            sys.speeds_exact.begin(),
                                                            sys.speeds_exact.end())) /
                                                            sys.speeds_exact[j];
      if (denominator(ratio) != 1)
        ck.error("grid.mode",
                 "radial sub-stepping needs integer speed ratios c_max/c_j; "
                 "use cartesian3d for this speed set");
    }
    if (has_data && !s.grid.sponge.enabled && s.grid.r_max < outer + cmax * s.grid.t_max)
      ck.error("grid.r_max",
               "signal horizon exceeds the padded domain; enlarge r_max or enable the sponge");
  } else {
    if (!(s.grid.dx > 0.0)) ck.error("grid.dx", "dx must be positive");
    if (!(s.grid.half_width > 1.0 + 2.0 * s.grid.dx))
      ck.error("grid.half_width", "domain must contain the obstacle with margin");
    const double cfl_max = 1.0 / std::sqrt(3.0);
    if (s.grid.cfl > cfl_max + 1e-12)
      ck.error("grid.cfl", "CFL number exceeds the 3-d stability bound 1/sqrt(3)");
    if (!(s.grid.cfl > 0.0)) ck.error("grid.cfl", "CFL number must be positive");
    if (has_data && !s.grid.sponge.enabled &&
        s.grid.half_width < off + outer + cmax * s.grid.t_max)
      ck.error("grid.half_width",
               "signal horizon exceeds the padded domain; enlarge half_width or enable the sponge");
  }
  if (s.grid.sponge.enabled) {
    if (!(s.grid.sponge.width > 0.0) || !(s.grid.sponge.strength > 0.0))
      ck.error("grid.sponge", "sponge width and strength must be positive");
  }

  // ------------------- radial symmetry of the source ----------------------
  if (s.grid.mode == GridMode::radial) {
    for (const auto& t : s.nonlin.null_qab) {
      if (t.a == 0 && t.j != t.k)
        ck.error("nonlinearity.qab",
                 "Q_0b couplings of distinct components break radial symmetry; "
                 "use cartesian3d");
      else
        ck.warn("nonlinearity.qab", "Q_ab term vanishes identically on radial fields (inert)");
    }
    // group canonical monomials by unordered pair
    std::map<std::pair<int, std::pair<int, int>>, PairMatrix> pairs;
    for (const auto& t : s.nonlin.general_quadratic) {
      auto& pm = pairs[{t.i, {t.j, t.k}}];
      pm.any = true;
      pm.m[t.a][t.b] += t.coeff;
    }
    for (const auto& [key, pm] : pairs) {
      const bool diag_pair = key.second.first == key.second.second;
      bool bad_mixed = false, bad_aniso = false;
      for (int b = 1; b <= 3; ++b)
        if (pm.m[0][b] != 0.0 || pm.m[b][0] != 0.0) bad_mixed = true;
      for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) {
          if (a == b) continue;
          // antisymmetric off-diagonal part acts as a Q_ab and is inert on
          // radial fields; a symmetric remainder is direction dependent
          const double sym = pm.m[a][b] + (diag_pair ? 0.0 : pm.m[b][a]);
          if (diag_pair ? (pm.m[a][b] != 0.0) : (sym != 0.0)) bad_aniso = true;
        }
      if (pm.m[1][1] != pm.m[2][2] || pm.m[2][2] != pm.m[3][3]) bad_aniso = true;
      if (bad_mixed)
        ck.error("nonlinearity.quad",
                 "mixed time-space quadratic terms break radial symmetry; use cartesian3d");
      if (bad_aniso)
        ck.error("nonlinearity.quad",
                 "anisotropic spatial quadratic terms break radial symmetry; use cartesian3d");
    }
    for (const auto& t : s.nonlin.cubic)
      for (const auto& f : t.factors)
        if (f.deriv >= 1)
          ck.error("nonlinearity.cubic",
                   "cubic factors with spatial derivatives break radial symmetry; use cartesian3d");
  }

  // ---------------------------- diagnostics -------------------------------
  if (!(s.diag.sample_dt > 0.0)) ck.error("diagnostics.sample_dt", "sample_dt must be positive");
  if (!(s.diag.local_energy_b > s.grid.r_min()))
    ck.error("diagnostics.local_energy_b", "local energy ball must reach outside the obstacle");
  if (s.diag.monitor_k < 0 || s.diag.monitor_k > 2)
    ck.error("diagnostics.monitor_k", "monitor order limited to k <= 2");
  for (double p : s.diag.probes) {
    const double lim = s.grid.mode == GridMode::radial ? s.grid.r_max : s.grid.half_width;
    if (p <= s.grid.r_min() || p >= lim)
      ck.error("diagnostics.probes", "probe radius outside the computational domain");
  }

  return ck.rep;
}

}  // namespace nullwave
