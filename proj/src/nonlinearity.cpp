#include "nullwave/nonlinearity.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace nullwave {

// ========================== pointwise evaluation ==========================

double q0(const ComponentJet& v, const ComponentJet& w, double c) {
  return v.du[0] * w.du[0] - c * c * (v.du[1] * w.du[1] + v.du[2] * w.du[2] + v.du[3] * w.du[3]);
}

double qab(const ComponentJet& v, const ComponentJet& w, int a, int b) {
  return v.du[a] * w.du[b] - v.du[b] * w.du[a];
}

std::vector<double> evaluate_nonlinearity(const NonlinearitySpec& nl, const WaveSystem& sys,
                                          const std::vector<ComponentJet>& jets) {
  std::vector<double> F(sys.size(), 0.0);
  for (const auto& t : nl.null_q0) F[t.i] += t.coeff * q0(jets[t.j], jets[t.k], sys.speeds[t.i]);
  for (const auto& t : nl.null_qab) F[t.i] += t.coeff * qab(jets[t.j], jets[t.k], t.a, t.b);
  for (const auto& t : nl.general_quadratic)
    F[t.i] += t.coeff * jets[t.j].du[t.a] * jets[t.k].du[t.b];
  for (const auto& t : nl.cubic) {
    double prod = t.coeff;
    for (const auto& f : t.factors)
      prod *= (f.deriv < 0) ? jets[f.comp].u : jets[f.comp].du[f.deriv];
    F[t.i] += prod;
  }
  return F;
}

// ===================== pair forms in exact arithmetic =====================

namespace {

using Mat4 = std::array<std::array<Rational, 4>, 4>;

Rational eta(int a, const Rational& c2) { return a == 0 ? Rational(1) : -c2; }

// Symmetric monomial form of every unordered same-speed pair feeding
// component i.  Q_ab couplings drop out (antisymmetric), Q0 couplings land
// on the diagonal.
std::map<std::pair<int, int>, Mat4> same_speed_pair_forms(const NonlinearitySpec& nl,
                                                          const WaveSystem& sys, int i) {
  std::map<std::pair<int, int>, Mat4> forms;
  const Rational c2 = sys.speeds_exact[i] * sys.speeds_exact[i];

  auto slot = [&](int j, int k) -> Mat4& {
    auto key = std::minmax(j, k);
    auto it = forms.find(key);
    if (it == forms.end()) it = forms.emplace(key, Mat4{}).first;
    return it->second;
  };

  for (const auto& t : nl.general_quadratic) {
    if (t.i != i || !sys.same_speed(i, t.j) || !sys.same_speed(i, t.k)) continue;
    Mat4& M = slot(t.j, t.k);
    if (t.j == t.k) {
      if (t.a == t.b) {
        M[t.a][t.a] += t.coeff_exact;
      } else {
        const Rational half = t.coeff_exact / 2;
        M[t.a][t.b] += half;
        M[t.b][t.a] += half;
      }
    } else {
      // canonical slots have j < k; symmetrize over the two factor orders
      const Rational half = t.coeff_exact / 2;
      M[t.a][t.b] += half;
      M[t.b][t.a] += half;
    }
  }
  for (const auto& t : nl.null_q0) {
    if (t.i != i) continue;
    Mat4& M = slot(t.j, t.k);
    for (int a = 0; a < 4; ++a) M[a][a] += t.coeff_exact * eta(a, c2);
  }
  return forms;
}

// Reduction of the symmetric form M modulo X0^2 - c^2 |X'|^2.  The form
// vanishes on the cone iff every returned coefficient is zero.
struct ReducedForm {
  std::array<Rational, 3> t;   // X0 X_b cross terms, b = 1..3
  std::array<Rational, 3> o;   // X_a X_b, (a,b) = (1,2), (1,3), (2,3)
  std::array<Rational, 2> d;   // M_11 - M_33, M_22 - M_33
  Rational e;                  // c^2 M_00 + M_33
  bool zero() const {
    for (const auto& v : t) if (v != 0) return false;
    for (const auto& v : o) if (v != 0) return false;
    for (const auto& v : d) if (v != 0) return false;
    return e == 0;
  }
};

ReducedForm reduce_mod_cone(const Mat4& M, const Rational& c2) {
  ReducedForm r;
  for (int b = 1; b <= 3; ++b) r.t[b - 1] = M[0][b];
  r.o[0] = M[1][2];
  r.o[1] = M[1][3];
  r.o[2] = M[2][3];
  r.d[0] = M[1][1] - M[3][3];
  r.d[1] = M[2][2] - M[3][3];
  r.e = c2 * M[0][0] + M[3][3];
  return r;
}

Rational eval_form(const Mat4& M, const std::array<Rational, 4>& X) {
  Rational v = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (M[a][b] != 0) v += M[a][b] * X[a] * X[b];
  return v;
}

// A rational cone point (sigma*c, omega), |omega| = 1, where the reduced
// form is provably nonzero.  Starts from the canonical axis point and
// adjusts only as far as the failure pattern requires.
std::array<Rational, 4> expose_cone_point(const Mat4& M, const ReducedForm& r,
                                          const Rational& c, const Rational& c2) {
  auto axis = [&](int b, bool plus) {
    std::array<Rational, 4> X{plus ? c : -c, 0, 0, 0};
    X[b] = 1;
    return X;
  };
  for (int b = 1; b <= 3; ++b) {
    if (r.t[b - 1] != 0) {
      // the odd part in X0 separates the two signs; at least one is nonzero
      auto Xp = axis(b, true);
      if (eval_form(M, Xp) != 0) return Xp;
      return axis(b, false);
    }
  }
  // pure even form: q_b = c^2 M_00 + M_bb are the axis values
  for (int b = 1; b <= 3; ++b) {
    if (c2 * M[0][0] + M[b][b] != 0) return axis(b, true);
  }
  // axis values all vanish, so an off-diagonal term survives: tilt into the
  // (a,b) plane with the rational direction (3/5, 4/5)
  static const int pairs[3][2] = {{1, 2}, {1, 3}, {2, 3}};
  for (int p = 0; p < 3; ++p) {
    if (r.o[p] != 0) {
      std::array<Rational, 4> X{c, 0, 0, 0};
      X[pairs[p][0]] = Rational(3, 5);
      X[pairs[p][1]] = Rational(4, 5);
      return X;
    }
  }
  throw std::logic_error("expose_cone_point called on a form that vanishes on the cone");
}

std::string render_reduction(const ReducedForm& r) {
  std::ostringstream os;
  const char* names[] = {"X0X1", "X0X2", "X0X3", "X1X2", "X1X3", "X2X3",
                         "X1^2-X3^2", "X2^2-X3^2", "c^2X0^2+X3^2"};
  const Rational* vals[] = {&r.t[0], &r.t[1], &r.t[2], &r.o[0], &r.o[1],
                            &r.o[2], &r.d[0], &r.d[1], &r.e};
  bool any = false;
  for (int n = 0; n < 9; ++n) {
    if (*vals[n] != 0) {
      os << (any ? ", " : "") << names[n] << ": " << format_rational(*vals[n]);
      any = true;
    }
  }
  return any ? os.str() : "all reduced coefficients vanish";
}

}  // namespace

Rational eval_quadratic_exact(const NonlinearitySpec& nl, const WaveSystem& sys, int component,
                              const std::vector<Rational>& mu, const std::array<Rational, 4>& X) {
  // substituted jet: d_a u_j = X_a mu_j
  auto V = [&](int j, int a) { return X[a] * mu[j]; };
  const Rational c2 = sys.speeds_exact[component] * sys.speeds_exact[component];
  Rational F = 0;
  for (const auto& t : nl.null_q0) {
    if (t.i != component) continue;
    Rational s = V(t.j, 0) * V(t.k, 0);
    for (int a = 1; a <= 3; ++a) s -= c2 * V(t.j, a) * V(t.k, a);
    F += t.coeff_exact * s;
  }
  for (const auto& t : nl.null_qab) {
    if (t.i != component) continue;
    F += t.coeff_exact * (V(t.j, t.a) * V(t.k, t.b) - V(t.j, t.b) * V(t.k, t.a));
  }
  for (const auto& t : nl.general_quadratic) {
    if (t.i != component) continue;
    F += t.coeff_exact * V(t.j, t.a) * V(t.k, t.b);
  }
  return F;
}

std::string NullWitness::render() const {
  std::ostringstream os;
  os << "component " << component + 1 << ": F^(2) = " << format_rational(value)
     << " != 0 at X = (";
  for (int a = 0; a < 4; ++a) os << (a ? ", " : "") << format_rational(X[a]);
  os << "), mu = (";
  for (std::size_t j = 0; j < mu.size(); ++j) os << (j ? ", " : "") << format_rational(mu[j]);
  os << "), lambda = nu = mu";
  return os.str();
}

NullVerdict check_null_condition(const NonlinearitySpec& nl, const WaveSystem& sys) {
  NullVerdict verdict;
  std::ostringstream detail;

  for (int i = 0; i < sys.size(); ++i) {
    const Rational c = sys.speeds_exact[i];
    const Rational c2 = c * c;
    auto forms = same_speed_pair_forms(nl, sys, i);
    for (const auto& [pair, M] : forms) {
      const ReducedForm red = reduce_mod_cone(M, c2);
      detail << "component " << i + 1 << " pair (" << pair.first + 1 << "," << pair.second + 1
             << "): " << render_reduction(red) << "\n";
      if (red.zero()) continue;

      if (!verdict.witness) {
        const auto X = expose_cone_point(M, red, c, c2);
        const auto [j, k] = pair;

        // pick the amplitude vector whose exact evaluation is nonzero;
        // distinct pairs occupy distinct mu-monomials, so the fallbacks are
        // exhaustive
        std::vector<std::vector<Rational>> candidates;
        auto basis = [&](int j1, int j2) {
          std::vector<Rational> m(sys.size(), Rational(0));
          m[j1] = 1;
          m[j2] = 1;
          return m;
        };
        if (j == k) {
          candidates.push_back(basis(j, j));
        } else {
          candidates.push_back(basis(j, k));
          candidates.push_back(basis(j, j));
          candidates.push_back(basis(k, k));
        }
        for (const auto& mu : candidates) {
          const Rational val = eval_quadratic_exact(nl, sys, i, mu, X);
          if (val != 0) {
            verdict.witness = NullWitness{i, mu, X, val};
            break;
          }
        }
        if (!verdict.witness)
          throw std::logic_error("null-condition failure without an exposing amplitude");
      }
      verdict.holds = false;
    }
  }
  verdict.detail = detail.str();
  return verdict;
}

// =============================== splitting ================================

double QuadraticSplit::residual_max() const {
  double m = 0.0;
  for (const auto& t : residual) m = std::max(m, std::abs(t.coeff));
  return m;
}

bool QuadraticSplit::residual_zero_exact() const {
  for (const auto& t : residual)
    if (t.coeff_exact != 0) return false;
  return true;
}

QuadraticSplit split_quadratic(const NonlinearitySpec& nl, const WaveSystem& sys) {
  QuadraticSplit out;

  // group same-speed canonical monomials per (i, j, k)
  std::map<std::tuple<int, int, int>, Mat4> groups;
  for (const auto& t : nl.general_quadratic) {
    const bool j_same = sys.same_speed(t.i, t.j);
    const bool k_same = sys.same_speed(t.i, t.k);
    if (!sys.same_speed(t.j, t.k)) {
      out.cross_speed.push_back(t);
    } else if (!j_same || !k_same) {
      out.equal_foreign.push_back(t);
    } else {
      groups[{t.i, t.j, t.k}][t.a][t.b] += t.coeff_exact;
    }
  }

  for (const auto& [key, T] : groups) {
    const auto [i, j, k] = key;
    const Rational c2 = sys.speeds_exact[i] * sys.speeds_exact[i];
    const Rational gram = 1 + 3 * c2 * c2;  // <D_c, D_c> with D_c = diag(1, -c^2 ...)

    auto push_residual = [&](int a, int b, const Rational& v) {
      if (v == 0) return;
      out.residual.push_back({i, j, k, a, b, to_double(v), v});
    };

    if (j == k) {
      // only diagonal slots can match Q0; off-diagonal monomials of a
      // squared factor have no null expression and stay in the residual
      Rational proj = 0;
      for (int a = 0; a < 4; ++a) proj += T[a][a] * eta(a, c2);
      const Rational A = proj / gram;
      if (A != 0) out.null_a.push_back({i, j, k, to_double(A), A});
      for (int a = 0; a < 4; ++a) push_residual(a, a, T[a][a] - A * eta(a, c2));
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) push_residual(a, b, T[a][b]);
    } else {
      // antisymmetric part is exactly the Q_ab span
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
          const Rational w = (T[a][b] - T[b][a]) / 2;
          if (w != 0) out.null_b.push_back({i, j, k, a, b, to_double(w), w});
        }
      // project the symmetric part onto Q0
      Rational proj = 0;
      for (int a = 0; a < 4; ++a) proj += (T[a][a]) * eta(a, c2);
      const Rational A = proj / gram;
      if (A != 0) out.null_a.push_back({i, j, k, to_double(A), A});
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          Rational sym = (T[a][b] + T[b][a]) / 2;
          if (a == b) sym -= A * eta(a, c2);
          push_residual(a, b, sym);
        }
    }
  }
  return out;
}

std::vector<QuadTerm> recompose_split(const QuadraticSplit& split, const WaveSystem& sys) {
  NonlinearitySpec acc;
  auto add = [&](const QuadTerm& t) {
    acc.add_quadratic(t.i, t.j, t.k, t.a, t.b, t.coeff, t.coeff_exact);
  };
  for (const auto& t : split.cross_speed) add(t);
  for (const auto& t : split.equal_foreign) add(t);
  for (const auto& t : split.residual) add(t);
  for (const auto& t : split.null_a) {
    const Rational c2 = sys.speeds_exact[t.i] * sys.speeds_exact[t.i];
    for (int a = 0; a < 4; ++a) {
      const Rational v = t.coeff_exact * eta(a, c2);
      acc.add_quadratic(t.i, t.j, t.k, a, a, to_double(v), v);
    }
  }
  for (const auto& t : split.null_b) {
    acc.add_quadratic(t.i, t.j, t.k, t.a, t.b, t.coeff, t.coeff_exact);
    acc.add_quadratic(t.i, t.j, t.k, t.b, t.a, -t.coeff, -t.coeff_exact);
  }
  // drop exact zeros produced by cancellation
  std::vector<QuadTerm> terms;
  for (const auto& t : acc.general_quadratic)
    if (t.coeff_exact != 0) terms.push_back(t);
  std::sort(terms.begin(), terms.end(), [](const QuadTerm& x, const QuadTerm& y) {
    return std::tie(x.i, x.j, x.k, x.a, x.b) < std::tie(y.i, y.j, y.k, y.a, y.b);
  });
  return terms;
}

}  // namespace nullwave
