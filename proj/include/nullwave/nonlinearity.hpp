#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nullwave/model.hpp"

// Null forms, the exact null-condition decision, and the splitting of a
// general quadratic source into null part, cross-speed part, equal-foreign-
// speed part, and same-speed residual.
//
// The decision procedure works per component i on the unordered pairs
// (j,k) sharing speed c_i.  Each pair's monomial coefficients form a
// symmetric 4x4 form M; the source annihilates forward light-cone data
// exactly when M reduces to zero modulo X0^2 - c^2 |X'|^2.  The reduction
// is carried out in rational arithmetic, so "holds" is a proof, not a
// sampling claim, and a failure yields an exact evaluation point.

namespace nullwave {

// pointwise first-order jet of one component; du = (d_t, d_1, d_2, d_3)
struct ComponentJet {
  double u = 0.0;
  std::array<double, 4> du{0.0, 0.0, 0.0, 0.0};
};

// Q0(v, w; c) = v_t w_t - c^2 grad v . grad w
double q0(const ComponentJet& v, const ComponentJet& w, double c);

// Q_ab(v, w) = (d_a v)(d_b w) - (d_b v)(d_a w), 0 <= a < b <= 3
double qab(const ComponentJet& v, const ComponentJet& w, int a, int b);

// F_i for all i at one point; jets indexed by component
std::vector<double> evaluate_nonlinearity(const NonlinearitySpec& nl, const WaveSystem& sys,
                                          const std::vector<ComponentJet>& jets);

// ======================= exact null-condition check =======================

struct NullWitness {
  int component = 0;                  // i with F_i^{(2)} not null
  std::vector<Rational> mu;           // amplitude vector in Lambda_i
  std::array<Rational, 4> X;          // rational point on the c_i cone
  Rational value;                     // F_i^{(2)} at the substituted jet, nonzero
  std::string render() const;
};

struct NullVerdict {
  bool holds = true;
  std::optional<NullWitness> witness;  // first failure in component/pair order
  std::string detail;                  // per-pair reduction report
};

NullVerdict check_null_condition(const NonlinearitySpec& nl, const WaveSystem& sys);

// Exact evaluation of the quadratic part of F_i on the substituted jet
// d_a u_j = X_a mu_j; used to certify witnesses.
Rational eval_quadratic_exact(const NonlinearitySpec& nl, const WaveSystem& sys, int component,
                              const std::vector<Rational>& mu, const std::array<Rational, 4>& X);

// ============================== splitting =================================

struct QuadraticSplit {
  std::vector<NullQ0Term> null_a;        // Q0 couplings extracted
  std::vector<NullQabTerm> null_b;       // Q_ab couplings extracted
  std::vector<QuadTerm> cross_speed;     // c_j != c_k
  std::vector<QuadTerm> equal_foreign;   // c_j = c_k != c_i
  std::vector<QuadTerm> residual;        // same-speed remainder off the null cone

  double residual_max() const;           // largest |coefficient| in residual
  bool residual_zero_exact() const;
};

// Least-squares extraction of the maximal null combination from the
// canonical same-speed monomials; exact in rational arithmetic, and the
// recomposition null_a + null_b + cross + foreign + residual reproduces
// the input monomial coefficients identically.  residual is empty-or-zero
// exactly when check_null_condition holds.
QuadraticSplit split_quadratic(const NonlinearitySpec& nl, const WaveSystem& sys);

// Expands a split back to canonical monomials (for the recomposition test).
std::vector<QuadTerm> recompose_split(const QuadraticSplit& split, const WaveSystem& sys);

}  // namespace nullwave
