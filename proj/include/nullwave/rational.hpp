#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

// Exact coefficient arithmetic for the null-condition decision procedure.
// Coefficients and propagation speeds enter as decimal literals; parsing
// them as rationals is exact, so equality of speeds and vanishing of
// reduced coefficients are decidable without tolerances.

namespace nullwave {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parses "-12", "3.25", "1e-3", "2.5e2" exactly.  Returns nullopt on
// malformed input.  Plain "1/3" fractions are accepted as well.
std::optional<Rational> parse_rational(const std::string& text);

// Decimal-ish rendering for reports: exact fraction when the denominator
// is not a power of ten times small, else "p/q".
std::string format_rational(const Rational& r);

double to_double(const Rational& r);

}  // namespace nullwave
