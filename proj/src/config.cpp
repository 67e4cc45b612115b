#include "nullwave/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

namespace nullwave {

namespace {

// ============================ low-level lexing ============================

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& s, int line, const std::string& key) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') fail(line, key + ": malformed number '" + s + "'");
  return v;
}

long parse_int(const std::string& s, int line, const std::string& key) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') fail(line, key + ": malformed integer '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s, int line, const std::string& key) {
  if (s == "true" || s == "1" || s == "on") return true;
  if (s == "false" || s == "0" || s == "off") return false;
  fail(line, key + ": expected true/false, got '" + s + "'");
}

Rational parse_exact(const std::string& s, int line, const std::string& key) {
  auto r = parse_rational(s);
  if (!r) fail(line, key + ": malformed coefficient '" + s + "'");
  return *r;
}

// %.17g round-trips through strtod bit for bit
std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Exact decimal expansion when the denominator divides a power of ten,
// else p/q.  Either form re-parses to the identical rational.
std::string fmt_exact(const Rational& r) {
  BigInt num = numerator(r), den = denominator(r);
  if (den == 1) {
    std::ostringstream os;
    os << num;
    return os.str();
  }
  BigInt d = den;
  int twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d == 1) {
    const int k = std::max(twos, fives);
    BigInt scale = 1;
    for (int i = 0; i < k; ++i) scale *= 10;
    BigInt scaled = num * scale / den;
    const bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::ostringstream os;
    os << scaled;
    std::string digits = os.str();
    while (static_cast<int>(digits.size()) <= k) digits.insert(digits.begin(), '0');
    digits.insert(digits.end() - k, '.');
    return (neg ? "-" : "") + digits;
  }
  std::ostringstream os;
  os << num << "/" << den;
  return os.str();
}

// ============================ profile parsing =============================

RadialProfile parse_profile(const std::string& text, int line, const std::string& key) {
  const auto toks = split_ws(text);
  if (toks.empty()) fail(line, key + ": empty profile");
  RadialProfile p;
  const std::string& kind = toks[0];
  if (kind == "zero") {
    if (toks.size() != 1) fail(line, key + ": 'zero' takes no parameters");
    return RadialProfile::make_zero();
  }
  if (kind == "bump") p.kind = RadialProfile::Kind::bump;
  else if (kind == "polybump") p.kind = RadialProfile::Kind::polybump;
  else if (kind == "gaussian") p.kind = RadialProfile::Kind::gaussian;
  else fail(line, key + ": unknown profile kind '" + kind + "'");

  bool saw_amp = false, saw_center = false, saw_width = false;
  for (std::size_t t = 1; t < toks.size(); ++t) {
    const auto eq = toks[t].find('=');
    if (eq == std::string::npos) fail(line, key + ": expected k=v, got '" + toks[t] + "'");
    const std::string k = toks[t].substr(0, eq), v = toks[t].substr(eq + 1);
    if (k == "amp") { p.amplitude = parse_double(v, line, key); saw_amp = true; }
    else if (k == "center") { p.center = parse_double(v, line, key); saw_center = true; }
    else if (k == "width") { p.width = parse_double(v, line, key); saw_width = true; }
    else if (k == "power") {
      if (p.kind != RadialProfile::Kind::polybump) fail(line, key + ": 'power' only applies to polybump");
      p.power = static_cast<int>(parse_int(v, line, key));
      if (p.power < 2) fail(line, key + ": polybump power must be >= 2");
    } else if (k == "decay") {
      if (p.kind != RadialProfile::Kind::gaussian) fail(line, key + ": 'decay' only applies to gaussian");
      p.decay = parse_double(v, line, key);
    } else fail(line, key + ": unknown profile parameter '" + k + "'");
  }
  if (!saw_amp || !saw_center || !saw_width)
    fail(line, key + ": profile needs amp=, center=, width=");
  return p;
}

std::string emit_profile(const RadialProfile& p) {
  if (p.kind == RadialProfile::Kind::zero) return "zero";
  std::ostringstream os;
  switch (p.kind) {
    case RadialProfile::Kind::bump: os << "bump"; break;
    case RadialProfile::Kind::polybump: os << "polybump"; break;
    case RadialProfile::Kind::gaussian: os << "gaussian"; break;
    case RadialProfile::Kind::zero: break;
  }
  os << " amp=" << fmt_double(p.amplitude) << " center=" << fmt_double(p.center)
     << " width=" << fmt_double(p.width);
  if (p.kind == RadialProfile::Kind::polybump) os << " power=" << p.power;
  if (p.kind == RadialProfile::Kind::gaussian) os << " decay=" << fmt_double(p.decay);
  return os.str();
}

// ============================ factor notation =============================

CubicFactor parse_factor(const std::string& tok, int line) {
  CubicFactor f;
  std::string t = tok;
  if (t.rfind("dt", 0) == 0) { f.deriv = 0; t = t.substr(2); }
  else if (t.size() > 1 && t[0] == 'd' && t[1] >= '1' && t[1] <= '3') {
    f.deriv = t[1] - '0';
    t = t.substr(2);
  }
  if (t.empty() || t[0] != 'u') fail(line, "cubic: malformed factor '" + tok + "'");
  f.comp = static_cast<int>(parse_int(t.substr(1), line, "cubic")) - 1;
  return f;
}

std::string emit_factor(const CubicFactor& f) {
  std::string prefix;
  if (f.deriv == 0) prefix = "dt";
  else if (f.deriv > 0) prefix = "d" + std::to_string(f.deriv);
  return prefix + "u" + std::to_string(f.comp + 1);
}

// =============================== sorting ==================================

void canonicalize(Scenario& s) {
  auto& nl = s.nonlin;
  std::sort(nl.null_q0.begin(), nl.null_q0.end(), [](const auto& x, const auto& y) {
    return std::tie(x.i, x.j, x.k) < std::tie(y.i, y.j, y.k);
  });
  std::sort(nl.null_qab.begin(), nl.null_qab.end(), [](const auto& x, const auto& y) {
    return std::tie(x.i, x.j, x.k, x.a, x.b) < std::tie(y.i, y.j, y.k, y.a, y.b);
  });
  std::sort(nl.general_quadratic.begin(), nl.general_quadratic.end(),
            [](const auto& x, const auto& y) {
              return std::tie(x.i, x.j, x.k, x.a, x.b) < std::tie(y.i, y.j, y.k, y.a, y.b);
            });
  std::sort(nl.cubic.begin(), nl.cubic.end(), [](const auto& x, const auto& y) {
    auto key = [](const CubicTerm& t) {
      return std::make_tuple(t.i, t.factors[0].comp, t.factors[0].deriv, t.factors[1].comp,
                             t.factors[1].deriv, t.factors[2].comp, t.factors[2].deriv);
    };
    return key(x) < key(y);
  });
}

}  // namespace

// ================================ parsing =================================

Scenario parse_config_text(const std::string& text) {
  Scenario s;
  s.data.components.clear();

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;

  // deferred per-component data keys (component count may come later)
  std::vector<std::tuple<int, bool, RadialProfile, bool>> profile_entries;  // comp, is_psi, profile, outgoing
  bool saw_components = false;
  long declared_components = 0;
  std::vector<std::string> seen_scalar_keys;

  while (std::getline(in, raw)) {
    ++line;
    std::string l = raw;
    if (auto h = l.find('#'); h != std::string::npos) l = l.substr(0, h);
    l = trim(l);
    if (l.empty()) continue;

    if (l.front() == '[') {
      if (l.back() != ']') fail(line, "unterminated section header");
      section = l.substr(1, l.size() - 2);
      if (section != "system" && section != "nonlinearity" && section != "data" &&
          section != "grid" && section != "diagnostics")
        fail(line, "unknown section [" + section + "]");
      continue;
    }

    const auto eq = l.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(l.substr(0, eq));
    const std::string val = trim(l.substr(eq + 1));
    if (section.empty()) fail(line, "key outside any section");
    const std::string qual = "[" + section + "]." + key;

    const bool repeatable = (section == "nonlinearity") &&
                            (key == "q0" || key == "qab" || key == "quad" || key == "cubic");
    if (!repeatable) {
      if (std::find(seen_scalar_keys.begin(), seen_scalar_keys.end(), qual) !=
          seen_scalar_keys.end())
        fail(line, "duplicate key " + qual);
      seen_scalar_keys.push_back(qual);
    }

    if (section == "system") {
      if (key == "components") {
        declared_components = parse_int(val, line, qual);
        saw_components = true;
      } else if (key == "speeds") {
        for (const auto& t : split_ws(val)) {
          const Rational r = parse_exact(t, line, qual);
          if (!(r > 0)) fail(line, qual + ": speeds must be positive");
          s.system.speeds_exact.push_back(r);
          s.system.speeds.push_back(to_double(r));
        }
      } else fail(line, "unknown key " + qual);

    } else if (section == "nonlinearity") {
      const auto toks = split_ws(val);
      if (key == "q0") {
        if (toks.size() != 4) fail(line, qual + ": expected 'i j k coeff'");
        NullQ0Term t;
        t.i = static_cast<int>(parse_int(toks[0], line, qual)) - 1;
        t.j = static_cast<int>(parse_int(toks[1], line, qual)) - 1;
        t.k = static_cast<int>(parse_int(toks[2], line, qual)) - 1;
        t.coeff_exact = parse_exact(toks[3], line, qual);
        t.coeff = to_double(t.coeff_exact);
        s.nonlin.null_q0.push_back(t);
      } else if (key == "qab") {
        if (toks.size() != 6) fail(line, qual + ": expected 'i j k a b coeff'");
        NullQabTerm t;
        t.i = static_cast<int>(parse_int(toks[0], line, qual)) - 1;
        t.j = static_cast<int>(parse_int(toks[1], line, qual)) - 1;
        t.k = static_cast<int>(parse_int(toks[2], line, qual)) - 1;
        t.a = static_cast<int>(parse_int(toks[3], line, qual));
        t.b = static_cast<int>(parse_int(toks[4], line, qual));
        t.coeff_exact = parse_exact(toks[5], line, qual);
        t.coeff = to_double(t.coeff_exact);
        s.nonlin.null_qab.push_back(t);
      } else if (key == "quad") {
        if (toks.size() != 6) fail(line, qual + ": expected 'i j k a b coeff'");
        const int i = static_cast<int>(parse_int(toks[0], line, qual)) - 1;
        const int j = static_cast<int>(parse_int(toks[1], line, qual)) - 1;
        const int k = static_cast<int>(parse_int(toks[2], line, qual)) - 1;
        const int a = static_cast<int>(parse_int(toks[3], line, qual));
        const int b = static_cast<int>(parse_int(toks[4], line, qual));
        const Rational c = parse_exact(toks[5], line, qual);
        s.nonlin.add_quadratic(i, j, k, a, b, to_double(c), c);
      } else if (key == "cubic") {
        if (toks.size() != 5) fail(line, qual + ": expected 'i f1 f2 f3 coeff'");
        CubicTerm t;
        t.i = static_cast<int>(parse_int(toks[0], line, qual)) - 1;
        for (int f = 0; f < 3; ++f) t.factors[f] = parse_factor(toks[1 + f], line);
        t.coeff = parse_double(toks[4], line, qual);
        s.nonlin.cubic.push_back(t);
      } else fail(line, "unknown key " + qual);

    } else if (section == "data") {
      if (key == "epsilon") {
        s.data.epsilon = parse_double(val, line, qual);
      } else if (key == "offset") {
        const auto toks = split_ws(val);
        if (toks.size() != 3) fail(line, qual + ": expected three coordinates");
        for (int d = 0; d < 3; ++d) s.data.offset[d] = parse_double(toks[d], line, qual);
      } else if (key.rfind("phi_", 0) == 0 || key.rfind("psi_", 0) == 0) {
        const bool is_psi = key[0] == 'p' && key[1] == 's';
        const int comp = static_cast<int>(parse_int(key.substr(4), line, qual)) - 1;
        if (comp < 0) fail(line, qual + ": component index must be >= 1");
        if (is_psi && val == "outgoing")
          profile_entries.emplace_back(comp, true, RadialProfile::make_zero(), true);
        else
          profile_entries.emplace_back(comp, is_psi, parse_profile(val, line, qual), false);
      } else fail(line, "unknown key " + qual);

    } else if (section == "grid") {
      if (key == "mode") {
        if (val == "radial") s.grid.mode = GridMode::radial;
        else if (val == "cartesian3d") s.grid.mode = GridMode::cartesian3d;
        else fail(line, qual + ": expected radial or cartesian3d");
      } else if (key == "obstacle") s.grid.obstacle = parse_bool(val, line, qual);
      else if (key == "dr") s.grid.dr = parse_double(val, line, qual);
      else if (key == "r_max") s.grid.r_max = parse_double(val, line, qual);
      else if (key == "dx") s.grid.dx = parse_double(val, line, qual);
      else if (key == "half_width") s.grid.half_width = parse_double(val, line, qual);
      else if (key == "cfl") s.grid.cfl = parse_double(val, line, qual);
      else if (key == "t_max") s.grid.t_max = parse_double(val, line, qual);
      else if (key == "sponge") s.grid.sponge.enabled = parse_bool(val, line, qual);
      else if (key == "sponge_width") s.grid.sponge.width = parse_double(val, line, qual);
      else if (key == "sponge_strength") s.grid.sponge.strength = parse_double(val, line, qual);
      else fail(line, "unknown key " + qual);

    } else if (section == "diagnostics") {
      if (key == "sample_dt") s.diag.sample_dt = parse_double(val, line, qual);
      else if (key == "local_energy_b") s.diag.local_energy_b = parse_double(val, line, qual);
      else if (key == "monitor_k") s.diag.monitor_k = static_cast<int>(parse_int(val, line, qual));
      else if (key == "snapshots") s.diag.snapshot_every = static_cast<int>(parse_int(val, line, qual));
      else if (key == "probes") {
        for (const auto& t : split_ws(val)) s.diag.probes.push_back(parse_double(t, line, qual));
      } else if (key == "norms") {
        for (const auto& t : split_ws(val)) {
          auto w = WeightSelector::parse(t);
          if (!w) fail(line, qual + ": malformed norm selector '" + t + "'");
          s.diag.norms.push_back(*w);
        }
      } else fail(line, "unknown key " + qual);
    }
  }

  const int n = s.system.size();
  if (n == 0) throw ConfigError("config: [system].speeds is required");
  if (saw_components && declared_components != n)
    throw ConfigError("config: [system].components disagrees with the speeds list");

  s.data.components.resize(n);
  for (const auto& [comp, is_psi, prof, outgoing] : profile_entries) {
    if (comp >= n)
      throw ConfigError("config: data profile for component " + std::to_string(comp + 1) +
                        " but only " + std::to_string(n) + " component(s)");
    auto& c = s.data.components[comp];
    if (outgoing) c.psi_outgoing = true;
    else if (is_psi) c.psi = prof;
    else c.phi = prof;
  }

  canonicalize(s);
  return s;
}

Scenario load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str());
}

// ================================ emission ================================

std::string emit_config(const Scenario& in) {
  Scenario s = in;
  canonicalize(s);
  std::ostringstream os;

  os << "[system]\n";
  os << "components = " << s.system.size() << "\n";
  os << "speeds =";
  for (const auto& c : s.system.speeds_exact) os << " " << fmt_exact(c);
  os << "\n\n";

  os << "[nonlinearity]\n";
  for (const auto& t : s.nonlin.null_q0)
    os << "q0 = " << t.i + 1 << " " << t.j + 1 << " " << t.k + 1 << " "
       << fmt_exact(t.coeff_exact) << "\n";
  for (const auto& t : s.nonlin.null_qab)
    os << "qab = " << t.i + 1 << " " << t.j + 1 << " " << t.k + 1 << " " << t.a << " " << t.b
       << " " << fmt_exact(t.coeff_exact) << "\n";
  for (const auto& t : s.nonlin.general_quadratic)
    os << "quad = " << t.i + 1 << " " << t.j + 1 << " " << t.k + 1 << " " << t.a << " " << t.b
       << " " << fmt_exact(t.coeff_exact) << "\n";
  for (const auto& t : s.nonlin.cubic)
    os << "cubic = " << t.i + 1 << " " << emit_factor(t.factors[0]) << " "
       << emit_factor(t.factors[1]) << " " << emit_factor(t.factors[2]) << " "
       << fmt_double(t.coeff) << "\n";
  os << "\n";

  os << "[data]\n";
  os << "epsilon = " << fmt_double(s.data.epsilon) << "\n";
  os << "offset = " << fmt_double(s.data.offset[0]) << " " << fmt_double(s.data.offset[1]) << " "
     << fmt_double(s.data.offset[2]) << "\n";
  for (int i = 0; i < static_cast<int>(s.data.components.size()); ++i) {
    const auto& c = s.data.components[i];
    os << "phi_" << i + 1 << " = " << emit_profile(c.phi) << "\n";
    os << "psi_" << i + 1 << " = " << (c.psi_outgoing ? "outgoing" : emit_profile(c.psi)) << "\n";
  }
  os << "\n";

  os << "[grid]\n";
  os << "mode = " << (s.grid.mode == GridMode::radial ? "radial" : "cartesian3d") << "\n";
  os << "obstacle = " << (s.grid.obstacle ? "true" : "false") << "\n";
  os << "dr = " << fmt_double(s.grid.dr) << "\n";
  os << "r_max = " << fmt_double(s.grid.r_max) << "\n";
  os << "dx = " << fmt_double(s.grid.dx) << "\n";
  os << "half_width = " << fmt_double(s.grid.half_width) << "\n";
  os << "cfl = " << fmt_double(s.grid.cfl) << "\n";
  os << "t_max = " << fmt_double(s.grid.t_max) << "\n";
  os << "sponge = " << (s.grid.sponge.enabled ? "true" : "false") << "\n";
  os << "sponge_width = " << fmt_double(s.grid.sponge.width) << "\n";
  os << "sponge_strength = " << fmt_double(s.grid.sponge.strength) << "\n";
  os << "\n";

  os << "[diagnostics]\n";
  os << "sample_dt = " << fmt_double(s.diag.sample_dt) << "\n";
  os << "local_energy_b = " << fmt_double(s.diag.local_energy_b) << "\n";
  os << "monitor_k = " << s.diag.monitor_k << "\n";
  os << "snapshots = " << s.diag.snapshot_every << "\n";
  if (!s.diag.probes.empty()) {
    os << "probes =";
    for (double p : s.diag.probes) os << " " << fmt_double(p);
    os << "\n";
  }
  if (!s.diag.norms.empty()) {
    os << "norms =";
    for (const auto& w : s.diag.norms) os << " " << w.label();
    os << "\n";
  }
  return os.str();
}

std::string config_hash(const Scenario& s) {
  const std::string canon = emit_config(s);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nullwave
