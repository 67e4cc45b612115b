#pragma once

#include <stdexcept>
#include <string>

#include "nullwave/model.hpp"

// Scenario files: INI-style sections [system], [nonlinearity], [data],
// [grid], [diagnostics].  Keys outside the fixed vocabulary are rejected so
// a typo cannot silently fall back to a default.  Parsing canonicalizes
// (term lists sorted, duplicate monomials merged), and emit() writes the
// canonical form back, so parse(emit(s)) == s field for field and the
// config hash does not depend on key order in the source file.

namespace nullwave {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

Scenario parse_config_text(const std::string& text);
Scenario load_config_file(const std::string& path);

std::string emit_config(const Scenario& s);

// FNV-1a over the canonical emission; hex string.
std::string config_hash(const Scenario& s);

}  // namespace nullwave
