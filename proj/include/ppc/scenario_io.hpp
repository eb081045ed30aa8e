#pragma once

#include <string>

#include "ppc/simulator.hpp"

namespace ppc {

/// Parses a strict, typed, TOML-style scenario file into a fully validated
/// Scenario. Unknown keys are rejected; syntax errors carry line numbers;
/// invariant breaches name the offending table.
Scenario parse_scenario(const std::string& path);

/// Same, from in-memory text (the path only labels error messages).
Scenario parse_scenario_text(const std::string& text, const std::string& label);

}  // namespace ppc
