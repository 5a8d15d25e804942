#pragma once

#include <string>

#include "craneplan/core_types.hpp"

namespace craneplan {

/// Parse a scenario from its text form. Throws std::runtime_error with a
/// line-tagged message on malformed input. The schema is documented in
/// docs/scenario_format.md.
Scenario parse_scenario(const std::string& text);

Scenario load_scenario(const std::string& path);

/// Deterministic serializer; parse(serialize(s)) == s field by field.
std::string serialize_scenario(const Scenario& s);

void save_scenario(const Scenario& s, const std::string& path);

/// Built-in desk-scale scenarios for the three reference plates
/// ("acrylic_board", "stainless_box", "plywood_board").
Scenario make_reference_scenario(const std::string& name);

}  // namespace craneplan
