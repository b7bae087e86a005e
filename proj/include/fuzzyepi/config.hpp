#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "fuzzyepi/engine.hpp"
#include "fuzzyepi/fuzzy.hpp"

namespace fuzzyepi {

/// Parse or validation failure; the message names the offending key or
/// value and its file:line location.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LoadedScenario {
    ScenarioConfig scenario{};
    RuleBase rules = RuleBase::defaults();
    bool emit_svg = false;
};

/// Sectioned key=value scenario file. Absent keys keep the built-in
/// defaults; unknown sections or keys are rejected. A non-empty [rules]
/// section replaces the default rule list wholesale.
LoadedScenario parse_config(std::istream& in, const std::string& origin);

LoadedScenario load_config(const std::string& path);

} // namespace fuzzyepi
