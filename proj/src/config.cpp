#include "fuzzyepi/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string_view>
#include <vector>

namespace fuzzyepi {

namespace {

struct Location {
    const std::string* origin;
    int line;
};

[[noreturn]] void fail(const Location& loc, const std::string& what) {
    throw ConfigError(*loc.origin + ":" + std::to_string(loc.line) + ": " + what);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
        const std::size_t pos = s.find(sep);
        if (pos == std::string_view::npos) {
            parts.push_back(trim(s));
            return parts;
        }
        parts.push_back(trim(s.substr(0, pos)));
        s.remove_prefix(pos + 1);
    }
}

double parse_double(std::string_view v, const Location& loc) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        fail(loc, "expected a number, got '" + std::string(v) + "'");
    }
    return out;
}

template <typename Int>
Int parse_unsigned(std::string_view v, const Location& loc) {
    Int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        fail(loc, "expected a non-negative integer, got '" + std::string(v) + "'");
    }
    return out;
}

int parse_int(std::string_view v, const Location& loc) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        fail(loc, "expected an integer, got '" + std::string(v) + "'");
    }
    return out;
}

bool parse_bool(std::string_view v, const Location& loc) {
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    fail(loc, "expected a boolean, got '" + std::string(v) + "'");
}

std::array<double, 4> parse_trapezoid(std::string_view v, const Location& loc) {
    const auto parts = split(v, ',');
    if (parts.size() != 4) fail(loc, "expected four comma-separated breakpoints");
    return {parse_double(parts[0], loc), parse_double(parts[1], loc),
            parse_double(parts[2], loc), parse_double(parts[3], loc)};
}

std::pair<double, double> parse_range(std::string_view v, const Location& loc) {
    const auto parts = split(v, ',');
    if (parts.size() != 2) fail(loc, "expected two comma-separated values");
    return {parse_double(parts[0], loc), parse_double(parts[1], loc)};
}

std::pair<int, int> parse_int_range(std::string_view v, const Location& loc) {
    const auto parts = split(v, ',');
    if (parts.size() != 2) fail(loc, "expected two comma-separated integers");
    return {parse_int(parts[0], loc), parse_int(parts[1], loc)};
}

Severity parse_severity(std::string_view v, const Location& loc) {
    if (v == "mild") return Severity::Mild;
    if (v == "severe") return Severity::Severe;
    if (v == "critical") return Severity::Critical;
    fail(loc, "unknown severity '" + std::string(v) + "' (expected mild, severe or critical)");
}

// `age:elderly & bmi:obese -> critical`
FuzzyRule parse_rule(std::string_view text, const LinguisticVariable& age,
                     const LinguisticVariable& bmi, const Location& loc) {
    const std::size_t arrow = text.find("->");
    if (arrow == std::string_view::npos) fail(loc, "rule is missing '->'");

    FuzzyRule rule;
    rule.consequent = parse_severity(trim(text.substr(arrow + 2)), loc);
    for (std::string_view atom : split(text.substr(0, arrow), '&')) {
        const std::size_t colon = atom.find(':');
        if (colon == std::string_view::npos) {
            fail(loc, "rule atom '" + std::string(atom) + "' is not of the form variable:label");
        }
        const std::string_view var = trim(atom.substr(0, colon));
        const std::string label(trim(atom.substr(colon + 1)));
        const LinguisticVariable* lv = nullptr;
        if (var == "age") {
            lv = &age;
        } else if (var == "bmi") {
            lv = &bmi;
        } else {
            fail(loc, "unknown variable '" + std::string(var) + "' (expected age or bmi)");
        }
        if (lv->find_label(label) == nullptr) {
            fail(loc, "variable '" + std::string(var) + "' has no label '" + label + "'");
        }
        rule.antecedent.emplace_back(std::string(var), label);
    }
    if (rule.antecedent.empty()) fail(loc, "rule has no antecedent");
    return rule;
}

void set_label(LinguisticVariable& var, const std::string& label, const std::array<double, 4>& t) {
    for (auto& [name, mf] : var.labels) {
        if (name == label) {
            mf = MembershipFunction(t[0], t[1], t[2], t[3]);
            return;
        }
    }
}

struct FuzzyOverrides {
    std::optional<TNorm> t_norm;
    std::optional<SNorm> s_norm;
    std::optional<std::pair<double, double>> age_universe;
    std::optional<std::pair<double, double>> bmi_universe;
    std::map<std::string, std::array<double, 4>> age_labels;
    std::map<std::string, std::array<double, 4>> bmi_labels;
    std::vector<std::pair<std::string, int>> rule_texts; // (text, line)
};

} // namespace

LoadedScenario parse_config(std::istream& in, const std::string& origin) {
    LoadedScenario loaded;
    ScenarioConfig& sc = loaded.scenario;
    DemographicConfig& dem = sc.demographics;
    FuzzyOverrides fo;

    using Setter = std::function<void(std::string_view, const Location&)>;
    const std::map<std::string, std::map<std::string, Setter>, std::less<>> schema = {
        {"simulation",
         {
             {"n_agents", [&](auto v, auto& l) { sc.n_agents = parse_unsigned<std::uint32_t>(v, l); }},
             {"initial_infected",
              [&](auto v, auto& l) { sc.initial_infected = parse_unsigned<std::uint32_t>(v, l); }},
             {"max_days", [&](auto v, auto& l) { sc.max_days = parse_unsigned<std::uint32_t>(v, l); }},
             {"seed", [&](auto v, auto& l) { sc.seed = parse_unsigned<std::uint64_t>(v, l); }},
         }},
        {"world",
         {
             {"width", [&](auto v, auto& l) { sc.world.width = parse_double(v, l); }},
             {"height", [&](auto v, auto& l) { sc.world.height = parse_double(v, l); }},
         }},
        {"movement",
         {
             {"move_speed", [&](auto v, auto& l) { sc.move_speed = parse_double(v, l); }},
             {"wiggle", [&](auto v, auto& l) { sc.wiggle = parse_double(v, l); }},
         }},
        {"transmission",
         {
             {"beta", [&](auto v, auto& l) { sc.beta = parse_double(v, l); }},
             {"base_radius", [&](auto v, auto& l) { sc.base_radius = parse_double(v, l); }},
             {"variant_factor", [&](auto v, auto& l) { sc.variant_factor = parse_double(v, l); }},
             {"variant_mode",
              [&](auto v, auto& l) {
                  if (v == "zone_area") {
                      sc.variant_mode = VariantMode::ZoneArea;
                  } else if (v == "contact_rate") {
                      sc.variant_mode = VariantMode::ContactRate;
                  } else {
                      fail(l, "unknown variant_mode '" + std::string(v) +
                                  "' (expected zone_area or contact_rate)");
                  }
              }},
             {"fragility_weight",
              [&](auto v, auto& l) { sc.fragility_weight = parse_double(v, l); }},
         }},
        {"disease",
         {
             {"mean_recovery_days",
              [&](auto v, auto& l) { sc.mean_recovery_days = parse_double(v, l); }},
             {"recovery_sd_days",
              [&](auto v, auto& l) { sc.recovery_sd_days = parse_double(v, l); }},
         }},
        {"capacity",
         {
             {"hospital_beds",
              [&](auto v, auto& l) { sc.hospital_beds = parse_unsigned<std::uint32_t>(v, l); }},
             {"icu_beds", [&](auto v, auto& l) { sc.icu_beds = parse_unsigned<std::uint32_t>(v, l); }},
         }},
        {"hazards",
         {
             {"severe_in_bed",
              [&](auto v, auto& l) { sc.hazards.severe_in_bed = parse_double(v, l); }},
             {"severe_no_bed",
              [&](auto v, auto& l) { sc.hazards.severe_no_bed = parse_double(v, l); }},
             {"critical_in_icu",
              [&](auto v, auto& l) { sc.hazards.critical_in_icu = parse_double(v, l); }},
             {"critical_no_icu",
              [&](auto v, auto& l) { sc.hazards.critical_no_icu = parse_double(v, l); }},
         }},
        {"population",
         {
             {"young_share", [&](auto v, auto& l) { dem.young_share = parse_double(v, l); }},
             {"adult_share", [&](auto v, auto& l) { dem.adult_share = parse_double(v, l); }},
             {"elderly_share", [&](auto v, auto& l) { dem.elderly_share = parse_double(v, l); }},
             {"young_age", [&](auto v, auto& l) { dem.young_age = parse_int_range(v, l); }},
             {"adult_age", [&](auto v, auto& l) { dem.adult_age = parse_int_range(v, l); }},
             {"elderly_age", [&](auto v, auto& l) { dem.elderly_age = parse_int_range(v, l); }},
             {"bmi_mean", [&](auto v, auto& l) { dem.bmi_mean = parse_double(v, l); }},
             {"bmi_sd", [&](auto v, auto& l) { dem.bmi_sd = parse_double(v, l); }},
             {"fragility_alpha", [&](auto v, auto& l) { dem.fragility_alpha = parse_double(v, l); }},
             {"fragility_beta", [&](auto v, auto& l) { dem.fragility_beta = parse_double(v, l); }},
         }},
        {"fuzzy",
         {
             {"t_norm",
              [&](auto v, auto& l) {
                  if (v == "min") {
                      fo.t_norm = TNorm::Min;
                  } else if (v == "product") {
                      fo.t_norm = TNorm::Product;
                  } else {
                      fail(l, "unknown t_norm '" + std::string(v) + "' (expected min or product)");
                  }
              }},
             {"s_norm",
              [&](auto v, auto& l) {
                  if (v == "max") {
                      fo.s_norm = SNorm::Max;
                  } else if (v == "probsum") {
                      fo.s_norm = SNorm::ProbSum;
                  } else {
                      fail(l, "unknown s_norm '" + std::string(v) + "' (expected max or probsum)");
                  }
              }},
             {"age_universe", [&](auto v, auto& l) { fo.age_universe = parse_range(v, l); }},
             {"bmi_universe", [&](auto v, auto& l) { fo.bmi_universe = parse_range(v, l); }},
             {"age_young", [&](auto v, auto& l) { fo.age_labels["young"] = parse_trapezoid(v, l); }},
             {"age_adult", [&](auto v, auto& l) { fo.age_labels["adult"] = parse_trapezoid(v, l); }},
             {"age_elderly",
              [&](auto v, auto& l) { fo.age_labels["elderly"] = parse_trapezoid(v, l); }},
             {"bmi_normal",
              [&](auto v, auto& l) { fo.bmi_labels["normal"] = parse_trapezoid(v, l); }},
             {"bmi_overweight",
              [&](auto v, auto& l) { fo.bmi_labels["overweight"] = parse_trapezoid(v, l); }},
             {"bmi_obese", [&](auto v, auto& l) { fo.bmi_labels["obese"] = parse_trapezoid(v, l); }},
         }},
        {"output",
         {
             {"svg", [&](auto v, auto& l) { loaded.emit_svg = parse_bool(v, l); }},
         }},
    };

    std::string section;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const Location loc{&origin, line_no};
        std::string_view body(line);
        if (const std::size_t hash = body.find_first_of("#;"); hash != std::string_view::npos) {
            body = body.substr(0, hash);
        }
        body = trim(body);
        if (body.empty()) continue;

        if (body.front() == '[') {
            if (body.back() != ']') fail(loc, "unterminated section header");
            section = std::string(trim(body.substr(1, body.size() - 2)));
            if (section != "rules" && schema.find(section) == schema.end()) {
                fail(loc, "unknown section [" + section + "]");
            }
            continue;
        }

        const std::size_t eq = body.find('=');
        if (eq == std::string_view::npos) fail(loc, "expected key = value");
        const std::string key(trim(body.substr(0, eq)));
        const std::string_view value = trim(body.substr(eq + 1));
        if (section.empty()) fail(loc, "key '" + key + "' appears before any section");
        if (key.empty()) fail(loc, "empty key");

        if (section == "rules") {
            // Key names in [rules] are arbitrary; every entry is one rule.
            fo.rule_texts.emplace_back(std::string(value), line_no);
            continue;
        }
        const auto& keys = schema.find(section)->second;
        const auto it = keys.find(key);
        if (it == keys.end()) fail(loc, "unknown key '" + key + "' in section [" + section + "]");
        it->second(value, loc);
    }

    // Assemble the rule base: patch the default variables, then parse any
    // replacement rules against them.
    const RuleBase def = RuleBase::defaults();
    LinguisticVariable age = def.age_variable();
    LinguisticVariable bmi = def.bmi_variable();
    if (fo.age_universe) {
        age.lo = fo.age_universe->first;
        age.hi = fo.age_universe->second;
    }
    if (fo.bmi_universe) {
        bmi.lo = fo.bmi_universe->first;
        bmi.hi = fo.bmi_universe->second;
    }
    for (const auto& [label, t] : fo.age_labels) set_label(age, label, t);
    for (const auto& [label, t] : fo.bmi_labels) set_label(bmi, label, t);

    std::vector<FuzzyRule> rules = def.rules();
    if (!fo.rule_texts.empty()) {
        rules.clear();
        for (const auto& [text, line_at] : fo.rule_texts) {
            rules.push_back(parse_rule(text, age, bmi, Location{&origin, line_at}));
        }
    }

    try {
        loaded.rules = RuleBase(std::move(age), std::move(bmi), std::move(rules),
                                fo.t_norm.value_or(def.t_norm()), fo.s_norm.value_or(def.s_norm()));
        loaded.scenario.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return loaded;
}

LoadedScenario load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    return parse_config(in, path);
}

} // namespace fuzzyepi
