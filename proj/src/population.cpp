#include "fuzzyepi/population.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fuzzyepi/spatial.hpp"

namespace fuzzyepi {

namespace {

constexpr double kBmiLo = 10.0;
constexpr double kBmiHi = 60.0;

void check_range(const char* group, std::pair<int, int> r) {
    if (r.first > r.second) {
        throw std::invalid_argument(std::string("empty age range for group '") + group + "'");
    }
    if (r.first < 0) {
        throw std::invalid_argument(std::string("negative age in range for group '") + group + "'");
    }
}

} // namespace

void DemographicConfig::validate() const {
    if (young_share < 0.0 || adult_share < 0.0 || elderly_share < 0.0) {
        throw std::invalid_argument("group proportions must be non-negative");
    }
    const double total = young_share + adult_share + elderly_share;
    if (std::fabs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("group proportions must sum to 1 (got " +
                                    std::to_string(total) + ")");
    }
    check_range("young", young_age);
    check_range("adult", adult_age);
    check_range("elderly", elderly_age);
    if (!(bmi_sd > 0.0)) throw std::invalid_argument("bmi_sd must be > 0");
    if (!(bmi_mean > 0.0)) throw std::invalid_argument("bmi_mean must be > 0");
    if (!(fragility_alpha > 0.0 && fragility_beta > 0.0)) {
        throw std::invalid_argument("fragility Beta shape parameters must be > 0");
    }
}

std::vector<Agent> sample_population(const DemographicConfig& cfg, std::uint32_t n,
                                     const TorusWorld& world, Rng& rng) {
    cfg.validate();
    if (n < 1) throw std::invalid_argument("population size must be >= 1");
    if (!(world.width > 0.0 && world.height > 0.0)) {
        throw std::invalid_argument("world extents must be > 0");
    }

    std::vector<Agent> agents(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        Agent& a = agents[i];
        a.id = i;

        const double g = rng.next_double();
        std::pair<int, int> range = cfg.elderly_age;
        if (g < cfg.young_share) {
            range = cfg.young_age;
        } else if (g < cfg.young_share + cfg.adult_share) {
            range = cfg.adult_age;
        }
        a.age = rng.uniform_int(range.first, range.second);
        a.bmi = std::clamp(rng.lognormal_mean_sd(cfg.bmi_mean, cfg.bmi_sd), kBmiLo, kBmiHi);
        a.fragility = rng.beta(cfg.fragility_alpha, cfg.fragility_beta);
        a.x = rng.next_double() * world.width;
        a.y = rng.next_double() * world.height;
        a.heading = rng.next_double() * 2.0 * std::numbers::pi;
    }
    return agents;
}

PopulationSummary population_summary(const std::vector<Agent>& agents, const RuleBase& rb) {
    if (agents.empty()) throw std::invalid_argument("population_summary: empty agent list");

    const LinguisticVariable& age_var = rb.age_variable();
    const LinguisticVariable& bmi_var = rb.bmi_variable();
    const MembershipFunction* obese = bmi_var.find_label("obese");

    PopulationSummary s;
    s.group_counts.reserve(age_var.labels.size());
    for (const auto& [label, mf] : age_var.labels) s.group_counts.emplace_back(label, 0);

    double age_sum = 0.0;
    double bmi_sum = 0.0;
    std::size_t obese_count = 0;
    for (const Agent& a : agents) {
        const double x = age_var.clamp(static_cast<double>(a.age));
        std::size_t best = 0;
        double best_deg = -1.0;
        for (std::size_t k = 0; k < age_var.labels.size(); ++k) {
            const double d = age_var.labels[k].second.degree(x);
            if (d >= best_deg) { // ties resolve to the later (older) label
                best_deg = d;
                best = k;
            }
        }
        ++s.group_counts[best].second;
        age_sum += a.age;
        bmi_sum += a.bmi;
        if (obese != nullptr && obese->degree(bmi_var.clamp(a.bmi)) >= 0.5) ++obese_count;
    }
    const double inv_n = 1.0 / static_cast<double>(agents.size());
    s.mean_age = age_sum * inv_n;
    s.mean_bmi = bmi_sum * inv_n;
    s.obese_fraction = static_cast<double>(obese_count) * inv_n;
    return s;
}

} // namespace fuzzyepi
