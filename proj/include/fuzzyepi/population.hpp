#ifndef FUZZYEPI_POPULATION_HPP
#define FUZZYEPI_POPULATION_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fuzzyepi/fuzzy.hpp"
#include "fuzzyepi/rng.hpp"

namespace fuzzyepi {

struct TorusWorld; // spatial.hpp

/// Demographic sampling parameters. Group shares must sum to 1; ages are
/// integers drawn uniformly within the group's closed range; BMI is a
/// lognormal given by its real-space mean/sd, clamped to [10,60]; the
/// socio-economic fragility index is Beta(alpha,beta) on [0,1].
struct DemographicConfig {
    double young_share = 0.30;
    double adult_share = 0.45;
    double elderly_share = 0.25;
    std::pair<int, int> young_age{0, 29};
    std::pair<int, int> adult_age{30, 59};
    std::pair<int, int> elderly_age{60, 100};
    double bmi_mean = 26.5;
    double bmi_sd = 5.0;
    double fragility_alpha = 2.0;
    double fragility_beta = 5.0;

    void validate() const; // throws std::invalid_argument
};

enum class HealthState : std::uint8_t { Susceptible, Infected, Recovered, Dead };
enum class CareStatus : std::uint8_t { None, HospitalBed, IcuBed };

struct Agent {
    std::uint32_t id = 0;
    int age = 0;
    double bmi = 0.0;
    double fragility = 0.0;
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0; // radians
    HealthState state = HealthState::Susceptible;
    // Valid only once the agent has been infected (infection_day >= 0).
    Severity severity = Severity::Mild;
    int infection_day = -1;
    int recovery_duration = -1; // whole days
    CareStatus care = CareStatus::None;

    bool ever_infected() const noexcept { return infection_day >= 0; }
};

/// Draws n agents from cfg, all Susceptible, ids 0..n-1 in draw order.
/// Sequential by contract: the single stream and the fixed per-agent draw
/// order (group, age, BMI, fragility, x, y, heading) define the result
/// byte-for-byte given (cfg, n, seed stream).
std::vector<Agent> sample_population(const DemographicConfig& cfg, std::uint32_t n,
                                     const TorusWorld& world, Rng& rng);

struct PopulationSummary {
    // One entry per age label, in the variable's label order; an agent
    // counts toward its argmax-degree label, ties toward the later (older)
    // label.
    std::vector<std::pair<std::string, std::size_t>> group_counts;
    double mean_age = 0.0;
    double mean_bmi = 0.0;
    double obese_fraction = 0.0; // share with degree(bmi, "obese") >= 0.5
};

PopulationSummary population_summary(const std::vector<Agent>& agents, const RuleBase& rb);

} // namespace fuzzyepi

#endif
