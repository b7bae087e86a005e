#ifndef FUZZYEPI_ENGINE_HPP
#define FUZZYEPI_ENGINE_HPP

#include <cstdint>
#include <numbers>
#include <vector>

#include "fuzzyepi/fuzzy.hpp"
#include "fuzzyepi/population.hpp"
#include "fuzzyepi/spatial.hpp"

namespace fuzzyepi {

/// Per-day death probabilities by (severity, care status). Mild cases never
/// face a death draw.
struct Hazards {
    double severe_in_bed = 0.0001;
    double severe_no_bed = 0.0004;
    double critical_in_icu = 0.001;
    double critical_no_icu = 0.0042;
};

/// How the variant contagiousness multiplier enters the model: scaling the
/// transmissibility-zone area (radius times sqrt(factor), the default) or
/// scaling the per-contact infection probability instead.
enum class VariantMode { ZoneArea, ContactRate };

struct ScenarioConfig {
    std::uint32_t n_agents = 20000;
    TorusWorld world{200.0, 200.0};
    std::uint32_t initial_infected = 10;
    double beta = 0.08;               // per-contact per-day infection probability
    double base_radius = 2.0;         // transmissibility-zone radius, world units
    double variant_factor = 1.0;      // contagiousness multiplier, >= 1
    VariantMode variant_mode = VariantMode::ZoneArea;
    double move_speed = 1.5;          // world units per day
    double wiggle = std::numbers::pi / 4.0; // max heading change per day, radians
    double mean_recovery_days = 25.0;
    double recovery_sd_days = 5.0;
    std::uint32_t hospital_beds = 80;
    std::uint32_t icu_beds = 8;
    Hazards hazards{};
    std::uint32_t max_days = 365;
    std::uint64_t seed = 1;
    double fragility_weight = 0.0;    // susceptibility multiplier hook, 0 = off
    DemographicConfig demographics{};

    void validate() const; // throws std::invalid_argument
};

/// One row of the simulated time series. icu_demand counts every critical
/// case needing intensive care that day, admitted or not; occupancy is
/// capped by the bed counts.
struct DailyRecord {
    int day = 0;
    std::uint32_t susceptible = 0;
    std::uint32_t infected = 0;
    std::uint32_t recovered = 0;
    std::uint32_t dead = 0;
    std::uint32_t new_infections = 0;
    std::uint32_t hospital_occupancy = 0;
    std::uint32_t icu_occupancy = 0;
    std::uint32_t icu_demand = 0;

    bool operator==(const DailyRecord&) const = default;
};

using TimeSeries = std::vector<DailyRecord>;

/// Transmissibility-zone radius for a variant: area scales linearly with
/// the contagiousness factor, so the radius scales with its square root.
/// Throws for factor < 1.
double effective_radius(double base_radius, double variant_factor);

/// A successful exposure event: `infector` passed the infection to
/// `susceptible` this day (applied in the second transmission phase).
struct Exposure {
    std::uint32_t susceptible = 0;
    std::uint32_t infector = 0;

    bool operator==(const Exposure&) const = default;
};

/// Day-stepped world state. Construction samples the population, infects
/// the first initial_infected agents by id at day 0, and records day 0.
///
/// Each step runs the fixed phase order: move, rebuild index, transmit
/// (two-phase), allocate care, progress disease, then emits the day's
/// record. Every stochastic decision draws from a substream keyed by
/// (seed, day, agent id[, peer id], purpose), so a step's outcome is
/// independent of evaluation order; movement and exposure collection are
/// farmed out to `workers` threads over disjoint agent ranges with
/// identical results for any worker count.
class Simulation {
public:
    explicit Simulation(ScenarioConfig cfg, unsigned workers = 1);
    Simulation(ScenarioConfig cfg, RuleBase rules, unsigned workers = 1);

    /// Day is done when max_days is reached or no infection remains.
    bool finished() const noexcept;

    /// Advances one day and returns its record. Stepping a finished
    /// simulation is a no-op that returns the final record.
    const DailyRecord& step();

    const TimeSeries& series() const noexcept { return series_; }
    const std::vector<Agent>& agents() const noexcept { return agents_; }
    const ScenarioConfig& config() const noexcept { return cfg_; }
    const RuleBase& rules() const noexcept { return rules_; }
    const GridIndex& index() const noexcept { return index_; }
    int day() const noexcept { return day_; }
    double zone_radius() const noexcept { return zone_radius_; }
    double contact_beta() const noexcept { return contact_beta_; }

    // Individual day phases in step() order, public so tests can drive and
    // inspect them; `day` is the day being simulated.
    void move_agents(int day);
    void rebuild_index();
    std::vector<Exposure> collect_exposures(int day) const;
    std::uint32_t apply_exposures(const std::vector<Exposure>& exposures, int day);
    void allocate_care();
    void progress_disease(int day);

private:
    void infect(Agent& a, int day);
    void release_bed(Agent& a) noexcept;
    DailyRecord snapshot(int day, std::uint32_t new_infections) const;

    ScenarioConfig cfg_;
    RuleBase rules_;
    unsigned workers_;
    double zone_radius_ = 0.0;  // effective transmissibility radius
    double contact_beta_ = 0.0; // effective per-contact probability
    std::vector<Agent> agents_;
    GridIndex index_;
    TimeSeries series_;
    int day_ = 0;
    std::uint32_t hospital_used_ = 0;
    std::uint32_t icu_used_ = 0;
    std::uint32_t icu_demand_today_ = 0;
};

/// Runs a scenario to completion: one record per simulated day, day 0
/// included.
TimeSeries run(const ScenarioConfig& cfg, unsigned workers = 1);

/// Per-pair exposure probability: the contact beta, optionally scaled by
/// the susceptible agent's fragility, clamped to 1.
double exposure_probability(double contact_beta, double fragility_weight,
                            double fragility) noexcept;

/// The single Bernoulli exposure draw for an (infector, susceptible) pair
/// on a given day. Pure; the all-pairs brute-force reference uses the same
/// rule.
bool exposure_roll(std::uint64_t seed, int day, std::uint32_t infector, std::uint32_t susceptible,
                   double probability) noexcept;

/// Recovery duration drawn at infection: normal(mean, sd) floored at 10
/// days, rounded to whole days. Pure given (seed, day, id).
int draw_recovery_duration(std::uint64_t seed, int day, std::uint32_t id, double mean_days,
                           double sd_days) noexcept;

} // namespace fuzzyepi

#endif
