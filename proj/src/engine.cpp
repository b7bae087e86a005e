#include "fuzzyepi/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

namespace fuzzyepi {

namespace {

void check_probability(const char* name, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must be in [0,1]");
    }
}

// Runs fn(lo, hi) over a partition of [0, n) on `workers` threads. The
// partition is a pure function of (n, workers); callers rely on per-item
// substreams so the result does not depend on it.
template <typename Fn>
void parallel_ranges(std::size_t n, unsigned workers, Fn&& fn) {
    if (workers <= 1 || n < 2 * workers) {
        fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = std::min(n, w * chunk);
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (std::thread& t : pool) t.join();
}

double wrap_angle(double h) noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    h = std::fmod(h, two_pi);
    if (h < 0.0) h += two_pi;
    return h;
}

} // namespace

void ScenarioConfig::validate() const {
    if (n_agents < 1) throw std::invalid_argument("n_agents must be >= 1");
    if (!(world.width > 0.0 && world.height > 0.0)) {
        throw std::invalid_argument("world extents must be > 0");
    }
    if (initial_infected > n_agents) {
        throw std::invalid_argument("initial_infected must not exceed n_agents");
    }
    check_probability("beta", beta);
    if (!(base_radius > 0.0)) throw std::invalid_argument("base_radius must be > 0");
    if (!(variant_factor >= 1.0)) throw std::invalid_argument("variant_factor must be >= 1");
    if (move_speed < 0.0) throw std::invalid_argument("move_speed must be >= 0");
    if (wiggle < 0.0) throw std::invalid_argument("wiggle must be >= 0");
    if (!(mean_recovery_days > 0.0)) throw std::invalid_argument("mean_recovery_days must be > 0");
    if (recovery_sd_days < 0.0) throw std::invalid_argument("recovery_sd_days must be >= 0");
    check_probability("hazards.severe_in_bed", hazards.severe_in_bed);
    check_probability("hazards.severe_no_bed", hazards.severe_no_bed);
    check_probability("hazards.critical_in_icu", hazards.critical_in_icu);
    check_probability("hazards.critical_no_icu", hazards.critical_no_icu);
    if (fragility_weight < 0.0) throw std::invalid_argument("fragility_weight must be >= 0");
    demographics.validate();
}

double effective_radius(double base_radius, double variant_factor) {
    if (!(variant_factor >= 1.0)) {
        throw std::invalid_argument("variant_factor must be >= 1");
    }
    return base_radius * std::sqrt(variant_factor);
}

double exposure_probability(double contact_beta, double fragility_weight,
                            double fragility) noexcept {
    return std::min(1.0, contact_beta * (1.0 + fragility_weight * fragility));
}

bool exposure_roll(std::uint64_t seed, int day, std::uint32_t infector, std::uint32_t susceptible,
                   double probability) noexcept {
    return pair_substream(seed, day, infector, susceptible, Draw::Exposure).bernoulli(probability);
}

int draw_recovery_duration(std::uint64_t seed, int day, std::uint32_t id, double mean_days,
                           double sd_days) noexcept {
    double x = mean_days;
    if (sd_days > 0.0) {
        Rng rng = substream(seed, day, id, Draw::Duration);
        x = rng.normal(mean_days, sd_days);
    }
    x = std::max(x, 10.0);
    return static_cast<int>(std::llround(x));
}

Simulation::Simulation(ScenarioConfig cfg, unsigned workers)
    : Simulation(std::move(cfg), RuleBase::defaults(), workers) {}

Simulation::Simulation(ScenarioConfig cfg, RuleBase rules, unsigned workers)
    : cfg_(std::move(cfg)), rules_(std::move(rules)), workers_(std::max(1u, workers)) {
    cfg_.validate();

    if (cfg_.variant_mode == VariantMode::ZoneArea) {
        zone_radius_ = effective_radius(cfg_.base_radius, cfg_.variant_factor);
        contact_beta_ = cfg_.beta;
    } else {
        zone_radius_ = cfg_.base_radius;
        contact_beta_ = std::min(1.0, cfg_.beta * cfg_.variant_factor);
    }

    Rng pop_rng = substream(cfg_.seed, 0, 0, Draw::Population);
    agents_ = sample_population(cfg_.demographics, cfg_.n_agents, cfg_.world, pop_rng);

    for (std::uint32_t i = 0; i < cfg_.initial_infected; ++i) infect(agents_[i], 0);

    rebuild_index();
    allocate_care();
    series_.push_back(snapshot(0, cfg_.initial_infected));
}

bool Simulation::finished() const noexcept {
    return day_ >= static_cast<int>(cfg_.max_days) || series_.back().infected == 0;
}

const DailyRecord& Simulation::step() {
    if (finished()) return series_.back();
    const int today = day_ + 1;
    move_agents(today);
    rebuild_index();
    const std::vector<Exposure> exposures = collect_exposures(today);
    const std::uint32_t fresh = apply_exposures(exposures, today);
    allocate_care();
    progress_disease(today);
    day_ = today;
    series_.push_back(snapshot(today, fresh));
    return series_.back();
}

void Simulation::move_agents(int day) {
    const double speed = cfg_.move_speed;
    const double wiggle = cfg_.wiggle;
    parallel_ranges(agents_.size(), workers_, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            Agent& a = agents_[i];
            if (a.state == HealthState::Dead || a.care != CareStatus::None) continue;
            Rng rng = substream(cfg_.seed, day, a.id, Draw::Move);
            a.heading = wrap_angle(a.heading + rng.uniform(-wiggle, wiggle));
            a.x = cfg_.world.wrap_x(a.x + speed * std::cos(a.heading));
            a.y = cfg_.world.wrap_y(a.y + speed * std::sin(a.heading));
        }
    });
}

void Simulation::rebuild_index() {
    index_.rebuild(agents_, zone_radius_, cfg_.world);
}

std::vector<Exposure> Simulation::collect_exposures(int day) const {
    // Infectors read the frozen index snapshot; agents isolated in care do
    // not transmit.
    std::vector<std::uint32_t> infectors;
    for (const Agent& a : agents_) {
        if (a.state == HealthState::Infected && a.care == CareStatus::None) {
            infectors.push_back(a.id);
        }
    }

    std::vector<std::vector<Exposure>> partial(workers_ == 0 ? 1 : workers_);
    const std::size_t chunk =
        workers_ <= 1 ? infectors.size() : (infectors.size() + workers_ - 1) / workers_;
    parallel_ranges(infectors.size(), workers_, [&](std::size_t lo, std::size_t hi) {
        std::vector<Exposure>& out = partial[chunk == 0 ? 0 : lo / chunk];
        for (std::size_t k = lo; k < hi; ++k) {
            const Agent& src = agents_[infectors[k]];
            for (std::uint32_t j : index_.neighbors_within({src.x, src.y}, zone_radius_)) {
                const Agent& dst = agents_[j];
                if (dst.state != HealthState::Susceptible) continue;
                const double p =
                    exposure_probability(contact_beta_, cfg_.fragility_weight, dst.fragility);
                if (exposure_roll(cfg_.seed, day, src.id, dst.id, p)) {
                    out.push_back({dst.id, src.id});
                }
            }
        }
    });

    std::vector<Exposure> exposures;
    for (auto& part : partial) {
        exposures.insert(exposures.end(), part.begin(), part.end());
    }
    return exposures;
}

std::uint32_t Simulation::apply_exposures(const std::vector<Exposure>& exposures, int day) {
    std::vector<std::uint8_t> hit(agents_.size(), 0);
    for (const Exposure& e : exposures) hit[e.susceptible] = 1;

    std::uint32_t fresh = 0;
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        if (hit[i] && agents_[i].state == HealthState::Susceptible) {
            infect(agents_[i], day);
            ++fresh;
        }
    }
    return fresh;
}

void Simulation::infect(Agent& a, int day) {
    a.state = HealthState::Infected;
    a.infection_day = day;
    a.severity = crisp_severity(rules_.infer(static_cast<double>(a.age), a.bmi));
    a.recovery_duration = draw_recovery_duration(cfg_.seed, day, a.id, cfg_.mean_recovery_days,
                                                 cfg_.recovery_sd_days);
}

void Simulation::allocate_care() {
    // FCFS by (infection_day, id); beds are kept until recovery or death.
    std::vector<std::pair<int, std::uint32_t>> icu_wait;
    std::vector<std::pair<int, std::uint32_t>> hospital_wait;
    icu_demand_today_ = 0;
    for (const Agent& a : agents_) {
        if (a.state != HealthState::Infected) continue;
        if (a.severity == Severity::Critical) {
            ++icu_demand_today_;
            if (a.care == CareStatus::None) icu_wait.emplace_back(a.infection_day, a.id);
        } else if (a.severity == Severity::Severe && a.care == CareStatus::None) {
            hospital_wait.emplace_back(a.infection_day, a.id);
        }
    }
    std::sort(icu_wait.begin(), icu_wait.end());
    std::sort(hospital_wait.begin(), hospital_wait.end());
    for (const auto& [infection_day, id] : icu_wait) {
        if (icu_used_ >= cfg_.icu_beds) break;
        agents_[id].care = CareStatus::IcuBed;
        ++icu_used_;
    }
    for (const auto& [infection_day, id] : hospital_wait) {
        if (hospital_used_ >= cfg_.hospital_beds) break;
        agents_[id].care = CareStatus::HospitalBed;
        ++hospital_used_;
    }
}

void Simulation::release_bed(Agent& a) noexcept {
    if (a.care == CareStatus::IcuBed) --icu_used_;
    if (a.care == CareStatus::HospitalBed) --hospital_used_;
    a.care = CareStatus::None;
}

void Simulation::progress_disease(int day) {
    for (Agent& a : agents_) {
        if (a.state != HealthState::Infected) continue;
        double hazard = 0.0;
        if (a.severity == Severity::Severe) {
            hazard = a.care == CareStatus::HospitalBed ? cfg_.hazards.severe_in_bed
                                                       : cfg_.hazards.severe_no_bed;
        } else if (a.severity == Severity::Critical) {
            hazard = a.care == CareStatus::IcuBed ? cfg_.hazards.critical_in_icu
                                                  : cfg_.hazards.critical_no_icu;
        }
        if (hazard > 0.0 && substream(cfg_.seed, day, a.id, Draw::Hazard).bernoulli(hazard)) {
            release_bed(a);
            a.state = HealthState::Dead;
        } else if (day - a.infection_day >= a.recovery_duration) {
            release_bed(a);
            a.state = HealthState::Recovered;
        }
    }
}

DailyRecord Simulation::snapshot(int day, std::uint32_t new_infections) const {
    DailyRecord rec;
    rec.day = day;
    rec.new_infections = new_infections;
    for (const Agent& a : agents_) {
        switch (a.state) {
        case HealthState::Susceptible: ++rec.susceptible; break;
        case HealthState::Infected: ++rec.infected; break;
        case HealthState::Recovered: ++rec.recovered; break;
        case HealthState::Dead: ++rec.dead; break;
        }
    }
    rec.hospital_occupancy = hospital_used_;
    rec.icu_occupancy = icu_used_;
    rec.icu_demand = icu_demand_today_;
    return rec;
}

TimeSeries run(const ScenarioConfig& cfg, unsigned workers) {
    Simulation sim(cfg, workers);
    while (!sim.finished()) sim.step();
    return sim.series();
}

} // namespace fuzzyepi
