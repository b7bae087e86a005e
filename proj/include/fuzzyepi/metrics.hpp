#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fuzzyepi/engine.hpp"

namespace fuzzyepi {

struct RunSummary {
    double attack_rate = 0.0;
    double cfr = 0.0;
    int peak_day = 0;
    std::uint32_t peak_active = 0;
    std::uint32_t peak_new = 0;
    std::uint32_t icu_overflow_days = 0;
};

// Ever-infected is n_agents minus the final susceptible count; cfr is 0 when
// nobody was ever infected. Peak ties resolve to the earliest day.
RunSummary summarize(const TimeSeries& series, std::uint32_t n_agents, std::uint32_t icu_beds);

// Daily incidence indexed by consecutive days starting at first_day.
struct IncidenceSeries {
    int first_day = 0;
    std::vector<double> new_cases;

    int day_at(std::size_t i) const noexcept { return first_day + static_cast<int>(i); }
};

IncidenceSeries incidence_of(const TimeSeries& series);

struct ComparisonReport {
    double rmse = 0.0;
    double mae = 0.0;
    int peak_day_offset = 0;
    std::optional<int> truncation_day;
};

// Errors are computed over the days both series cover; truncate_at is
// exclusive (truncate_at=19 keeps days <= 18). Peak days use the same
// support, earliest tie first. An empty support is an error.
ComparisonReport compare(const IncidenceSeries& simulated, const IncidenceSeries& observed,
                         std::optional<int> truncate_at = std::nullopt);

ComparisonReport compare(const std::vector<double>& simulated, const std::vector<double>& observed,
                         std::optional<int> truncate_at = std::nullopt);

} // namespace fuzzyepi
