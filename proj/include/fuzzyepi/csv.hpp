#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fuzzyepi/engine.hpp"
#include "fuzzyepi/metrics.hpp"

namespace fuzzyepi {

/// Read failure; the message carries the file and 1-based line number.
class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kTimeseriesHeader =
    "day,susceptible,infected,recovered,dead,new_infections,"
    "hospital_occupancy,icu_occupancy,icu_demand";

// All writers emit locale-independent numbers (std::to_chars) and end the
// file with a trailing newline.
void write_timeseries(const std::string& path, const TimeSeries& series);
TimeSeries read_timeseries(const std::string& path);

/// Observed daily incidence: header `day,new_cases`, days consecutive,
/// counts >= 0.
IncidenceSeries read_observed(const std::string& path);

void write_summary(const std::string& path, const RunSummary& summary, std::uint64_t seed);
void write_comparison(const std::string& path, const ComparisonReport& report);

struct SweepRow {
    double value = 0.0;
    std::uint64_t seed = 0;
    RunSummary summary{};
};

void write_sweep_summary(const std::string& path, const std::string& param,
                         const std::vector<SweepRow>& rows);

/// Shortest round-trip decimal form of x (period separator, no grouping).
std::string format_number(double x);

} // namespace fuzzyepi
