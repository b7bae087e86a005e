#include "fuzzyepi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fuzzyepi {

RunSummary summarize(const TimeSeries& series, std::uint32_t n_agents, std::uint32_t icu_beds) {
    if (series.empty()) throw std::invalid_argument("summarize requires a non-empty series");

    RunSummary out;
    const DailyRecord& last = series.back();
    const std::uint32_t ever_infected =
        n_agents >= last.susceptible ? n_agents - last.susceptible : 0;
    if (n_agents > 0) out.attack_rate = static_cast<double>(ever_infected) / n_agents;
    if (ever_infected > 0) out.cfr = static_cast<double>(last.dead) / ever_infected;

    out.peak_day = series.front().day;
    for (const DailyRecord& rec : series) {
        if (rec.infected > out.peak_active) {
            out.peak_active = rec.infected;
            out.peak_day = rec.day;
        }
        out.peak_new = std::max(out.peak_new, rec.new_infections);
        if (rec.icu_demand > icu_beds) ++out.icu_overflow_days;
    }
    return out;
}

IncidenceSeries incidence_of(const TimeSeries& series) {
    IncidenceSeries out;
    if (series.empty()) return out;
    out.first_day = series.front().day;
    out.new_cases.reserve(series.size());
    for (const DailyRecord& rec : series) {
        out.new_cases.push_back(static_cast<double>(rec.new_infections));
    }
    return out;
}

ComparisonReport compare(const IncidenceSeries& simulated, const IncidenceSeries& observed,
                         std::optional<int> truncate_at) {
    if (simulated.new_cases.empty() || observed.new_cases.empty()) {
        throw std::invalid_argument("compare requires non-empty series");
    }

    const int lo = std::max(simulated.first_day, observed.first_day);
    int hi = std::min(simulated.day_at(simulated.new_cases.size() - 1),
                      observed.day_at(observed.new_cases.size() - 1));
    if (truncate_at) hi = std::min(hi, *truncate_at - 1);
    if (lo > hi) throw std::invalid_argument("compare: series have no overlapping days");

    double abs_sum = 0.0;
    double sq_sum = 0.0;
    int sim_peak_day = lo;
    int obs_peak_day = lo;
    double sim_peak = -1.0;
    double obs_peak = -1.0;
    for (int day = lo; day <= hi; ++day) {
        const double s = simulated.new_cases[static_cast<std::size_t>(day - simulated.first_day)];
        const double o = observed.new_cases[static_cast<std::size_t>(day - observed.first_day)];
        const double err = s - o;
        abs_sum += std::abs(err);
        sq_sum += err * err;
        if (s > sim_peak) {
            sim_peak = s;
            sim_peak_day = day;
        }
        if (o > obs_peak) {
            obs_peak = o;
            obs_peak_day = day;
        }
    }

    const double n = static_cast<double>(hi - lo + 1);
    ComparisonReport report;
    report.mae = abs_sum / n;
    report.rmse = std::sqrt(sq_sum / n);
    report.peak_day_offset = sim_peak_day - obs_peak_day;
    report.truncation_day = truncate_at;
    return report;
}

ComparisonReport compare(const std::vector<double>& simulated, const std::vector<double>& observed,
                         std::optional<int> truncate_at) {
    return compare(IncidenceSeries{0, simulated}, IncidenceSeries{0, observed}, truncate_at);
}

} // namespace fuzzyepi
