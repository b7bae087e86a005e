#include "fuzzyepi/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <locale>
#include <string_view>

namespace fuzzyepi {

namespace {

[[noreturn]] void fail_at(const std::string& path, int line, const std::string& what) {
    throw CsvError(path + ":" + std::to_string(line) + ": " + what);
}

std::string_view strip_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_row(std::string_view s) {
    std::vector<std::string_view> fields;
    while (true) {
        const std::size_t pos = s.find(',');
        if (pos == std::string_view::npos) {
            fields.push_back(s);
            return fields;
        }
        fields.push_back(s.substr(0, pos));
        s.remove_prefix(pos + 1);
    }
}

template <typename Num>
Num parse_field(std::string_view v, const std::string& path, int line, const char* column) {
    Num out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        fail_at(path, line, std::string("bad value '") + std::string(v) + "' for column " + column);
    }
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CsvError(path + ": cannot open for writing");
    // Integer inserts must not pick up grouping from a host-set global locale.
    out.imbue(std::locale::classic());
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw CsvError(path + ": write failed");
}

} // namespace

std::string format_number(double x) {
    std::array<char, 64> buf;
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

void write_timeseries(const std::string& path, const TimeSeries& series) {
    std::ofstream out = open_out(path);
    out << kTimeseriesHeader << '\n';
    for (const DailyRecord& r : series) {
        out << r.day << ',' << r.susceptible << ',' << r.infected << ',' << r.recovered << ','
            << r.dead << ',' << r.new_infections << ',' << r.hospital_occupancy << ','
            << r.icu_occupancy << ',' << r.icu_demand << '\n';
    }
    finish(out, path);
}

TimeSeries read_timeseries(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError(path + ": cannot open for reading");

    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) fail_at(path, 1, "missing header row");
    ++line_no;
    if (strip_cr(line) != kTimeseriesHeader) {
        fail_at(path, 1, std::string("expected header '") + kTimeseriesHeader + "'");
    }

    static constexpr std::array<const char*, 9> columns = {
        "day",  "susceptible",    "infected",           "recovered",     "dead",
        "new_infections", "hospital_occupancy", "icu_occupancy", "icu_demand"};

    TimeSeries series;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = strip_cr(line);
        if (body.empty()) continue;
        const auto fields = split_row(body);
        if (fields.size() != columns.size()) {
            fail_at(path, line_no,
                    "expected " + std::to_string(columns.size()) + " fields, got " +
                        std::to_string(fields.size()));
        }
        DailyRecord r;
        r.day = parse_field<int>(fields[0], path, line_no, columns[0]);
        r.susceptible = parse_field<std::uint32_t>(fields[1], path, line_no, columns[1]);
        r.infected = parse_field<std::uint32_t>(fields[2], path, line_no, columns[2]);
        r.recovered = parse_field<std::uint32_t>(fields[3], path, line_no, columns[3]);
        r.dead = parse_field<std::uint32_t>(fields[4], path, line_no, columns[4]);
        r.new_infections = parse_field<std::uint32_t>(fields[5], path, line_no, columns[5]);
        r.hospital_occupancy = parse_field<std::uint32_t>(fields[6], path, line_no, columns[6]);
        r.icu_occupancy = parse_field<std::uint32_t>(fields[7], path, line_no, columns[7]);
        r.icu_demand = parse_field<std::uint32_t>(fields[8], path, line_no, columns[8]);
        series.push_back(r);
    }
    return series;
}

IncidenceSeries read_observed(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError(path + ": cannot open for reading");

    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) fail_at(path, 1, "missing header row");
    ++line_no;
    if (strip_cr(line) != std::string_view("day,new_cases")) {
        fail_at(path, 1, "expected header 'day,new_cases'");
    }

    IncidenceSeries series;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = strip_cr(line);
        if (body.empty()) continue;
        const auto fields = split_row(body);
        if (fields.size() != 2) fail_at(path, line_no, "expected 2 fields (day,new_cases)");
        const int day = parse_field<int>(fields[0], path, line_no, "day");
        const double cases = parse_field<double>(fields[1], path, line_no, "new_cases");
        if (!(cases >= 0.0) || !std::isfinite(cases)) {
            fail_at(path, line_no, "new_cases must be >= 0");
        }
        if (series.new_cases.empty()) {
            series.first_day = day;
        } else if (day != series.day_at(series.new_cases.size())) {
            fail_at(path, line_no,
                    "days must increase by 1 (expected " +
                        std::to_string(series.day_at(series.new_cases.size())) + ", got " +
                        std::to_string(day) + ")");
        }
        series.new_cases.push_back(cases);
    }
    if (series.new_cases.empty()) fail_at(path, line_no + 1, "no data rows");
    return series;
}

void write_summary(const std::string& path, const RunSummary& summary, std::uint64_t seed) {
    std::ofstream out = open_out(path);
    out << "seed,attack_rate,cfr,peak_day,peak_active,peak_new,icu_overflow_days\n";
    out << seed << ',' << format_number(summary.attack_rate) << ',' << format_number(summary.cfr)
        << ',' << summary.peak_day << ',' << summary.peak_active << ',' << summary.peak_new << ','
        << summary.icu_overflow_days << '\n';
    finish(out, path);
}

void write_comparison(const std::string& path, const ComparisonReport& report) {
    std::ofstream out = open_out(path);
    out << "rmse,mae,peak_day_offset,truncation_day\n";
    out << format_number(report.rmse) << ',' << format_number(report.mae) << ','
        << report.peak_day_offset << ',';
    if (report.truncation_day) out << *report.truncation_day;
    out << '\n';
    finish(out, path);
}

void write_sweep_summary(const std::string& path, const std::string& param,
                         const std::vector<SweepRow>& rows) {
    std::ofstream out = open_out(path);
    out << "param,value,seed,attack_rate,cfr,peak_day,peak_active,peak_new,icu_overflow_days\n";
    for (const SweepRow& row : rows) {
        const RunSummary& s = row.summary;
        out << param << ',' << format_number(row.value) << ',' << row.seed << ','
            << format_number(s.attack_rate) << ',' << format_number(s.cfr) << ',' << s.peak_day
            << ',' << s.peak_active << ',' << s.peak_new << ',' << s.icu_overflow_days << '\n';
    }
    finish(out, path);
}

} // namespace fuzzyepi
