#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fuzzyepi/chart.hpp"
#include "fuzzyepi/config.hpp"
#include "fuzzyepi/csv.hpp"
#include "fuzzyepi/engine.hpp"
#include "fuzzyepi/metrics.hpp"

namespace fs = std::filesystem;
using namespace fuzzyepi;

namespace {

void print_summary(const RunSummary& s, std::uint64_t seed) {
    std::cout << "seed              " << seed << '\n'
              << "attack_rate       " << format_number(s.attack_rate) << '\n'
              << "cfr               " << format_number(s.cfr) << '\n'
              << "peak_day          " << s.peak_day << '\n'
              << "peak_active       " << s.peak_active << '\n'
              << "peak_new          " << s.peak_new << '\n'
              << "icu_overflow_days " << s.icu_overflow_days << '\n';
}

std::uint32_t to_u32(double v, const std::string& param) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 4294967295.0) {
        throw std::invalid_argument("parameter '" + param +
                                    "' needs a non-negative integer value");
    }
    return static_cast<std::uint32_t>(v);
}

using ParamSetter = std::function<void(ScenarioConfig&, double, const std::string&)>;

const std::map<std::string, ParamSetter>& sweep_params() {
    static const std::map<std::string, ParamSetter> params = {
        {"n_agents", [](auto& c, double v, auto& p) { c.n_agents = to_u32(v, p); }},
        {"initial_infected", [](auto& c, double v, auto& p) { c.initial_infected = to_u32(v, p); }},
        {"max_days", [](auto& c, double v, auto& p) { c.max_days = to_u32(v, p); }},
        {"hospital_beds", [](auto& c, double v, auto& p) { c.hospital_beds = to_u32(v, p); }},
        {"icu_beds", [](auto& c, double v, auto& p) { c.icu_beds = to_u32(v, p); }},
        {"beta", [](auto& c, double v, auto&) { c.beta = v; }},
        {"base_radius", [](auto& c, double v, auto&) { c.base_radius = v; }},
        {"variant_factor", [](auto& c, double v, auto&) { c.variant_factor = v; }},
        {"move_speed", [](auto& c, double v, auto&) { c.move_speed = v; }},
        {"wiggle", [](auto& c, double v, auto&) { c.wiggle = v; }},
        {"mean_recovery_days", [](auto& c, double v, auto&) { c.mean_recovery_days = v; }},
        {"recovery_sd_days", [](auto& c, double v, auto&) { c.recovery_sd_days = v; }},
        {"fragility_weight", [](auto& c, double v, auto&) { c.fragility_weight = v; }},
        {"world_width", [](auto& c, double v, auto&) { c.world.width = v; }},
        {"world_height", [](auto& c, double v, auto&) { c.world.height = v; }},
        {"severe_in_bed", [](auto& c, double v, auto&) { c.hazards.severe_in_bed = v; }},
        {"severe_no_bed", [](auto& c, double v, auto&) { c.hazards.severe_no_bed = v; }},
        {"critical_in_icu", [](auto& c, double v, auto&) { c.hazards.critical_in_icu = v; }},
        {"critical_no_icu", [](auto& c, double v, auto&) { c.hazards.critical_no_icu = v; }},
    };
    return params;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
    const std::size_t dots = text.find("..");
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    try {
        if (dots == std::string::npos) {
            lo = hi = std::stoull(text);
        } else {
            lo = std::stoull(text.substr(0, dots));
            hi = std::stoull(text.substr(dots + 2));
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("bad seed range '" + text + "' (expected s1..s2)");
    }
    if (lo > hi) throw std::invalid_argument("seed range '" + text + "' is empty");
    return {lo, hi};
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out_dir, bool svg, unsigned workers) {
    LoadedScenario loaded = load_config(config_path);
    if (seed) loaded.scenario.seed = *seed;

    fs::create_directories(out_dir);
    Simulation sim(loaded.scenario, loaded.rules, workers);
    while (!sim.finished()) sim.step();

    const ScenarioConfig& cfg = sim.config();
    const RunSummary summary = summarize(sim.series(), cfg.n_agents, cfg.icu_beds);
    write_timeseries((fs::path(out_dir) / "timeseries.csv").string(), sim.series());
    write_summary((fs::path(out_dir) / "summary.csv").string(), summary, cfg.seed);
    if (svg || loaded.emit_svg) {
        write_chart((fs::path(out_dir) / "chart.svg").string(), sim.series());
    }
    print_summary(summary, cfg.seed);
    return 0;
}

int cmd_compare(const std::string& sim_path, const std::string& obs_path,
                std::optional<int> truncate, const std::string& out_dir) {
    const IncidenceSeries simulated = incidence_of(read_timeseries(sim_path));
    const IncidenceSeries observed = read_observed(obs_path);
    const ComparisonReport report = compare(simulated, observed, truncate);

    fs::create_directories(out_dir);
    write_comparison((fs::path(out_dir) / "comparison.csv").string(), report);
    std::cout << "rmse            " << format_number(report.rmse) << '\n'
              << "mae             " << format_number(report.mae) << '\n'
              << "peak_day_offset " << report.peak_day_offset << '\n'
              << "truncation_day  "
              << (report.truncation_day ? std::to_string(*report.truncation_day) : "none") << '\n';
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<double>& values, const std::string& seeds_text,
              const std::string& out_dir, unsigned workers) {
    const auto& params = sweep_params();
    const auto setter = params.find(param);
    if (setter == params.end()) {
        std::string known;
        for (const auto& entry : params) known += (known.empty() ? "" : ", ") + entry.first;
        throw std::invalid_argument("unknown sweep parameter '" + param + "' (known: " + known +
                                    ")");
    }
    if (values.empty()) throw std::invalid_argument("no sweep values given");
    const auto [seed_lo, seed_hi] = parse_seed_range(seeds_text);

    const LoadedScenario loaded = load_config(config_path);
    fs::create_directories(out_dir);

    struct Job {
        ScenarioConfig cfg;
        double value;
        std::string ts_path;
    };
    std::vector<Job> jobs;
    for (double value : values) {
        for (std::uint64_t seed = seed_lo; seed <= seed_hi; ++seed) {
            ScenarioConfig cfg = loaded.scenario;
            setter->second(cfg, value, param);
            cfg.seed = seed;
            cfg.validate();
            const std::string name = "timeseries_" + param + "_" + format_number(value) +
                                     "_seed_" + std::to_string(seed) + ".csv";
            jobs.push_back({std::move(cfg), value, (fs::path(out_dir) / name).string()});
        }
    }

    // Runs are isolated (own config, own output slot, own file), so the rows
    // come out identical for any worker count.
    std::vector<SweepRow> rows(jobs.size());
    const auto run_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const TimeSeries series = run(jobs[i].cfg);
            write_timeseries(jobs[i].ts_path, series);
            rows[i] = {jobs[i].value, jobs[i].cfg.seed,
                       summarize(series, jobs[i].cfg.n_agents, jobs[i].cfg.icu_beds)};
        }
    };
    if (workers <= 1 || jobs.size() < 2) {
        run_range(0, jobs.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (jobs.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t lo = std::min(jobs.size(), w * chunk);
            const std::size_t hi = std::min(jobs.size(), lo + chunk);
            if (lo < hi) pool.emplace_back(run_range, lo, hi);
        }
        for (std::thread& t : pool) t.join();
    }

    write_sweep_summary((fs::path(out_dir) / "sweep_summary.csv").string(), param, rows);
    std::cout << "wrote " << rows.size() << " runs to " << out_dir << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Agent-based epidemic simulator with fuzzy severity classification"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool svg = false;
    unsigned workers = 1;

    CLI::App* sim = app.add_subcommand("simulate", "Run one scenario and write its artifacts");
    sim->add_option("--config", config_path, "scenario config file")->required();
    CLI::Option* seed_opt = sim->add_option("--seed", seed, "override the config seed");
    sim->add_option("--out", out_dir, "output directory (default .)");
    sim->add_flag("--svg", svg, "also write chart.svg");
    sim->add_option("--workers", workers, "worker threads (default 1)");

    std::string sim_csv;
    std::string obs_csv;
    int truncate = 0;
    CLI::App* cmp = app.add_subcommand("compare", "Compare simulated vs observed daily incidence");
    cmp->add_option("--sim", sim_csv, "simulated timeseries.csv")->required();
    cmp->add_option("--obs", obs_csv, "observed day,new_cases csv")->required();
    CLI::Option* trunc_opt =
        cmp->add_option("--truncate", truncate, "compare days strictly before this day");
    cmp->add_option("--out", out_dir, "output directory (default .)");

    std::string param;
    std::vector<double> values;
    std::string seeds_text;
    CLI::App* swp = app.add_subcommand("sweep", "Run a parameter x seed grid");
    swp->add_option("--config", config_path, "scenario config file")->required();
    swp->add_option("--param", param, "numeric scenario parameter to vary")->required();
    swp->add_option("--values", values, "comma-separated values")->delimiter(',')->required();
    swp->add_option("--seeds", seeds_text, "inclusive seed range s1..s2")->required();
    swp->add_option("--out", out_dir, "output directory")->required();
    swp->add_option("--workers", workers, "parallel runs (default 1)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            std::optional<std::uint64_t> seed_override;
            if (seed_opt->count() > 0) seed_override = seed;
            return cmd_simulate(config_path, seed_override, out_dir, svg, workers);
        }
        if (cmp->parsed()) {
            std::optional<int> trunc;
            if (trunc_opt->count() > 0) trunc = truncate;
            return cmd_compare(sim_csv, obs_csv, trunc, out_dir);
        }
        if (swp->parsed()) {
            return cmd_sweep(config_path, param, values, seeds_text, out_dir, workers);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
