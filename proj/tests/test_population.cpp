#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fuzzyepi/population.hpp"
#include "fuzzyepi/rng.hpp"
#include "fuzzyepi/spatial.hpp"

using namespace fuzzyepi;

namespace {

const TorusWorld kWorld{200.0, 200.0};

std::vector<Agent> sample(std::uint64_t seed, std::uint32_t n,
                          const DemographicConfig& cfg = DemographicConfig{}) {
    Rng rng = substream(seed, 0, 0, Draw::Population);
    return sample_population(cfg, n, kWorld, rng);
}

// Lognormal upper-tail P(X >= x) for the real-space (mean, sd) parameters.
double lognormal_tail(double x, double mean, double sd) {
    const double cv2 = (sd / mean) * (sd / mean);
    const double sigma = std::sqrt(std::log1p(cv2));
    const double mu = std::log(mean) - 0.5 * sigma * sigma;
    const double z = (std::log(x) - mu) / sigma;
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

} // namespace

TEST_CASE("sampling is deterministic in the stream") {
    const auto a = sample(7, 500);
    const auto b = sample(7, 500);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].age == b[i].age);
        CHECK(a[i].bmi == b[i].bmi);
        CHECK(a[i].fragility == b[i].fragility);
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].y == b[i].y);
        CHECK(a[i].heading == b[i].heading);
    }
    CHECK(sample(8, 500)[0].x != a[0].x);
}

TEST_CASE("a single agent gets valid fields") {
    const auto agents = sample(1, 1);
    REQUIRE(agents.size() == 1);
    const Agent& a = agents[0];
    CHECK(a.id == 0);
    CHECK(a.state == HealthState::Susceptible);
    CHECK(a.care == CareStatus::None);
    CHECK(!a.ever_infected());
    CHECK(a.age >= 0);
    CHECK(a.age <= 100);
    CHECK(a.bmi >= 10.0);
    CHECK(a.bmi <= 60.0);
    CHECK(a.fragility >= 0.0);
    CHECK(a.fragility <= 1.0);
    CHECK(a.x >= 0.0);
    CHECK(a.x < kWorld.width);
    CHECK(a.y >= 0.0);
    CHECK(a.y < kWorld.height);
    CHECK(a.heading >= 0.0);
    CHECK(a.heading < 2.0 * std::numbers::pi);
}

TEST_CASE("ages land in the configured group ranges with the configured shares") {
    const DemographicConfig cfg;
    const std::uint32_t n = 20000;
    const auto agents = sample(42, n);

    std::size_t young = 0;
    std::size_t adult = 0;
    std::size_t elderly = 0;
    for (const Agent& a : agents) {
        REQUIRE(a.age >= 0);
        REQUIRE(a.age <= 100);
        const bool in_young = a.age >= cfg.young_age.first && a.age <= cfg.young_age.second;
        const bool in_adult = a.age >= cfg.adult_age.first && a.age <= cfg.adult_age.second;
        const bool in_elderly = a.age >= cfg.elderly_age.first && a.age <= cfg.elderly_age.second;
        REQUIRE((in_young || in_adult || in_elderly));
        young += in_young;
        adult += in_adult;
        elderly += in_elderly;
    }
    CHECK(static_cast<double>(young) / n == doctest::Approx(0.30).epsilon(0.05));
    CHECK(static_cast<double>(adult) / n == doctest::Approx(0.45).epsilon(0.05));
    CHECK(static_cast<double>(elderly) / n == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("bmi distribution matches the lognormal moments and tail") {
    const std::uint32_t n = 40000;
    const auto agents = sample(9, n);

    double sum = 0.0;
    std::size_t obese = 0;
    for (const Agent& a : agents) {
        REQUIRE(a.bmi >= 10.0);
        REQUIRE(a.bmi <= 60.0);
        sum += a.bmi;
        obese += a.bmi >= 30.0;
    }
    CHECK(sum / n == doctest::Approx(26.5).epsilon(0.01));

    const double expected_tail = lognormal_tail(30.0, 26.5, 5.0);
    CHECK(expected_tail == doctest::Approx(0.2246).epsilon(0.005));
    CHECK(static_cast<double>(obese) / n == doctest::Approx(expected_tail).epsilon(0.08));
}

TEST_CASE("fragility follows Beta(2,5)") {
    const std::uint32_t n = 40000;
    const auto agents = sample(11, n);
    double sum = 0.0;
    for (const Agent& a : agents) {
        REQUIRE(a.fragility >= 0.0);
        REQUIRE(a.fragility <= 1.0);
        sum += a.fragility;
    }
    CHECK(sum / n == doctest::Approx(2.0 / 7.0).epsilon(0.02));
}

TEST_CASE("population summary counts groups and the obese share") {
    const auto agents = sample(42, 20000);
    const PopulationSummary s = population_summary(agents, RuleBase::defaults());

    REQUIRE(s.group_counts.size() == 3);
    CHECK(s.group_counts[0].first == "young");
    CHECK(s.group_counts[1].first == "adult");
    CHECK(s.group_counts[2].first == "elderly");
    std::size_t total = 0;
    for (const auto& [label, count] : s.group_counts) total += count;
    CHECK(total == agents.size());

    std::size_t obese = 0;
    double age_sum = 0.0;
    double bmi_sum = 0.0;
    for (const Agent& a : agents) {
        obese += a.bmi >= 30.0;
        age_sum += a.age;
        bmi_sum += a.bmi;
    }
    CHECK(s.obese_fraction ==
          doctest::Approx(static_cast<double>(obese) / agents.size()).epsilon(1e-12));
    CHECK(s.mean_age == doctest::Approx(age_sum / agents.size()).epsilon(1e-12));
    CHECK(s.mean_bmi == doctest::Approx(bmi_sum / agents.size()).epsilon(1e-12));
}

TEST_CASE("degenerate shares put everyone in one group") {
    DemographicConfig cfg;
    cfg.young_share = 0.0;
    cfg.adult_share = 0.0;
    cfg.elderly_share = 1.0;
    const auto agents = sample(3, 200, cfg);
    for (const Agent& a : agents) {
        REQUIRE(a.age >= cfg.elderly_age.first);
        REQUIRE(a.age <= cfg.elderly_age.second);
    }
}

TEST_CASE("config validation rejects inconsistent demographics") {
    DemographicConfig bad_shares;
    bad_shares.young_share = 0.5;
    bad_shares.adult_share = 0.5;
    bad_shares.elderly_share = 0.5;
    CHECK_THROWS_AS(bad_shares.validate(), std::invalid_argument);

    DemographicConfig bad_range;
    bad_range.adult_age = {59, 30};
    CHECK_THROWS_AS(bad_range.validate(), std::invalid_argument);

    DemographicConfig bad_sd;
    bad_sd.bmi_sd = 0.0;
    CHECK_THROWS_AS(bad_sd.validate(), std::invalid_argument);

    DemographicConfig bad_beta;
    bad_beta.fragility_alpha = -1.0;
    CHECK_THROWS_AS(bad_beta.validate(), std::invalid_argument);
}

// Frozen draws. Any change here means the sampling algorithm or the draw
// order changed, which silently invalidates every seeded result.
TEST_CASE("sampling is frozen for seed 42") {
    const TorusWorld world{100.0, 100.0};
    Rng rng = substream(42, 0, 0, Draw::Population);
    const auto agents = sample_population(DemographicConfig{}, 6, world, rng);
    REQUIRE(agents.size() == 6);

    CHECK(agents[0].age == 29);
    CHECK(agents[0].bmi == 25.669450385527849);
    CHECK(agents[0].fragility == 0.33019246529123014);
    CHECK(agents[0].x == 12.785910550639501);
    CHECK(agents[0].y == 73.573128651490364);
    CHECK(agents[0].heading == 5.1786860819427529);

    CHECK(agents[1].age == 49);
    CHECK(agents[1].bmi == 20.445228368353646);
    CHECK(agents[4].age == 82);
    CHECK(agents[4].bmi == 27.466891949730883);
    CHECK(agents[5].fragility == 0.31255913381596784);
    CHECK(agents[5].heading == 2.6623409451380988);
}
