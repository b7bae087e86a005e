#ifndef FUZZYEPI_RNG_HPP
#define FUZZYEPI_RNG_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace fuzzyepi {

// splitmix64 finalizer; full avalanche on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept {
    return mix64(h + 0x9e3779b97f4a7c15ULL + v);
}

/// Deterministic 64-bit generator (splitmix64 stream). All samplers are
/// implemented here so sequences are identical across platforms and standard
/// library versions; std::uniform_real_distribution and friends are not
/// guaranteed to be reproducible between implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform in [0, 1), 53 random bits.
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept {
        return lo + next_double() * (hi - lo);
    }

    /// Uniform in [0, n) without modulo bias (Lemire multiply-shift; the
    /// residual bias of the plain multiply is < 2^-64 * n, ignored).
    std::uint64_t next_below(std::uint64_t n) noexcept {
        const unsigned __int128 wide =
            static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
        return static_cast<std::uint64_t>(wide >> 64);
    }

    /// Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) noexcept {
        return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool bernoulli(double p) noexcept { return next_double() < p; }

    /// Standard normal via the Marsaglia polar method (exact rejection,
    /// consumes a variable number of draws).
    double normal() noexcept {
        for (;;) {
            const double u = uniform(-1.0, 1.0);
            const double v = uniform(-1.0, 1.0);
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                return u * std::sqrt(-2.0 * std::log(s) / s);
            }
        }
    }

    double normal(double mean, double sd) noexcept { return mean + sd * normal(); }

    /// Lognormal parameterised by its real-space mean and standard deviation.
    double lognormal_mean_sd(double mean, double sd) {
        if (!(mean > 0.0)) throw std::invalid_argument("lognormal mean must be > 0");
        if (sd == 0.0) return mean;
        const double cv2 = (sd / mean) * (sd / mean);
        const double sigma2 = std::log1p(cv2);
        const double mu = std::log(mean) - 0.5 * sigma2;
        return std::exp(normal(mu, std::sqrt(sigma2)));
    }

    /// Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be > 0");
        if (shape < 1.0) {
            const double u = next_double();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            const double x = normal();
            const double t = 1.0 + c * x;
            if (t <= 0.0) continue;
            const double v = t * t * t;
            const double u = next_double();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
                return d * v;
            }
        }
    }

    double beta(double a, double b) {
        const double ga = gamma(a);
        const double gb = gamma(b);
        return ga / (ga + gb);
    }

private:
    std::uint64_t state_;
};

/// Purposes of the derived substreams. Every stochastic decision in the
/// simulation draws from a stream keyed by (seed, day, agent id, purpose),
/// so results are independent of evaluation order and worker count.
enum class Draw : std::uint64_t {
    Population = 1,
    Move = 2,
    Exposure = 3,
    Duration = 4,
    Hazard = 5,
};

inline Rng substream(std::uint64_t seed, int day, std::uint32_t id, Draw purpose) noexcept {
    std::uint64_t h = mix64(seed);
    h = hash_combine(h, static_cast<std::uint64_t>(day));
    h = hash_combine(h, id);
    h = hash_combine(h, static_cast<std::uint64_t>(purpose));
    return Rng(h);
}

/// Substream for a directed pair of agents (one Bernoulli draw per
/// infector-susceptible pair per day).
inline Rng pair_substream(std::uint64_t seed, int day, std::uint32_t a, std::uint32_t b,
                          Draw purpose) noexcept {
    std::uint64_t h = mix64(seed);
    h = hash_combine(h, static_cast<std::uint64_t>(day));
    h = hash_combine(h, a);
    h = hash_combine(h, b);
    h = hash_combine(h, static_cast<std::uint64_t>(purpose));
    return Rng(h);
}

} // namespace fuzzyepi

#endif
