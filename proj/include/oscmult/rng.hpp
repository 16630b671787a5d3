#pragma once

#include <complex>
#include <cstdint>
#include <cmath>

namespace oscmult {

// SplitMix64. The update is fully specified by integer arithmetic, so a given
// seed produces the same stream on every platform and standard library.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// Random source for experiments. Gaussians come from Box-Muller on the raw
// bit stream rather than std::normal_distribution, which keeps sequences
// independent of the standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Deterministic per-trial stream: trial i of a seeded run always sees the
    // same values, no matter how trials are distributed over workers.
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 mixer(seed ^ (0xA0761D6478BD642Full * (index + 1)));
        return Rng(mixer.next());
    }

    std::uint64_t next_u64() { return gen_.next(); }

    // Uniform in [0, 1), 53 bits.
    double uniform() { return static_cast<double>(gen_.next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n) via the 128-bit multiply-shift reduction.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(gen_.next()) * n) >> 64);
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::complex<double> cgaussian() {
        double re = gaussian();
        double im = gaussian();
        return {re, im};
    }

private:
    SplitMix64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace oscmult
