#pragma once

#include <cmath>
#include <cstdint>

namespace permlz {

// All randomness in the library flows through this generator. It is fixed
// and versioned: golden tests pin its output, so do not change the mixing
// constants or the uniform/Gaussian recipes without bumping those tests.
inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

// Counter-derived stream seeds: (master, stream, index) -> independent seed.
// Used for per-(source, realization) streams so experiment results do not
// depend on scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index) {
    return mix64(mix64(master + golden_gamma * (stream + 1)) +
                 golden_gamma * (index + 1));
}

// SplitMix64 (Steele, Lea, Flood 2014).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += golden_gamma;
        return mix64(state_);
    }

    // Uniform on [0, 1), 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1]; never zero, safe under log().
    double uniform01_open_low() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

private:
    std::uint64_t state_;
};

// Box-Muller over SplitMix64. Emits the cosine branch first; the sine
// branch is cached so consecutive calls consume uniforms in a fixed order.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.uniform01_open_low();
        const double u2 = rng_.uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    SplitMix64& raw() { return rng_; }

private:
    SplitMix64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace permlz
