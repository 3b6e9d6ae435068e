#pragma once

#include <cmath>
#include <cstdint>

namespace radialbodies {

// Counter-based splitmix64 generator. Chosen over <random> engines so that
// streams are cheap to fork and output is identical across platforms and
// standard-library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (both values used, no hidden state
    /// beyond the cached spare).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        double u2 = uniform();
        double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(6.283185307179586476925286766559 * u2);
        have_spare_ = true;
        return mag * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Independent substream for (seed, index) pairs; used by parallel
    /// samplers so that results do not depend on the execution schedule.
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        return Rng(derive_seed(seed, index));
    }

    /// Well-mixed child seed for (seed, index).
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
        Rng mix(seed ^ (0x9e3779b97f4a7c15ull * (index + 1)));
        mix.next_u64();
        return mix.next_u64();
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace radialbodies
