#pragma once

#include <cstdint>
#include <random>

namespace brillo {

// Seeded generator with hand-rolled draw functions so that sampled values
// are identical across standard libraries (std distributions are not
// portable across implementations).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform double in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi].
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection sampling to avoid modulo bias.
        std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace brillo
