#pragma once

#include <cstdint>
#include <random>

namespace oscdecay {

// All randomized sampling goes through this wrapper. The raw mt19937_64
// stream with an explicit uniform mapping keeps values identical across
// standard libraries (std::uniform_real_distribution is not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        // 53-bit mantissa draw in [0, 1).
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

// Decorrelates sub-streams derived from one user seed (splitmix64 step).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace oscdecay
