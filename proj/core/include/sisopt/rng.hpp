#ifndef SISOPT_RNG_HPP
#define SISOPT_RNG_HPP

#include <cstdint>
#include <random>

namespace sisopt {

/// Deterministic uniform generator. The raw engine output is mapped to
/// doubles by hand so that streams are reproducible across platforms and
/// standard library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t next_u64() { return gen_(); }

    /// splitmix64 step, used to derive independent per-task seeds from a
    /// base seed and a task index.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace sisopt

#endif
