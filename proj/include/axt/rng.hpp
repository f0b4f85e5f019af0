#pragma once

#include <cstdint>
#include <random>

namespace axt {

// Seeded generator with distribution helpers built directly on the engine's
// output bits, so streams are identical across standard library vendors.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform value in [0, 2^bits).
    std::uint64_t bits(int n) { return n >= 64 ? next() : next() & ((std::uint64_t{1} << n) - 1); }

    // Uniform value in [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    // Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return unit() < p; }

    // Independent child seed derived from this generator.
    std::uint64_t fork() { return next() ^ 0x9e3779b97f4a7c15ULL; }

private:
    std::mt19937_64 engine_;
};

}  // namespace axt
