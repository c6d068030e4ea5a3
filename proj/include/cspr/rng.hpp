#pragma once

#include <cstdint>
#include <random>

namespace cspr {

// All samplers draw from std::mt19937_64 seeded with the 64-bit seed. Uniforms use the top 53
// bits, u = (x >> 11) * 2^-53, so streams are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

// Seed of replicate r in a run seeded with `seed`.
constexpr std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t replicate) noexcept {
    return seed + replicate;
}

}  // namespace cspr
