#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace dpca {

/// Seeded random state with labeled, independent substreams.
///
/// Substreams are derived from the seed this stream was created with, not from
/// its current state, so drawing from a parent never perturbs its children.
/// Uniform draws are built directly on the raw 64-bit engine output because the
/// standard distribution objects are implementation-defined; results are
/// therefore identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 bits of precision.
    double uniform();

    /// Uniform integer in [0, bound). `bound` must be positive.
    std::uint64_t below(std::uint64_t bound);

    Rng substream(std::string_view label) const;
    Rng substream(std::uint64_t index) const;

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Stateless hash used for seed derivation and seeded per-key draws.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key);

}  // namespace dpca
