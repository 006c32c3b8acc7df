#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dpca/allocation.hpp"
#include "dpca/random.hpp"

namespace dpca {

inline constexpr std::uint64_t kDefaultCandidateCap = 1u << 20;
inline constexpr double kSubsetTieTolerance = 1e-12;

/// k distinct allocations, held as strictly increasing canonical indices.
struct KAllocation {
    std::vector<std::size_t> members;

    std::size_t size() const { return members.size(); }
    friend bool operator==(const KAllocation&, const KAllocation&) = default;
};

/// C(n, k), or `cap + 1` if it would exceed `cap`.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k, std::uint64_t cap = UINT64_MAX - 1);

/// All C(count, k) subsets of {0..count-1} in lexicographic order.
std::vector<KAllocation> enumerate_k_allocations(std::size_t count, int k,
                                                 std::uint64_t cap = kDefaultCandidateCap);
std::vector<KAllocation> enumerate_k_allocations(std::span<const Allocation> allocations, int k,
                                                 std::uint64_t cap = kDefaultCandidateCap);

/// SW(A_k): mean of the per-allocation welfare over the members.
double k_allocation_welfare(const KAllocation& kalloc, std::span<const double> allocation_welfare);

/// A welfare-maximising k-subset. SW within kSubsetTieTolerance of the optimum
/// counts as a tie, and the lexicographically first tied subset is returned.
KAllocation top_k_allocation(std::span<const double> allocation_welfare, int k);

struct ExpMechParams {
    double epsilon = 1.0;
    int bidders = 1;

    /// Welfare sensitivity to one bidder's reports, 1/n.
    double sensitivity() const { return 1.0 / bidders; }
};

/// Exponents epsilon * score / (2 * sensitivity) = epsilon * n * score / 2.
std::vector<double> exp_mech_exponents(std::span<const double> scores, const ExpMechParams& params);

/// Log-probabilities of the exponential mechanism, normalized by log-sum-exp.
std::vector<double> exp_mech_log_distribution(std::span<const double> scores,
                                              const ExpMechParams& params);

/// Probabilities proportional to exp(epsilon * n * score / 2).
std::vector<double> exp_mech_distribution(std::span<const double> scores,
                                          const ExpMechParams& params);

/// Inverse-CDF draw over the given order.
std::size_t exp_mech_sample(std::span<const double> distribution, Rng& rng);

}  // namespace dpca
