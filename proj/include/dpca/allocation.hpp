#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dpca/bundle.hpp"

namespace dpca {

inline constexpr std::uint64_t kDefaultAllocationCap = 1u << 16;

/// Assignment of every item to exactly one bidder.
///
/// Bidder i receives bundle(i); bundles are pairwise disjoint and cover all
/// items. The canonical index reads the owners as a base-n number with item 0
/// as the least significant digit.
class Allocation {
public:
    /// Validates disjointness and full coverage.
    explicit Allocation(std::vector<Bundle> bundles);

    static Allocation from_owners(int bidders, std::span<const int> owners);

    int bidders() const { return static_cast<int>(bundles_.size()); }
    int items() const { return bundles_.front().width(); }
    const Bundle& bundle(int bidder) const { return bundles_.at(bidder); }
    const std::vector<Bundle>& bundles() const { return bundles_; }
    int owner(int item) const;
    std::uint64_t canonical_index() const;

    friend bool operator==(const Allocation&, const Allocation&) = default;

private:
    std::vector<Bundle> bundles_;
};

/// n^m, or `cap + 1` if it would exceed `cap`.
std::uint64_t allocation_count(int bidders, int items, std::uint64_t cap = kDefaultAllocationCap);

/// All n^m allocations in canonical order. Throws ResourceError when n^m
/// exceeds `cap`.
std::vector<Allocation> enumerate_allocations(int bidders, int items,
                                              std::uint64_t cap = kDefaultAllocationCap);

}  // namespace dpca
