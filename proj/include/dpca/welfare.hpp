#pragma once

#include <concepts>

#include "dpca/allocation.hpp"
#include "dpca/valuation.hpp"

namespace dpca {

/// (1/n) * sum_i value(i, a^i), for any per-bidder value oracle.
template <typename Oracle>
    requires std::invocable<const Oracle&, int, const Bundle&>
double normalized_welfare(const Oracle& value, const Allocation& allocation) {
    double total = 0.0;
    for (int i = 0; i < allocation.bidders(); ++i) {
        total += value(i, allocation.bundle(i));
    }
    return total / allocation.bidders();
}

double normalized_welfare(const ValuationProfile& profile, const Allocation& allocation);

/// Sum of the bidders' true values for their assigned bundles.
double true_welfare(const ValuationProfile& profile, const Allocation& allocation);

}  // namespace dpca
