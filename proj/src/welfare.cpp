#include "dpca/welfare.hpp"

namespace dpca {

double normalized_welfare(const ValuationProfile& profile, const Allocation& allocation) {
    return normalized_welfare([&](int i, const Bundle& b) { return profile[i](b); }, allocation);
}

double true_welfare(const ValuationProfile& profile, const Allocation& allocation) {
    double total = 0.0;
    for (int i = 0; i < allocation.bidders(); ++i) {
        total += profile[i](allocation.bundle(i));
    }
    return total;
}

}  // namespace dpca
