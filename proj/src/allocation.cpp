#include "dpca/allocation.hpp"

#include <string>

#include "dpca/errors.hpp"

namespace dpca {

Allocation::Allocation(std::vector<Bundle> bundles) : bundles_(std::move(bundles)) {
    if (bundles_.empty()) {
        throw ParameterError("allocation needs at least one bidder");
    }
    const int width = bundles_.front().width();
    std::uint32_t covered = 0;
    for (const auto& b : bundles_) {
        if (b.width() != width) {
            throw ParameterError("allocation mixes bundle widths");
        }
        if ((covered & b.mask()) != 0) {
            throw ParameterError("allocation assigns an item to more than one bidder");
        }
        covered |= b.mask();
    }
    if (covered != Bundle::full(width).mask()) {
        throw ParameterError("allocation leaves an item unassigned");
    }
}

Allocation Allocation::from_owners(int bidders, std::span<const int> owners) {
    if (bidders < 1) {
        throw ParameterError("allocation needs at least one bidder");
    }
    const int width = static_cast<int>(owners.size());
    std::vector<Bundle> bundles(bidders, Bundle::empty(width));
    for (int j = 0; j < width; ++j) {
        const int i = owners[j];
        if (i < 0 || i >= bidders) {
            throw ParameterError("item " + std::to_string(j) + " assigned to unknown bidder " +
                                 std::to_string(i));
        }
        bundles[i] = bundles[i].with(j);
    }
    return Allocation(std::move(bundles));
}

int Allocation::owner(int item) const {
    for (int i = 0; i < bidders(); ++i) {
        if (bundles_[i].contains(item)) return i;
    }
    throw ParameterError("item " + std::to_string(item) + " outside the allocation");
}

std::uint64_t Allocation::canonical_index() const {
    std::uint64_t index = 0;
    for (int j = items() - 1; j >= 0; --j) {
        index = index * static_cast<std::uint64_t>(bidders()) + static_cast<std::uint64_t>(owner(j));
    }
    return index;
}

std::uint64_t allocation_count(int bidders, int items, std::uint64_t cap) {
    std::uint64_t count = 1;
    for (int j = 0; j < items; ++j) {
        count *= static_cast<std::uint64_t>(bidders);
        if (count > cap) return cap + 1;
    }
    return count;
}

std::vector<Allocation> enumerate_allocations(int bidders, int items, std::uint64_t cap) {
    if (bidders < 1 || items < 1 || items > Bundle::kMaxItems) {
        throw ParameterError("enumerate_allocations needs n >= 1 and 1 <= m <= " +
                             std::to_string(Bundle::kMaxItems));
    }
    const std::uint64_t count = allocation_count(bidders, items, cap);
    if (count > cap) {
        throw ResourceError("n^m = " + std::to_string(bidders) + "^" + std::to_string(items) +
                                " allocations exceed the enumeration cap",
                            count, cap);
    }
    std::vector<Allocation> out;
    out.reserve(count);
    std::vector<int> owners(items, 0);
    for (std::uint64_t index = 0; index < count; ++index) {
        std::uint64_t rest = index;
        for (int j = 0; j < items; ++j) {
            owners[j] = static_cast<int>(rest % bidders);
            rest /= bidders;
        }
        out.push_back(Allocation::from_owners(bidders, owners));
    }
    return out;
}

}  // namespace dpca
