#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>

namespace dpca {

/// A subset of the m auctioned items, stored as a bit mask of fixed width.
///
/// Bit j set means item j is in the bundle. The all-zeros bundle is the empty
/// bundle. Bundles of different widths never compare equal.
class Bundle {
public:
    static constexpr int kMaxItems = 16;

    Bundle() = default;
    Bundle(int width, std::uint32_t mask);

    static Bundle empty(int width) { return Bundle(width, 0); }
    static Bundle full(int width) { return Bundle(width, (1u << width) - 1u); }

    int width() const { return width_; }
    std::uint32_t mask() const { return mask_; }
    bool is_empty() const { return mask_ == 0; }
    int size() const { return std::popcount(mask_); }
    bool contains(int item) const { return (mask_ >> item) & 1u; }
    bool intersects(const Bundle& other) const { return (mask_ & other.mask_) != 0; }

    Bundle with(int item) const { return Bundle(width_, mask_ | (1u << item)); }

    friend bool operator==(const Bundle&, const Bundle&) = default;
    friend auto operator<=>(const Bundle&, const Bundle&) = default;

private:
    int width_ = 0;
    std::uint32_t mask_ = 0;
};

/// Number of bundles over m items, 2^m.
inline std::uint32_t bundle_count(int items) { return 1u << items; }

/// Items are printed 0-based, e.g. "{0,2}"; the empty bundle is "{}".
std::string to_string(const Bundle& bundle);

}  // namespace dpca
