#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dpca/bundle.hpp"

namespace dpca {

/// The discrete value set {0, c, 2c, ..., 1}. The step must divide 1.
class Grid {
public:
    explicit Grid(double step);

    double step() const { return 1.0 / levels_; }
    /// Number of steps between 0 and 1; the grid has levels() + 1 points.
    int levels() const { return levels_; }
    double value(int level) const { return static_cast<double>(level) / levels_; }
    bool contains(double value) const;
    /// Level of the nearest grid point; exact midpoints round down.
    int nearest_level(double value) const;
    double snap(double value) const { return this->value(nearest_level(value)); }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int levels_;
};

/// Nearest point of the c-grid to `value`, ties rounding down.
double snap_to_grid(double value, double c);

/// A bidder's value for every bundle over m items, tabulated by bundle mask.
///
/// Values lie in [0,1] and the empty bundle is worth exactly 0. When a grid is
/// attached every value is a grid point.
class Valuation {
public:
    Valuation(int items, std::vector<double> table, std::optional<Grid> grid = std::nullopt);

    /// Builds a valuation from the values of the non-empty bundles, listed by
    /// increasing mask (1, 2, ..., 2^m - 1).
    static Valuation from_nonempty(int items, std::span<const double> values,
                                   std::optional<Grid> grid = std::nullopt);
    static Valuation additive(int items, std::span<const double> item_values,
                              std::optional<Grid> grid = std::nullopt);
    static Valuation zero(int items, std::optional<Grid> grid = std::nullopt);

    int items() const { return items_; }
    const std::optional<Grid>& grid() const { return grid_; }
    std::span<const double> table() const { return table_; }

    double operator()(const Bundle& bundle) const;

    friend bool operator==(const Valuation&, const Valuation&) = default;

private:
    int items_;
    std::vector<double> table_;
    std::optional<Grid> grid_;
};

/// Per-bidder true valuations; all share the same item count.
class ValuationProfile {
public:
    explicit ValuationProfile(std::vector<Valuation> bidders);

    int bidders() const { return static_cast<int>(bidders_.size()); }
    int items() const { return bidders_.front().items(); }
    const Valuation& operator[](int bidder) const { return bidders_.at(bidder); }
    const std::vector<Valuation>& valuations() const { return bidders_; }

private:
    std::vector<Valuation> bidders_;
};

}  // namespace dpca
