#include "dpca/valuation.hpp"

#include <cmath>
#include <string>

#include "dpca/errors.hpp"

namespace dpca {

namespace {

constexpr double kGridTol = 1e-9;

}  // namespace

Bundle::Bundle(int width, std::uint32_t mask) : width_(width), mask_(mask) {
    if (width < 0 || width > kMaxItems) {
        throw ParameterError("bundle width " + std::to_string(width) + " outside [0, " +
                             std::to_string(kMaxItems) + "]");
    }
    if (width < 32 && (mask >> width) != 0) {
        throw ParameterError("bundle mask has bits beyond width " + std::to_string(width));
    }
}

std::string to_string(const Bundle& bundle) {
    std::string out = "{";
    bool first = true;
    for (int j = 0; j < bundle.width(); ++j) {
        if (bundle.contains(j)) {
            if (!first) out += ',';
            out += std::to_string(j);
            first = false;
        }
    }
    out += '}';
    return out;
}

Grid::Grid(double step) {
    if (!(step > 0.0) || step > 1.0) {
        throw ParameterError("grid step must lie in (0, 1], got " + std::to_string(step));
    }
    const double inverse = 1.0 / step;
    levels_ = static_cast<int>(std::lround(inverse));
    if (std::abs(inverse - levels_) > kGridTol * inverse) {
        throw ParameterError("grid step " + std::to_string(step) + " does not divide 1");
    }
}

bool Grid::contains(double value) const {
    if (value < -kGridTol || value > 1.0 + kGridTol) return false;
    const double scaled = value * levels_;
    return std::abs(scaled - std::round(scaled)) < kGridTol * levels_;
}

int Grid::nearest_level(double value) const {
    const double scaled = value * levels_;
    const double lower = std::floor(scaled);
    // Midpoints (within float noise) go to the lower point.
    int level = static_cast<int>(lower);
    if (scaled - lower > 0.5 + kGridTol) ++level;
    if (level < 0) level = 0;
    if (level > levels_) level = levels_;
    return level;
}

double snap_to_grid(double value, double c) {
    return Grid(c).snap(value);
}

Valuation::Valuation(int items, std::vector<double> table, std::optional<Grid> grid)
        : items_(items), table_(std::move(table)), grid_(grid) {
    if (items < 1 || items > Bundle::kMaxItems) {
        throw ParameterError("valuation item count " + std::to_string(items) + " outside [1, " +
                             std::to_string(Bundle::kMaxItems) + "]");
    }
    if (table_.size() != bundle_count(items)) {
        throw ParameterError("valuation table has " + std::to_string(table_.size()) +
                             " entries, expected 2^" + std::to_string(items));
    }
    if (table_[0] != 0.0) {
        throw ParameterError("valuation of the empty bundle must be 0");
    }
    for (std::size_t mask = 0; mask < table_.size(); ++mask) {
        const double v = table_[mask];
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ParameterError("valuation of bundle mask " + std::to_string(mask) +
                                 " outside [0,1]: " + std::to_string(v));
        }
        if (grid_ && !grid_->contains(v)) {
            throw ParameterError("valuation of bundle mask " + std::to_string(mask) +
                                 " is off the grid: " + std::to_string(v));
        }
    }
}

Valuation Valuation::from_nonempty(int items, std::span<const double> values,
                                   std::optional<Grid> grid) {
    if (items < 1 || items > Bundle::kMaxItems ||
        values.size() + 1 != bundle_count(items)) {
        throw ParameterError("expected 2^m - 1 non-empty bundle values");
    }
    std::vector<double> table(values.size() + 1, 0.0);
    std::copy(values.begin(), values.end(), table.begin() + 1);
    return Valuation(items, std::move(table), grid);
}

Valuation Valuation::additive(int items, std::span<const double> item_values,
                              std::optional<Grid> grid) {
    if (static_cast<int>(item_values.size()) != items) {
        throw ParameterError("additive valuation needs one value per item");
    }
    std::vector<double> table(bundle_count(items), 0.0);
    for (std::uint32_t mask = 1; mask < table.size(); ++mask) {
        double total = 0.0;
        for (int j = 0; j < items; ++j) {
            if ((mask >> j) & 1u) total += item_values[j];
        }
        table[mask] = total;
    }
    return Valuation(items, std::move(table), grid);
}

Valuation Valuation::zero(int items, std::optional<Grid> grid) {
    return Valuation(items, std::vector<double>(bundle_count(items), 0.0), grid);
}

double Valuation::operator()(const Bundle& bundle) const {
    if (bundle.width() != items_) {
        throw ParameterError("bundle width " + std::to_string(bundle.width()) +
                             " does not match valuation over " + std::to_string(items_) +
                             " items");
    }
    return table_[bundle.mask()];
}

ValuationProfile::ValuationProfile(std::vector<Valuation> bidders) : bidders_(std::move(bidders)) {
    if (bidders_.empty()) {
        throw ParameterError("valuation profile needs at least one bidder");
    }
    for (const auto& v : bidders_) {
        if (v.items() != bidders_.front().items()) {
            throw ParameterError("valuation profile mixes item counts");
        }
    }
}

}  // namespace dpca
