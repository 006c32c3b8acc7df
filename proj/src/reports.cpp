#include "dpca/reports.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "dpca/errors.hpp"

namespace dpca {

ReportSet::ReportSet(std::vector<Report> reports, std::optional<Grid> grid)
        : reports_(std::move(reports)) {
    for (std::size_t a = 0; a < reports_.size(); ++a) {
        const double v = reports_[a].value;
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ParameterError("reported value outside [0,1]: " + std::to_string(v));
        }
        if (grid && !grid->contains(v)) {
            throw ParameterError("reported value off the grid: " + std::to_string(v));
        }
        if (reports_[a].bundle.width() != reports_.front().bundle.width()) {
            throw ParameterError("report set mixes bundle widths");
        }
        for (std::size_t b = 0; b < a; ++b) {
            if (reports_[a].bundle == reports_[b].bundle) {
                throw ParameterError("report set repeats bundle " + to_string(reports_[a].bundle));
            }
        }
    }
}

ReportSet ReportSet::from_values(std::span<const Bundle> bundles, std::span<const double> values,
                                 std::optional<Grid> grid) {
    if (bundles.size() != values.size()) {
        throw ParameterError("report set needs one value per bundle");
    }
    std::vector<Report> reports;
    reports.reserve(bundles.size());
    for (std::size_t t = 0; t < bundles.size(); ++t) {
        reports.push_back({bundles[t], values[t]});
    }
    return ReportSet(std::move(reports), grid);
}

std::optional<double> ReportSet::value_of(const Bundle& bundle) const {
    for (const auto& r : reports_) {
        if (r.bundle == bundle) return r.value;
    }
    return std::nullopt;
}

double BidderStrategy::report(const Valuation& truth, const Bundle& bundle) const {
    struct Visitor {
        const Valuation& truth;
        const Bundle& bundle;

        double operator()(const Truthful&) const { return truth(bundle); }
        double operator()(const FixedMisreport& s) const { return s.reported(bundle); }
        double operator()(const RandomGridMisreport& s) const {
            if (bundle.is_empty()) return 0.0;
            const auto h = mix_seed(s.seed, bundle.mask());
            return s.grid.value(static_cast<int>(h % static_cast<std::uint64_t>(s.grid.levels() + 1)));
        }
    };
    return std::visit(Visitor{truth, bundle}, rule_);
}

std::string BidderStrategy::describe() const {
    struct Visitor {
        std::string operator()(const Truthful&) const { return "truthful"; }
        std::string operator()(const FixedMisreport& s) const {
            std::ostringstream out;
            out << "fixed";
            for (std::size_t mask = 1; mask < s.reported.table().size(); ++mask) {
                out << ' ' << s.reported.table()[mask];
            }
            return out.str();
        }
        std::string operator()(const RandomGridMisreport& s) const {
            return "random " + std::to_string(s.seed);
        }
    };
    return std::visit(Visitor{}, rule_);
}

std::vector<Bundle> generate_queries(int count, int items, Rng& rng) {
    if (items < 1 || items > Bundle::kMaxItems) {
        throw ParameterError("query generation needs 1 <= m <= " + std::to_string(Bundle::kMaxItems));
    }
    const std::uint32_t pool_size = bundle_count(items);
    if (count < 1 || static_cast<std::uint32_t>(count) > pool_size) {
        throw ParameterError("query count T=" + std::to_string(count) + " outside [1, 2^" +
                             std::to_string(items) + "]");
    }
    // Partial Fisher-Yates over all bundle masks.
    std::vector<std::uint32_t> pool(pool_size);
    std::iota(pool.begin(), pool.end(), 0u);
    std::vector<Bundle> out;
    out.reserve(count);
    for (std::uint32_t t = 0; t < static_cast<std::uint32_t>(count); ++t) {
        const auto pick = t + static_cast<std::uint32_t>(rng.below(pool_size - t));
        std::swap(pool[t], pool[pick]);
        out.emplace_back(items, pool[t]);
    }
    return out;
}

ReportSet elicit_reports(const BidderStrategy& strategy, const Valuation& truth,
                         std::span<const Bundle> queries) {
    std::vector<Report> reports;
    reports.reserve(queries.size());
    for (const auto& x : queries) {
        reports.push_back({x, strategy.report(truth, x)});
    }
    return ReportSet(std::move(reports), truth.grid());
}

}  // namespace dpca
