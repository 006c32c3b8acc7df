#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dpca/bundle.hpp"
#include "dpca/random.hpp"
#include "dpca/valuation.hpp"

namespace dpca {

struct Report {
    Bundle bundle;
    double value = 0.0;

    friend bool operator==(const Report&, const Report&) = default;
};

/// One bidder's answers to the query phase: distinct bundles with values in
/// [0,1], on the grid when one is given.
class ReportSet {
public:
    ReportSet() = default;
    explicit ReportSet(std::vector<Report> reports, std::optional<Grid> grid = std::nullopt);

    /// Pairs `values[t]` with `bundles[t]`.
    static ReportSet from_values(std::span<const Bundle> bundles, std::span<const double> values,
                                 std::optional<Grid> grid = std::nullopt);

    std::size_t size() const { return reports_.size(); }
    bool empty() const { return reports_.empty(); }
    const std::vector<Report>& reports() const { return reports_; }
    auto begin() const { return reports_.begin(); }
    auto end() const { return reports_.end(); }
    std::optional<double> value_of(const Bundle& bundle) const;

    friend bool operator==(const ReportSet&, const ReportSet&) = default;

private:
    std::vector<Report> reports_;
};

/// Reports the true value.
struct Truthful {};

/// Reports according to a fixed alternative valuation v'.
struct FixedMisreport {
    Valuation reported;
};

/// Reports a grid point chosen by a seeded hash of the bundle. The empty bundle
/// is always reported as 0.
struct RandomGridMisreport {
    std::uint64_t seed = 0;
    Grid grid{0.1};
};

/// Deterministic rule mapping a true valuation and a bundle to a reported value.
class BidderStrategy {
public:
    using Rule = std::variant<Truthful, FixedMisreport, RandomGridMisreport>;

    BidderStrategy() = default;
    BidderStrategy(Rule rule) : rule_(std::move(rule)) {}  // NOLINT(google-explicit-constructor)

    static BidderStrategy truthful() { return BidderStrategy(Truthful{}); }
    static BidderStrategy fixed(Valuation reported) {
        return BidderStrategy(FixedMisreport{std::move(reported)});
    }
    static BidderStrategy random_grid(std::uint64_t seed, Grid grid) {
        return BidderStrategy(RandomGridMisreport{seed, grid});
    }

    double report(const Valuation& truth, const Bundle& bundle) const;
    bool is_truthful() const { return std::holds_alternative<Truthful>(rule_); }
    const Rule& rule() const { return rule_; }
    std::string describe() const;

private:
    Rule rule_ = Truthful{};
};

/// T distinct bundles drawn uniformly without replacement from all 2^m bundles
/// (the empty bundle included).
std::vector<Bundle> generate_queries(int count, int items, Rng& rng);

ReportSet elicit_reports(const BidderStrategy& strategy, const Valuation& truth,
                         std::span<const Bundle> queries);

}  // namespace dpca
