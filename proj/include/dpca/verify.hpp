#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dpca/auction.hpp"

namespace dpca {

/// Number of bidders whose report sets differ.
std::size_t report_distance(std::span<const ReportSet> first, std::span<const ReportSet> second);

/// Two report profiles that differ in at most one bidder's report set.
struct NeighborPair {
    std::vector<ReportSet> first;
    std::vector<ReportSet> second;

    /// Throws ParameterError unless the profiles have equal length and
    /// distance at most 1.
    NeighborPair(std::vector<ReportSet> a, std::vector<ReportSet> b);
};

struct DpCheck {
    double max_log_ratio = 0.0;
    double epsilon = 0.0;
    bool pass = false;
};

/// Max over candidates of |log P(A | d1) - log P(A | d2)| for the exact
/// selection distributions. Passes when it is at most epsilon + 1e-9.
DpCheck verify_dp(const CandidateSpace& space, const NeighborPair& pair, double epsilon,
                  const Learner& learner = ridge_learner());

/// Every grid-valued report set on the given bundles, empty bundle included.
std::vector<ReportSet> grid_report_sets(std::span<const Bundle> bundles, const Grid& grid,
                                        std::uint64_t cap = 1u << 20);

struct DpSweep {
    std::size_t query_sets = 0;
    std::size_t pairs = 0;
    double max_log_ratio = 0.0;
    double epsilon = 0.0;
    bool pass = false;
};

/// verify_dp over every query set of size T and every neighbour obtained by
/// replacing one bidder's truthful report set with each grid alternative.
DpSweep verify_dp_exhaustive(const CandidateSpace& space, const ValuationProfile& profile,
                             int queries, const Grid& grid, double epsilon,
                             const Learner& learner = ridge_learner(),
                             std::uint64_t cap = 1u << 22);

/// Misreports v' over the queried bundles: every grid assignment of the
/// non-empty queried bundles when there are at most `exhaustive_limit` of
/// them, else `samples` seeded draws. The empty bundle is always reported as 0.
std::vector<ReportSet> grid_deviations(std::span<const Bundle> queries, const Grid& grid, Rng& rng,
                                       std::size_t exhaustive_limit = 1u << 14,
                                       std::size_t samples = 200);

/// Exact expected utility of `bidder` when the query-phase reports are
/// `reports` and the mechanism is the q-mixture `mix` (q = 0 gives the pure
/// refined auction). The expectation runs over the branch, the uniform pick
/// of x* among the queries and the exact selection distribution.
double exact_expected_utility(const CandidateSpace& space, const Market& market,
                              std::span<const Bundle> queries, std::span<const ReportSet> reports,
                              int bidder, const MixtureParams& mix,
                              const Learner& learner = ridge_learner());

struct TruthfulnessReport {
    int bidder = 0;
    std::optional<ReportSet> best_deviation;
    double truthful_utility = 0.0;
    double gain = 0.0;
    double bound = 0.0;
    std::size_t deviations = 0;
    bool pass = false;
};

/// Largest exact expected-utility gain of `bidder` over `deviations` against
/// its truthful query reports. Passes when the gain is at most 2 epsilon + 1e-9.
/// Throws ParameterError if some restricted-VCG utility of the bidder falls
/// outside [0,1].
TruthfulnessReport verify_two_eps_truthful(const CandidateSpace& space, const Market& market,
                                           std::span<const Bundle> queries, int bidder,
                                           std::span<const ReportSet> deviations, double epsilon,
                                           double q = 0.0,
                                           const Learner& learner = ridge_learner());

/// Largest second-price utility loss over the queried bundles caused by the
/// deviation, other bidders reporting as in `reports`.
double punishment_margin(const Market& market, std::span<const Bundle> queries,
                         std::span<const ReportSet> reports, int bidder, const ReportSet& deviation);

/// Exact truthfulness of the q-mixture: passes when no deviation gains more
/// than 1e-9. Throws ParameterError when 2 epsilon > q c / 2^m, when the
/// profile or a deviation is off the c-grid, or when a deviation that differs
/// from the truth is not punished by at least c on some queried bundle.
TruthfulnessReport verify_exact_truthful(const CandidateSpace& space, const Market& market,
                                         std::span<const Bundle> queries, int bidder,
                                         std::span<const ReportSet> deviations,
                                         const MixtureParams& mix,
                                         const Learner& learner = ridge_learner());

struct WelfareGapSample {
    std::uint64_t seed = 0;
    double optimal_sw = 0.0;
    double realized_sw = 0.0;
    double gap = 0.0;
};

/// One refined-auction run from `root`: OPT = max SW(A_k) and the realized
/// SW(A_k*) on the learned values.
WelfareGapSample welfare_gap(const CandidateSpace& space, const AuctionInstance& instance,
                             const Market& market, const Rng& root,
                             const Learner& learner = ridge_learner());

struct TailRow {
    double t = 0.0;
    double threshold = 0.0;
    std::size_t exceedances = 0;
    double frequency = 0.0;
    double bound = 0.0;
    double sigma = 0.0;
    bool pass = false;
};

struct TailCheck {
    std::size_t trials = 0;
    double log_range = 0.0;
    std::vector<TailRow> rows;
    std::vector<WelfareGapSample> samples;
    bool pass = false;
};

/// Frequency of OPT - SW(A_k*) >= (2 / (epsilon n)) (ln |range| + t) over
/// seeded trials, against e^-t plus three binomial standard deviations.
/// Trial r uses root.substream(r). Needs at least 1000 trials.
TailCheck welfare_tail_check(const CandidateSpace& space, const AuctionInstance& instance,
                             const Market& market, std::size_t trials,
                             std::span<const double> t_values, const Rng& root,
                             const Learner& learner = ridge_learner());

/// Exhaustive maximum of SW(A_k) over every k-subset; the lexicographically
/// first subset within kSubsetTieTolerance of the maximum wins.
std::pair<KAllocation, double> brute_force_opt_k(std::span<const double> allocation_welfare, int k,
                                                 std::uint64_t cap = kDefaultCandidateCap);

using ProfileGenerator = std::function<ValuationProfile(int bidders, Rng& rng)>;
using EpsilonSchedule = std::function<double(int bidders)>;

struct TrendRow {
    int bidders = 0;
    double epsilon = 0.0;
    double mean_gap = 0.0;
    double std_error = 0.0;
    std::vector<WelfareGapSample> samples;
};

struct TrendSweep {
    std::vector<TrendRow> rows;
    bool pass = false;
};

struct TrendSettings {
    int items = 2;
    int k = 2;
    int queries = 2;
    int trials = 1000;
    EnumerationCaps caps;
};

/// Mean welfare gap of the refined auction for each n, truthful bidders with
/// profiles from `generator`. Passes when consecutive means never rise by more
/// than two standard errors of their difference and the last mean is below
/// the first.
TrendSweep welfare_trend_sweep(const TrendSettings& settings, std::span<const int> bidder_counts,
                               const EpsilonSchedule& schedule, const ProfileGenerator& generator,
                               const Rng& root, const Learner& learner = ridge_learner());

}  // namespace dpca
