#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dpca/allocation.hpp"
#include "dpca/exp_mech.hpp"
#include "dpca/learner.hpp"
#include "dpca/mechanisms.hpp"
#include "dpca/random.hpp"
#include "dpca/reports.hpp"
#include "dpca/valuation.hpp"

namespace dpca {

struct EnumerationCaps {
    std::uint64_t allocations = kDefaultAllocationCap;
    std::uint64_t candidates = kDefaultCandidateCap;
};

/// Per-bidder estimated values, estimates[i][mask].
using EstimateTable = std::vector<std::vector<double>>;

/// The exponential mechanism's range: all n^m allocations and all of their
/// k-subsets, built once and shared across runs with the same (n, m, k).
class CandidateSpace {
public:
    CandidateSpace(int bidders, int items, int k, EnumerationCaps caps = {});

    int bidders() const { return bidders_; }
    int items() const { return items_; }
    int k() const { return k_; }
    const std::vector<Allocation>& allocations() const { return allocations_; }
    const std::vector<KAllocation>& candidates() const { return candidates_; }

    /// sw(a) = (1/n) sum_i estimates[i][a^i] for every allocation.
    std::vector<double> allocation_welfare(const EstimateTable& estimates) const;
    /// SW(A_k) for every candidate.
    std::vector<double> candidate_welfare(std::span<const double> allocation_welfare) const;
    /// The members of one candidate as a VCG range.
    std::vector<Allocation> omega(std::size_t candidate) const;

private:
    int bidders_;
    int items_;
    int k_;
    std::vector<Allocation> allocations_;
    std::vector<KAllocation> candidates_;
};

struct AuctionInstance {
    int bidders = 3;
    int items = 2;
    int queries = 2;
    int k = 2;
    double epsilon = 0.5;
    EnumerationCaps caps;
};

/// True valuations together with how each bidder answers the query phase and
/// the per-outcome elicitation of the restricted VCG stage.
struct Market {
    ValuationProfile truth;
    std::vector<BidderStrategy> query_strategies;
    std::vector<BidderStrategy> outcome_strategies;

    explicit Market(ValuationProfile profile);
    Market(ValuationProfile profile, std::vector<BidderStrategy> query,
           std::vector<BidderStrategy> outcome);

    int bidders() const { return truth.bidders(); }
};

struct MixtureParams {
    double q = 0.0;
    double c = 1.0;
    double epsilon = 1.0;

    /// 2 * epsilon <= q * c / 2^m, within relative rounding.
    bool exact_truthful_regime(int items) const;
};

enum class Branch { punish, dp_allocate };

const char* to_string(Branch branch);

struct PunishOutcome {
    std::size_t query_index = 0;
    SecondPriceOutcome sale;
};

struct RestrictedVcg {
    std::size_t omega_choice = 0;
    Allocation allocation;
    std::vector<double> payments;
    std::vector<double> utilities;
};

struct AllocationOutcome {
    std::size_t candidate = 0;
    KAllocation selected;
    double selected_sw = 0.0;
    double optimal_sw = 0.0;
    RestrictedVcg vcg;
};

struct AuctionOutcome {
    Branch branch = Branch::dp_allocate;
    std::vector<Bundle> queries;
    std::vector<ReportSet> reports;
    std::optional<PunishOutcome> punish;
    std::optional<AllocationOutcome> allocation;
    std::vector<double> payments;
    std::vector<double> utilities;
};

/// Query-phase reports of every bidder under its query strategy.
std::vector<ReportSet> elicit_profile(const Market& market, std::span<const Bundle> queries);

/// Trains one model per bidder and tabulates it on every bundle.
EstimateTable estimate_profile(std::span<const ReportSet> reports, const Learner& learner);

/// Exact selection probabilities of the exponential mechanism over the space.
std::vector<double> selection_distribution(const CandidateSpace& space,
                                           const EstimateTable& estimates, double epsilon);

/// VCG over Omega = the chosen candidate, with per-outcome reports taken from
/// the market's outcome strategies and utilities from the true valuations.
RestrictedVcg restricted_vcg(const CandidateSpace& space, std::size_t candidate,
                             const Market& market);

/// Second-price sale of queries[index] on the reported values for it.
PunishOutcome punish(std::span<const Bundle> queries, std::span<const ReportSet> reports,
                     std::size_t index);

/// Realized utilities of a second-price sale: the winner gets v(x) - payment.
std::vector<double> punish_utilities(const PunishOutcome& outcome, const ValuationProfile& truth);

/// Refined MLCA with exponential-mechanism selection of A_k*.
///
/// Randomness comes from labeled substreams of `root`: "query" for the query
/// set and "expmech" for the selection draw.
AuctionOutcome refined_mlca(const CandidateSpace& space, const AuctionInstance& instance,
                            const Market& market, const Rng& root,
                            const Learner& learner = ridge_learner());
AuctionOutcome refined_mlca(const AuctionInstance& instance, const Market& market, const Rng& root,
                            const Learner& learner = ridge_learner());

/// Truthful MLCA, the q-mixture of a punishing second-price sale on a random
/// queried bundle and the refined allocation stage. Uses the substreams of
/// refined_mlca plus "branch" and "punish-pick", so q = 0 reproduces
/// refined_mlca draw for draw. `instance.epsilon` is ignored in favour of
/// `mix.epsilon`.
AuctionOutcome truthful_mlca(const CandidateSpace& space, const AuctionInstance& instance,
                             const MixtureParams& mix, const Market& market, const Rng& root,
                             const Learner& learner = ridge_learner());
AuctionOutcome truthful_mlca(const AuctionInstance& instance, const MixtureParams& mix,
                             const Market& market, const Rng& root,
                             const Learner& learner = ridge_learner());

/// epsilon = min(1, C0 / ln n), the schedule for asymptotic truthfulness.
double epsilon_for_asymptotic(int bidders, double c0 = 1.0);

/// The largest epsilon with 2 * epsilon = q * c / 2^m.
MixtureParams params_exact_truthful(double c, int items, double q);

/// epsilon = C0 * sqrt(c m ln n / (2^m n)) and q = 2 epsilon 2^m / c. Throws
/// ParameterError when q > 1.
MixtureParams params_joint_schedule(double c, int items, int bidders, double c0 = 1.0);

/// A profile on which every misreport by `deviator` loses a second-price
/// sale it would otherwise win with margin c.
///
/// The deviator values every non-empty bundle at 1 and every other bidder
/// values it at 1 - c. Bidder 0 precedes the deviator, so any lowered bid on
/// a bundle ties or loses to bidder 0 and forfeits c; raising a bid is
/// impossible at the top of the grid.
ValuationProfile make_punishable_profile(int bidders, int items, const Grid& grid, int deviator = 1);

/// Independent grid-valued valuations, uniform over the levels on each
/// non-empty bundle.
ValuationProfile random_grid_profile(int bidders, int items, const Grid& grid, Rng& rng);

}  // namespace dpca
