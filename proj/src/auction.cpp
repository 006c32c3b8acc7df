#include "dpca/auction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpca/errors.hpp"

namespace dpca {

CandidateSpace::CandidateSpace(int bidders, int items, int k, EnumerationCaps caps)
        : bidders_(bidders),
          items_(items),
          k_(k),
          allocations_(enumerate_allocations(bidders, items, caps.allocations)),
          candidates_(enumerate_k_allocations(allocations_, k, caps.candidates)) {}

std::vector<double> CandidateSpace::allocation_welfare(const EstimateTable& estimates) const {
    if (static_cast<int>(estimates.size()) != bidders_) {
        throw ParameterError("estimate table has " + std::to_string(estimates.size()) +
                             " bidders, expected " + std::to_string(bidders_));
    }
    std::vector<double> out(allocations_.size());
    for (std::size_t a = 0; a < allocations_.size(); ++a) {
        double total = 0.0;
        for (int i = 0; i < bidders_; ++i) {
            total += estimates[i][allocations_[a].bundle(i).mask()];
        }
        out[a] = total / bidders_;
    }
    return out;
}

std::vector<double> CandidateSpace::candidate_welfare(std::span<const double> allocation_welfare) const {
    std::vector<double> out(candidates_.size());
    for (std::size_t c = 0; c < candidates_.size(); ++c) {
        out[c] = k_allocation_welfare(candidates_[c], allocation_welfare);
    }
    return out;
}

std::vector<Allocation> CandidateSpace::omega(std::size_t candidate) const {
    std::vector<Allocation> out;
    out.reserve(k_);
    for (auto idx : candidates_.at(candidate).members) out.push_back(allocations_[idx]);
    return out;
}

Market::Market(ValuationProfile profile)
        : truth(std::move(profile)),
          query_strategies(truth.bidders()),
          outcome_strategies(truth.bidders()) {}

Market::Market(ValuationProfile profile, std::vector<BidderStrategy> query,
               std::vector<BidderStrategy> outcome)
        : truth(std::move(profile)),
          query_strategies(std::move(query)),
          outcome_strategies(std::move(outcome)) {
    if (static_cast<int>(query_strategies.size()) != truth.bidders() ||
        static_cast<int>(outcome_strategies.size()) != truth.bidders()) {
        throw ParameterError("market needs one query and one outcome strategy per bidder");
    }
}

bool MixtureParams::exact_truthful_regime(int items) const {
    const double bound = q * c / std::ldexp(1.0, items);
    return 2.0 * epsilon <= bound * (1.0 + 1e-12);
}

const char* to_string(Branch branch) {
    return branch == Branch::punish ? "punish" : "dp-allocate";
}

std::vector<ReportSet> elicit_profile(const Market& market, std::span<const Bundle> queries) {
    std::vector<ReportSet> reports;
    reports.reserve(market.bidders());
    for (int i = 0; i < market.bidders(); ++i) {
        reports.push_back(elicit_reports(market.query_strategies[i], market.truth[i], queries));
    }
    return reports;
}

EstimateTable estimate_profile(std::span<const ReportSet> reports, const Learner& learner) {
    EstimateTable table;
    table.reserve(reports.size());
    for (const auto& r : reports) table.push_back(tabulate(*learner(r)));
    return table;
}

std::vector<double> selection_distribution(const CandidateSpace& space,
                                           const EstimateTable& estimates, double epsilon) {
    const auto sw = space.allocation_welfare(estimates);
    const auto scores = space.candidate_welfare(sw);
    return exp_mech_distribution(scores, {epsilon, space.bidders()});
}

RestrictedVcg restricted_vcg(const CandidateSpace& space, std::size_t candidate,
                             const Market& market) {
    const auto omega = space.omega(candidate);
    const int n = market.bidders();
    OutcomeValues reported(n, std::vector<double>(omega.size()));
    for (int i = 0; i < n; ++i) {
        for (std::size_t o = 0; o < omega.size(); ++o) {
            reported[i][o] = market.outcome_strategies[i].report(market.truth[i], omega[o].bundle(i));
        }
    }
    auto outcome = vcg(omega, reported);
    std::vector<double> utilities(n);
    for (int i = 0; i < n; ++i) {
        utilities[i] = utility(market.truth[i], omega[outcome.chosen].bundle(i), outcome.payments[i]);
    }
    return {outcome.chosen, omega[outcome.chosen], std::move(outcome.payments), std::move(utilities)};
}

PunishOutcome punish(std::span<const Bundle> queries, std::span<const ReportSet> reports,
                     std::size_t index) {
    const Bundle& x = queries[index];
    std::vector<double> bids;
    bids.reserve(reports.size());
    for (const auto& r : reports) {
        const auto v = r.value_of(x);
        if (!v) {
            throw ParameterError("bidder has no report for punished bundle " + to_string(x));
        }
        bids.push_back(*v);
    }
    return {index, second_price(x, bids)};
}

std::vector<double> punish_utilities(const PunishOutcome& outcome, const ValuationProfile& truth) {
    std::vector<double> utilities(truth.bidders(), 0.0);
    const int w = outcome.sale.winner;
    utilities[w] = utility(truth[w], outcome.sale.bundle, outcome.sale.payment);
    return utilities;
}

namespace {

void check_instance(const CandidateSpace& space, const AuctionInstance& instance,
                    const Market& market, double epsilon) {
    if (instance.bidders != space.bidders() || instance.items != space.items() ||
        instance.k != space.k() || market.bidders() != space.bidders() ||
        market.truth.items() != space.items()) {
        throw ParameterError("instance, market and candidate space disagree on n, m or k");
    }
    if (!(epsilon > 0.0) || epsilon > 1.0) {
        throw ParameterError("auction epsilon must lie in (0, 1], got " + std::to_string(epsilon));
    }
}

AuctionOutcome allocate_stage(const CandidateSpace& space, std::vector<Bundle> queries,
                              std::vector<ReportSet> reports, double epsilon, const Market& market,
                              const Rng& root, const Learner& learner) {
    const auto estimates = estimate_profile(reports, learner);
    const auto sw = space.allocation_welfare(estimates);
    const auto scores = space.candidate_welfare(sw);
    const auto distribution = exp_mech_distribution(scores, {epsilon, space.bidders()});
    Rng draw = root.substream("expmech");
    const auto chosen = exp_mech_sample(distribution, draw);

    auto vcg_stage = restricted_vcg(space, chosen, market);
    auto payments = vcg_stage.payments;
    auto utilities = vcg_stage.utilities;
    AllocationOutcome allocation{chosen, space.candidates()[chosen], scores[chosen],
                                 *std::max_element(scores.begin(), scores.end()),
                                 std::move(vcg_stage)};
    return {Branch::dp_allocate, std::move(queries), std::move(reports), std::nullopt,
            std::move(allocation), std::move(payments), std::move(utilities)};
}

}  // namespace

AuctionOutcome refined_mlca(const CandidateSpace& space, const AuctionInstance& instance,
                            const Market& market, const Rng& root, const Learner& learner) {
    check_instance(space, instance, market, instance.epsilon);
    Rng query_rng = root.substream("query");
    auto queries = generate_queries(instance.queries, instance.items, query_rng);
    auto reports = elicit_profile(market, queries);
    return allocate_stage(space, std::move(queries), std::move(reports), instance.epsilon, market,
                          root, learner);
}

AuctionOutcome refined_mlca(const AuctionInstance& instance, const Market& market, const Rng& root,
                            const Learner& learner) {
    const CandidateSpace space(instance.bidders, instance.items, instance.k, instance.caps);
    return refined_mlca(space, instance, market, root, learner);
}

AuctionOutcome truthful_mlca(const CandidateSpace& space, const AuctionInstance& instance,
                             const MixtureParams& mix, const Market& market, const Rng& root,
                             const Learner& learner) {
    if (!(mix.q >= 0.0 && mix.q <= 1.0)) {
        throw ParameterError("mixture probability q must lie in [0, 1]");
    }
    check_instance(space, instance, market, mix.epsilon);
    Rng query_rng = root.substream("query");
    auto queries = generate_queries(instance.queries, instance.items, query_rng);
    auto reports = elicit_profile(market, queries);

    Rng branch_rng = root.substream("branch");
    if (branch_rng.uniform() < mix.q) {
        Rng pick_rng = root.substream("punish-pick");
        const auto index = static_cast<std::size_t>(pick_rng.below(queries.size()));
        auto sale = punish(queries, reports, index);
        std::vector<double> payments(market.bidders(), 0.0);
        payments[sale.sale.winner] = sale.sale.payment;
        auto utilities = punish_utilities(sale, market.truth);
        return {Branch::punish, std::move(queries), std::move(reports), sale, std::nullopt,
                std::move(payments), std::move(utilities)};
    }
    return allocate_stage(space, std::move(queries), std::move(reports), mix.epsilon, market, root,
                          learner);
}

AuctionOutcome truthful_mlca(const AuctionInstance& instance, const MixtureParams& mix,
                             const Market& market, const Rng& root, const Learner& learner) {
    const CandidateSpace space(instance.bidders, instance.items, instance.k, instance.caps);
    return truthful_mlca(space, instance, mix, market, root, learner);
}

double epsilon_for_asymptotic(int bidders, double c0) {
    if (bidders < 2) {
        throw ParameterError("asymptotic epsilon schedule needs n >= 2");
    }
    if (!(c0 > 0.0)) {
        throw ParameterError("schedule constant C0 must be positive");
    }
    return std::min(1.0, c0 / std::log(static_cast<double>(bidders)));
}

MixtureParams params_exact_truthful(double c, int items, double q) {
    if (!(q > 0.0 && q <= 1.0) || !(c > 0.0 && c <= 1.0)) {
        throw ParameterError("exact-truthful parameters need q, c in (0, 1]");
    }
    return {q, c, q * c / std::ldexp(1.0, items + 1)};
}

MixtureParams params_joint_schedule(double c, int items, int bidders, double c0) {
    if (bidders < 2 || !(c > 0.0 && c <= 1.0) || !(c0 > 0.0) || items < 1) {
        throw ParameterError("schedule needs n >= 2, m >= 1, c in (0, 1] and C0 > 0");
    }
    const double two_m = std::ldexp(1.0, items);
    const double epsilon =
            c0 * std::sqrt(c * items * std::log(static_cast<double>(bidders)) / (two_m * bidders));
    const double q = 2.0 * epsilon * two_m / c;
    if (q > 1.0) {
        throw ParameterError("schedule gives q = " + std::to_string(q) +
                             " > 1; increase the number of bidders");
    }
    return {q, c, epsilon};
}

ValuationProfile make_punishable_profile(int bidders, int items, const Grid& grid, int deviator) {
    if (bidders < 2 || deviator < 1 || deviator >= bidders) {
        throw ParameterError("punishable profile needs n >= 2 and 1 <= deviator < n");
    }
    const double top = 1.0;
    const double rival = grid.value(grid.levels() - 1);
    std::vector<Valuation> out;
    out.reserve(bidders);
    for (int i = 0; i < bidders; ++i) {
        std::vector<double> table(bundle_count(items), i == deviator ? top : rival);
        table[0] = 0.0;
        out.emplace_back(items, std::move(table), grid);
    }
    return ValuationProfile(std::move(out));
}

ValuationProfile random_grid_profile(int bidders, int items, const Grid& grid, Rng& rng) {
    std::vector<Valuation> out;
    out.reserve(bidders);
    for (int i = 0; i < bidders; ++i) {
        std::vector<double> table(bundle_count(items), 0.0);
        for (std::size_t mask = 1; mask < table.size(); ++mask) {
            table[mask] = grid.value(static_cast<int>(rng.below(grid.levels() + 1)));
        }
        out.emplace_back(items, std::move(table), grid);
    }
    return ValuationProfile(std::move(out));
}

}  // namespace dpca
