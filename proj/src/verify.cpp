#include "dpca/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dpca/errors.hpp"

namespace dpca {

namespace {

constexpr double kVerdictTol = 1e-9;

// Expected utility of one bidder as its own query reports vary, everything
// else held fixed. Restricted-VCG utilities per candidate do not depend on the
// query reports, so they are computed once.
class DeviationEvaluator {
public:
    DeviationEvaluator(const CandidateSpace& space, const Market& market,
                       std::span<const Bundle> queries, std::vector<ReportSet> reports, int bidder,
                       const MixtureParams& mix, const Learner& learner)
            : space_(space),
              market_(market),
              queries_(queries.begin(), queries.end()),
              reports_(std::move(reports)),
              bidder_(bidder),
              mix_(mix),
              learner_(learner),
              estimates_(estimate_profile(reports_, learner)) {
        if (bidder < 0 || bidder >= market.bidders()) {
            throw ParameterError("bidder index " + std::to_string(bidder) + " out of range");
        }
        candidate_utilities_.reserve(space.candidates().size());
        for (std::size_t c = 0; c < space.candidates().size(); ++c) {
            candidate_utilities_.push_back(restricted_vcg(space, c, market).utilities[bidder]);
        }
    }

    const std::vector<double>& candidate_utilities() const { return candidate_utilities_; }

    double expected(const ReportSet& own) {
        const ReportSet saved = reports_[bidder_];
        reports_[bidder_] = own;
        auto saved_row = std::move(estimates_[bidder_]);
        estimates_[bidder_] = tabulate(*learner_(own));
        const double value = expected_current();
        reports_[bidder_] = saved;
        estimates_[bidder_] = std::move(saved_row);
        return value;
    }

    double expected_current() const {
        double total = 0.0;
        if (mix_.q < 1.0) {
            const auto dist = selection_distribution(space_, estimates_, mix_.epsilon);
            double dp = 0.0;
            for (std::size_t c = 0; c < dist.size(); ++c) dp += dist[c] * candidate_utilities_[c];
            total += (1.0 - mix_.q) * dp;
        }
        if (mix_.q > 0.0) {
            double punished = 0.0;
            for (std::size_t t = 0; t < queries_.size(); ++t) {
                punished += punish_utilities(punish(queries_, reports_, t), market_.truth)[bidder_];
            }
            total += mix_.q * punished / static_cast<double>(queries_.size());
        }
        return total;
    }

private:
    const CandidateSpace& space_;
    const Market& market_;
    std::vector<Bundle> queries_;
    std::vector<ReportSet> reports_;
    int bidder_;
    MixtureParams mix_;
    const Learner& learner_;
    EstimateTable estimates_;
    std::vector<double> candidate_utilities_;
};

TruthfulnessReport scan_deviations(DeviationEvaluator& evaluator, int bidder,
                                   std::span<const ReportSet> deviations, double truthful) {
    TruthfulnessReport report;
    report.bidder = bidder;
    report.truthful_utility = truthful;
    report.gain = 0.0;
    for (const auto& d : deviations) {
        const double gain = evaluator.expected(d) - truthful;
        if (!report.best_deviation || gain > report.gain) {
            report.gain = gain;
            report.best_deviation = d;
        }
        ++report.deviations;
    }
    return report;
}

std::vector<ReportSet> truthful_reports(const Market& market, std::span<const Bundle> queries) {
    std::vector<ReportSet> out;
    out.reserve(market.bidders());
    for (int i = 0; i < market.bidders(); ++i) {
        out.push_back(elicit_reports(BidderStrategy::truthful(), market.truth[i], queries));
    }
    return out;
}

// Advances `digits` as a base-`radix` counter; returns false on wrap-around.
bool next_digits(std::vector<int>& digits, int radix) {
    for (auto& d : digits) {
        if (++d < radix) return true;
        d = 0;
    }
    return false;
}

}  // namespace

std::size_t report_distance(std::span<const ReportSet> first, std::span<const ReportSet> second) {
    if (first.size() != second.size()) {
        throw ParameterError("report profiles have different bidder counts");
    }
    std::size_t differences = 0;
    for (std::size_t i = 0; i < first.size(); ++i) {
        if (!(first[i] == second[i])) ++differences;
    }
    return differences;
}

NeighborPair::NeighborPair(std::vector<ReportSet> a, std::vector<ReportSet> b)
        : first(std::move(a)), second(std::move(b)) {
    const auto d = report_distance(first, second);
    if (d > 1) {
        throw ParameterError("report profiles differ in " + std::to_string(d) +
                             " bidders; neighbours differ in at most one");
    }
}

DpCheck verify_dp(const CandidateSpace& space, const NeighborPair& pair, double epsilon,
                  const Learner& learner) {
    const ExpMechParams params{epsilon, space.bidders()};
    const auto scores = [&](const std::vector<ReportSet>& reports) {
        const auto est = estimate_profile(reports, learner);
        return space.candidate_welfare(space.allocation_welfare(est));
    };
    const auto log_first = exp_mech_log_distribution(scores(pair.first), params);
    const auto log_second = exp_mech_log_distribution(scores(pair.second), params);
    double worst = 0.0;
    for (std::size_t c = 0; c < log_first.size(); ++c) {
        worst = std::max(worst, std::abs(log_first[c] - log_second[c]));
    }
    return {worst, epsilon, worst <= epsilon + kVerdictTol};
}

std::vector<ReportSet> grid_report_sets(std::span<const Bundle> bundles, const Grid& grid,
                                        std::uint64_t cap) {
    std::uint64_t count = 1;
    for (std::size_t t = 0; t < bundles.size(); ++t) {
        count *= static_cast<std::uint64_t>(grid.levels() + 1);
        if (count > cap) {
            throw ResourceError("grid report sets exceed the enumeration cap", count, cap);
        }
    }
    std::vector<ReportSet> out;
    out.reserve(count);
    std::vector<int> digits(bundles.size(), 0);
    std::vector<double> values(bundles.size());
    do {
        for (std::size_t t = 0; t < digits.size(); ++t) values[t] = grid.value(digits[t]);
        out.push_back(ReportSet::from_values(bundles, values, grid));
    } while (next_digits(digits, grid.levels() + 1));
    return out;
}

DpSweep verify_dp_exhaustive(const CandidateSpace& space, const ValuationProfile& profile,
                             int queries, const Grid& grid, double epsilon, const Learner& learner,
                             std::uint64_t cap) {
    const int m = space.items();
    const auto pool = bundle_count(m);
    if (queries < 1 || static_cast<std::uint32_t>(queries) > pool) {
        throw ParameterError("query count outside [1, 2^m]");
    }
    const auto query_sets = binomial(pool, static_cast<std::uint64_t>(queries), cap);
    std::uint64_t work = query_sets * static_cast<std::uint64_t>(profile.bidders());
    for (int t = 0; t < queries && work <= cap; ++t) {
        work *= static_cast<std::uint64_t>(grid.levels() + 1);
    }
    if (query_sets > cap || work > cap) {
        throw ResourceError("neighbour pairs exceed the enumeration cap", work, cap);
    }

    const Market market(profile);
    const ExpMechParams params{epsilon, space.bidders()};
    DpSweep sweep;
    sweep.epsilon = epsilon;
    for (const auto& subset : enumerate_k_allocations(pool, queries, cap)) {
        std::vector<Bundle> bundles;
        for (auto mask : subset.members) bundles.emplace_back(m, static_cast<std::uint32_t>(mask));
        auto base = truthful_reports(market, bundles);
        auto estimates = estimate_profile(base, learner);
        const auto base_log =
                exp_mech_log_distribution(space.candidate_welfare(space.allocation_welfare(estimates)), params);
        for (int i = 0; i < profile.bidders(); ++i) {
            const auto saved = estimates[i];
            for (const auto& alt : grid_report_sets(bundles, grid, cap)) {
                estimates[i] = tabulate(*learner(alt));
                const auto alt_log = exp_mech_log_distribution(
                        space.candidate_welfare(space.allocation_welfare(estimates)), params);
                for (std::size_t c = 0; c < alt_log.size(); ++c) {
                    sweep.max_log_ratio = std::max(sweep.max_log_ratio, std::abs(alt_log[c] - base_log[c]));
                }
                ++sweep.pairs;
            }
            estimates[i] = saved;
        }
        ++sweep.query_sets;
    }
    sweep.pass = sweep.max_log_ratio <= epsilon + kVerdictTol;
    return sweep;
}

std::vector<ReportSet> grid_deviations(std::span<const Bundle> queries, const Grid& grid, Rng& rng,
                                       std::size_t exhaustive_limit, std::size_t samples) {
    std::vector<std::size_t> free_slots;
    for (std::size_t t = 0; t < queries.size(); ++t) {
        if (!queries[t].is_empty()) free_slots.push_back(t);
    }
    const int radix = grid.levels() + 1;
    std::uint64_t count = 1;
    bool exhaustive = true;
    for (std::size_t s = 0; s < free_slots.size(); ++s) {
        count *= static_cast<std::uint64_t>(radix);
        if (count > exhaustive_limit) {
            exhaustive = false;
            break;
        }
    }

    std::vector<ReportSet> out;
    std::vector<double> values(queries.size(), 0.0);
    if (exhaustive) {
        std::vector<int> digits(free_slots.size(), 0);
        do {
            for (std::size_t s = 0; s < free_slots.size(); ++s) {
                values[free_slots[s]] = grid.value(digits[s]);
            }
            out.push_back(ReportSet::from_values(queries, values, grid));
        } while (next_digits(digits, radix));
        return out;
    }
    out.reserve(samples);
    for (std::size_t r = 0; r < samples; ++r) {
        for (auto slot : free_slots) values[slot] = grid.value(static_cast<int>(rng.below(radix)));
        out.push_back(ReportSet::from_values(queries, values, grid));
    }
    return out;
}

double exact_expected_utility(const CandidateSpace& space, const Market& market,
                              std::span<const Bundle> queries, std::span<const ReportSet> reports,
                              int bidder, const MixtureParams& mix, const Learner& learner) {
    DeviationEvaluator evaluator(space, market, queries, {reports.begin(), reports.end()}, bidder,
                                 mix, learner);
    return evaluator.expected_current();
}

TruthfulnessReport verify_two_eps_truthful(const CandidateSpace& space, const Market& market,
                                           std::span<const Bundle> queries, int bidder,
                                           std::span<const ReportSet> deviations, double epsilon,
                                           double q, const Learner& learner) {
    const MixtureParams mix{q, 1.0, epsilon};
    DeviationEvaluator evaluator(space, market, queries, truthful_reports(market, queries), bidder,
                                 mix, learner);
    for (double u : evaluator.candidate_utilities()) {
        if (u < -kVerdictTol || u > 1.0 + kVerdictTol) {
            throw ParameterError("bidder " + std::to_string(bidder) +
                                 " has a restricted-VCG utility outside [0,1]: " + std::to_string(u));
        }
    }
    auto report = scan_deviations(evaluator, bidder, deviations, evaluator.expected_current());
    report.bound = 2.0 * epsilon;
    report.pass = report.gain <= report.bound + kVerdictTol;
    return report;
}

double punishment_margin(const Market& market, std::span<const Bundle> queries,
                         std::span<const ReportSet> reports, int bidder, const ReportSet& deviation) {
    std::vector<ReportSet> deviated(reports.begin(), reports.end());
    deviated[bidder] = deviation;
    double margin = 0.0;
    for (std::size_t t = 0; t < queries.size(); ++t) {
        const double truthful = punish_utilities(punish(queries, reports, t), market.truth)[bidder];
        const double lied = punish_utilities(punish(queries, deviated, t), market.truth)[bidder];
        margin = std::max(margin, truthful - lied);
    }
    return margin;
}

TruthfulnessReport verify_exact_truthful(const CandidateSpace& space, const Market& market,
                                         std::span<const Bundle> queries, int bidder,
                                         std::span<const ReportSet> deviations,
                                         const MixtureParams& mix, const Learner& learner) {
    if (!(mix.q > 0.0 && mix.q <= 1.0) || !mix.exact_truthful_regime(space.items())) {
        throw ParameterError("exact truthfulness needs 0 < q <= 1 and 2 epsilon <= q c / 2^m");
    }
    const Grid grid(mix.c);
    for (const auto& v : market.truth.valuations()) {
        for (double x : v.table()) {
            if (!grid.contains(x)) throw ParameterError("true valuations must lie on the c-grid");
        }
    }
    const auto truthful = truthful_reports(market, queries);
    for (const auto& d : deviations) {
        for (const auto& r : d) {
            if (!grid.contains(r.value)) throw ParameterError("deviations must lie on the c-grid");
        }
        if (d == truthful[bidder]) continue;
        if (punishment_margin(market, queries, truthful, bidder, d) < mix.c - kVerdictTol) {
            throw ParameterError("a deviation of bidder " + std::to_string(bidder) +
                                 " is not punished by c on any queried bundle");
        }
    }
    DeviationEvaluator evaluator(space, market, queries, truthful, bidder, mix, learner);
    auto report = scan_deviations(evaluator, bidder, deviations, evaluator.expected_current());
    report.bound = 0.0;
    report.pass = report.gain <= kVerdictTol;
    return report;
}

WelfareGapSample welfare_gap(const CandidateSpace& space, const AuctionInstance& instance,
                             const Market& market, const Rng& root, const Learner& learner) {
    const auto outcome = refined_mlca(space, instance, market, root, learner);
    const auto& a = *outcome.allocation;
    return {root.seed(), a.optimal_sw, a.selected_sw, a.optimal_sw - a.selected_sw};
}

TailCheck welfare_tail_check(const CandidateSpace& space, const AuctionInstance& instance,
                             const Market& market, std::size_t trials,
                             std::span<const double> t_values, const Rng& root,
                             const Learner& learner) {
    if (trials < 1000) {
        throw ParameterError("welfare tail check needs at least 1000 trials");
    }
    TailCheck check;
    check.trials = trials;
    check.log_range = std::log(static_cast<double>(space.candidates().size()));
    check.samples.reserve(trials);
    for (std::size_t r = 0; r < trials; ++r) {
        check.samples.push_back(welfare_gap(space, instance, market, root.substream(r), learner));
    }
    const double scale = 2.0 / (instance.epsilon * space.bidders());
    check.pass = true;
    for (double t : t_values) {
        TailRow row;
        row.t = t;
        row.threshold = scale * (check.log_range + t);
        for (const auto& s : check.samples) {
            if (s.gap >= row.threshold) ++row.exceedances;
        }
        row.frequency = static_cast<double>(row.exceedances) / trials;
        row.bound = std::exp(-t);
        row.sigma = std::sqrt(row.bound * (1.0 - row.bound) / trials);
        row.pass = row.frequency <= row.bound + 3.0 * row.sigma;
        check.pass = check.pass && row.pass;
        check.rows.push_back(row);
    }
    return check;
}

std::pair<KAllocation, double> brute_force_opt_k(std::span<const double> allocation_welfare, int k,
                                                 std::uint64_t cap) {
    const auto subsets = enumerate_k_allocations(allocation_welfare.size(), k, cap);
    std::vector<double> sw(subsets.size());
    for (std::size_t s = 0; s < subsets.size(); ++s) {
        sw[s] = k_allocation_welfare(subsets[s], allocation_welfare);
    }
    const double top = *std::max_element(sw.begin(), sw.end());
    for (std::size_t s = 0; s < subsets.size(); ++s) {
        if (sw[s] >= top - kSubsetTieTolerance) return {subsets[s], sw[s]};
    }
    return {subsets.front(), sw.front()};
}

TrendSweep welfare_trend_sweep(const TrendSettings& settings, std::span<const int> bidder_counts,
                               const EpsilonSchedule& schedule, const ProfileGenerator& generator,
                               const Rng& root, const Learner& learner) {
    if (settings.trials < 1) {
        throw ParameterError("trend sweep needs at least one trial per n");
    }
    TrendSweep sweep;
    for (int n : bidder_counts) {
        const CandidateSpace space(n, settings.items, settings.k, settings.caps);
        TrendRow row;
        row.bidders = n;
        row.epsilon = schedule(n);
        const AuctionInstance instance{n, settings.items, settings.queries, settings.k, row.epsilon,
                                       settings.caps};
        const Rng stream = root.substream(static_cast<std::uint64_t>(n));
        for (int r = 0; r < settings.trials; ++r) {
            const Rng trial = stream.substream(static_cast<std::uint64_t>(r));
            Rng profile_rng = trial.substream("profile");
            const Market market(generator(n, profile_rng));
            row.samples.push_back(welfare_gap(space, instance, market, trial, learner));
        }
        double sum = 0.0;
        for (const auto& s : row.samples) sum += s.gap;
        row.mean_gap = sum / settings.trials;
        double sq = 0.0;
        for (const auto& s : row.samples) sq += (s.gap - row.mean_gap) * (s.gap - row.mean_gap);
        row.std_error = settings.trials > 1 ? std::sqrt(sq / (settings.trials - 1) / settings.trials) : 0.0;
        sweep.rows.push_back(std::move(row));
    }
    sweep.pass = true;
    for (std::size_t i = 1; i < sweep.rows.size(); ++i) {
        const auto& prev = sweep.rows[i - 1];
        const auto& cur = sweep.rows[i];
        const double slack = 2.0 * std::hypot(prev.std_error, cur.std_error);
        if (cur.mean_gap > prev.mean_gap + slack) sweep.pass = false;
    }
    if (sweep.rows.size() > 1 && !(sweep.rows.back().mean_gap < sweep.rows.front().mean_gap)) {
        sweep.pass = false;
    }
    return sweep;
}

}  // namespace dpca
