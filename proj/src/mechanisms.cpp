#include "dpca/mechanisms.hpp"

#include <algorithm>
#include <string>

#include "dpca/errors.hpp"

namespace dpca {

namespace {

void check_reported(std::span<const Allocation> omega, const OutcomeValues& reported) {
    if (omega.empty()) {
        throw ParameterError("VCG needs a nonempty outcome range");
    }
    const auto n = static_cast<std::size_t>(omega.front().bidders());
    if (reported.size() != n) {
        throw ParameterError("VCG needs reports from all " + std::to_string(n) + " bidders");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (reported[i].size() != omega.size()) {
            throw ParameterError("bidder " + std::to_string(i) + " is missing a report for some outcome");
        }
    }
}

// Argmax of sum_{j != excluded} reported[j][o]; excluded < 0 keeps everyone.
std::size_t argmax_welfare(const OutcomeValues& reported, std::size_t outcomes, int excluded,
                           double* best_total) {
    std::size_t best = 0;
    double best_value = 0.0;
    for (std::size_t o = 0; o < outcomes; ++o) {
        double total = 0.0;
        for (std::size_t i = 0; i < reported.size(); ++i) {
            if (static_cast<int>(i) != excluded) total += reported[i][o];
        }
        if (o == 0 || total > best_value + kTieTolerance) {
            best = o;
            best_value = total;
        }
    }
    if (best_total != nullptr) *best_total = best_value;
    return best;
}

double welfare_without(const OutcomeValues& reported, std::size_t outcome, std::size_t excluded) {
    double total = 0.0;
    for (std::size_t i = 0; i < reported.size(); ++i) {
        if (i != excluded) total += reported[i][outcome];
    }
    return total;
}

}  // namespace

SecondPriceOutcome second_price(const Bundle& bundle, std::span<const double> bids) {
    if (bids.empty()) {
        throw ParameterError("second-price auction needs at least one bid");
    }
    for (double b : bids) {
        if (!(b >= 0.0 && b <= 1.0)) {
            throw ParameterError("bid " + std::to_string(b) + " outside [0, 1]");
        }
    }
    int winner = 0;
    for (std::size_t i = 1; i < bids.size(); ++i) {
        if (bids[i] > bids[winner]) winner = static_cast<int>(i);
    }
    double payment = 0.0;
    for (std::size_t i = 0; i < bids.size(); ++i) {
        if (static_cast<int>(i) != winner) payment = std::max(payment, bids[i]);
    }
    return {bundle, winner, payment};
}

std::size_t vcg_allocate(std::span<const Allocation> omega, const OutcomeValues& reported) {
    check_reported(omega, reported);
    return argmax_welfare(reported, omega.size(), -1, nullptr);
}

std::vector<double> vcg_payments(std::span<const Allocation> omega, const OutcomeValues& reported,
                                 std::size_t chosen) {
    check_reported(omega, reported);
    if (chosen >= omega.size() || chosen != argmax_welfare(reported, omega.size(), -1, nullptr)) {
        throw ParameterError("chosen outcome is not the VCG allocation of the range");
    }
    std::vector<double> payments(reported.size(), 0.0);
    for (std::size_t i = 0; i < reported.size(); ++i) {
        double best_without = 0.0;
        argmax_welfare(reported, omega.size(), static_cast<int>(i), &best_without);
        // The tie tolerance can leave a difference of order 1e-12 below zero.
        payments[i] = std::max(0.0, best_without - welfare_without(reported, chosen, i));
    }
    return payments;
}

VcgOutcome vcg(std::span<const Allocation> omega, const OutcomeValues& reported) {
    const auto chosen = vcg_allocate(omega, reported);
    return {chosen, vcg_payments(omega, reported, chosen)};
}

double utility(const Valuation& truth, const Bundle& assigned, double payment) {
    return truth(assigned) - payment;
}

}  // namespace dpca
