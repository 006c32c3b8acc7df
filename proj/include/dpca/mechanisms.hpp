#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dpca/allocation.hpp"
#include "dpca/bundle.hpp"
#include "dpca/valuation.hpp"

namespace dpca {

/// Totals closer than this are treated as tied; ties go to the lowest index.
inline constexpr double kTieTolerance = 1e-12;

struct SecondPriceOutcome {
    Bundle bundle;
    int winner = 0;
    double payment = 0.0;
};

/// Sealed-bid second-price sale of `bundle`: the highest bid wins (lowest index
/// on ties) and pays the highest bid among the others, 0 with a single bidder.
SecondPriceOutcome second_price(const Bundle& bundle, std::span<const double> bids);

/// Reported value of each bidder for each outcome: values[i][o] is bidder i's
/// value for outcome o of the restricted range.
using OutcomeValues = std::vector<std::vector<double>>;

struct VcgOutcome {
    std::size_t chosen = 0;
    std::vector<double> payments;
};

/// Index of the welfare-maximizing outcome of `omega`.
std::size_t vcg_allocate(std::span<const Allocation> omega, const OutcomeValues& reported);

/// Clarke payments over `omega` given the chosen outcome. Throws
/// ParameterError if `chosen` is not what vcg_allocate selects.
std::vector<double> vcg_payments(std::span<const Allocation> omega, const OutcomeValues& reported,
                                 std::size_t chosen);

VcgOutcome vcg(std::span<const Allocation> omega, const OutcomeValues& reported);

/// Quasi-linear utility v(bundle) - payment.
double utility(const Valuation& truth, const Bundle& assigned, double payment);

}  // namespace dpca
