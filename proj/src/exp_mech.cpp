#include "dpca/exp_mech.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <string>

#include "dpca/errors.hpp"

namespace dpca {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    // result * (n - k + i) / i stays exact at every step.
    unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
        if (result > cap) return cap + 1;
    }
    return static_cast<std::uint64_t>(result);
}

std::vector<KAllocation> enumerate_k_allocations(std::size_t count, int k, std::uint64_t cap) {
    if (k < 1 || static_cast<std::size_t>(k) > count) {
        throw ParameterError("k=" + std::to_string(k) + " outside [1, " + std::to_string(count) + "]");
    }
    const auto total = binomial(count, static_cast<std::uint64_t>(k), cap);
    if (total > cap) {
        throw ResourceError("C(" + std::to_string(count) + ", " + std::to_string(k) +
                                ") k-allocations exceed the enumeration cap",
                            total, cap);
    }
    std::vector<KAllocation> out;
    out.reserve(total);
    std::vector<std::size_t> combo(k);
    std::iota(combo.begin(), combo.end(), std::size_t{0});
    while (true) {
        out.push_back({combo});
        // Advance to the next combination in lexicographic order.
        int pos = k - 1;
        while (pos >= 0 && combo[pos] == count - static_cast<std::size_t>(k - pos)) --pos;
        if (pos < 0) break;
        ++combo[pos];
        for (int j = pos + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
    return out;
}

std::vector<KAllocation> enumerate_k_allocations(std::span<const Allocation> allocations, int k,
                                                 std::uint64_t cap) {
    return enumerate_k_allocations(allocations.size(), k, cap);
}

double k_allocation_welfare(const KAllocation& kalloc, std::span<const double> allocation_welfare) {
    double total = 0.0;
    for (auto idx : kalloc.members) total += allocation_welfare[idx];
    return total / static_cast<double>(kalloc.members.size());
}

KAllocation top_k_allocation(std::span<const double> allocation_welfare, int k) {
    const std::size_t count = allocation_welfare.size();
    if (k < 1 || static_cast<std::size_t>(k) > count) {
        throw ParameterError("k=" + std::to_string(k) + " outside [1, " + std::to_string(count) + "]");
    }
    std::vector<double> sorted(allocation_welfare.begin(), allocation_welfare.end());
    std::partial_sort(sorted.begin(), sorted.begin() + k, sorted.end(), std::greater<>());
    const double optimum = std::accumulate(sorted.begin(), sorted.begin() + k, 0.0) / k;
    const double target = k * (optimum - kSubsetTieTolerance);

    // Greedy lexicographic search: take the smallest next index whose best
    // completion from the remaining suffix still reaches the target.
    KAllocation best;
    double taken = 0.0;
    std::size_t from = 0;
    std::vector<double> suffix_best(count + 1);
    for (int picked = 0; picked < k; ++picked) {
        const int need = k - picked - 1;
        // suffix_best[i]: sum of the `need` largest values at indices >= i.
        std::priority_queue<double, std::vector<double>, std::greater<>> heap;
        double sum = 0.0;
        suffix_best[count] = 0.0;
        for (std::size_t i = count; i-- > from;) {
            if (need > 0) {
                heap.push(allocation_welfare[i]);
                sum += allocation_welfare[i];
                if (static_cast<int>(heap.size()) > need) {
                    sum -= heap.top();
                    heap.pop();
                }
            }
            suffix_best[i] = static_cast<int>(heap.size()) == need ? sum : -1e300;
        }
        std::size_t choice = count;
        for (std::size_t i = from; i + need < count; ++i) {
            if (taken + allocation_welfare[i] + suffix_best[i + 1] >= target) {
                choice = i;
                break;
            }
        }
        if (choice == count) choice = from;  // unreachable: the exact optimum always qualifies
        best.members.push_back(choice);
        taken += allocation_welfare[choice];
        from = choice + 1;
    }
    return best;
}

std::vector<double> exp_mech_exponents(std::span<const double> scores, const ExpMechParams& params) {
    if (scores.empty()) {
        throw ParameterError("exponential mechanism needs at least one candidate");
    }
    if (!(params.epsilon > 0.0) || params.bidders < 1) {
        throw ParameterError("exponential mechanism needs epsilon > 0 and n >= 1");
    }
    const double scale = params.epsilon / (2.0 * params.sensitivity());
    std::vector<double> exponents(scores.size());
    std::transform(scores.begin(), scores.end(), exponents.begin(),
                   [scale](double s) { return scale * s; });
    return exponents;
}

std::vector<double> exp_mech_log_distribution(std::span<const double> scores,
                                              const ExpMechParams& params) {
    auto out = exp_mech_exponents(scores, params);
    const double shift = *std::max_element(out.begin(), out.end());
    double sum = 0.0;
    for (double e : out) sum += std::exp(e - shift);
    const double log_norm = shift + std::log(sum);
    for (double& e : out) e -= log_norm;
    return out;
}

std::vector<double> exp_mech_distribution(std::span<const double> scores,
                                          const ExpMechParams& params) {
    auto out = exp_mech_exponents(scores, params);
    const double shift = *std::max_element(out.begin(), out.end());
    double sum = 0.0;
    for (double& e : out) {
        e = std::exp(e - shift);
        sum += e;
    }
    for (double& p : out) p /= sum;
    return out;
}

std::size_t exp_mech_sample(std::span<const double> distribution, Rng& rng) {
    if (distribution.empty()) {
        throw ParameterError("cannot sample from an empty distribution");
    }
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < distribution.size(); ++i) {
        if (distribution[i] <= 0.0) continue;
        cumulative += distribution[i];
        last_positive = i;
        if (u < cumulative) return i;
    }
    // Rounding can leave the total a hair under one.
    return last_positive;
}

}  // namespace dpca
