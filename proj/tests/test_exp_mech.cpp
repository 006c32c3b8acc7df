#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dpca/errors.hpp"
#include "dpca/exp_mech.hpp"
#include "dpca/random.hpp"

using namespace dpca;

namespace {

// Independent oracle: recursive search over every k-subset, strict improvement only.
void search(std::span<const double> sw, int k, std::size_t start, std::vector<std::size_t>& pick,
            double& best, std::vector<std::size_t>& best_pick) {
    if (static_cast<int>(pick.size()) == k) {
        double total = 0.0;
        for (auto i : pick) total += sw[i];
        if (total / k > best + 1e-12) {
            best = total / k;
            best_pick = pick;
        }
        return;
    }
    for (std::size_t i = start; i < sw.size(); ++i) {
        pick.push_back(i);
        search(sw, k, i + 1, pick, best, best_pick);
        pick.pop_back();
    }
}

std::pair<std::vector<std::size_t>, double> oracle_top_k(std::span<const double> sw, int k) {
    std::vector<std::size_t> pick, best_pick;
    double best = -1.0;
    search(sw, k, 0, pick, best, best_pick);
    return {best_pick, best};
}

}  // namespace

TEST_CASE("k-subset enumeration") {
    CHECK(enumerate_k_allocations(4, 2).size() == 6);
    CHECK(enumerate_k_allocations(4, 4).size() == 1);
    const auto singles = enumerate_k_allocations(5, 1);
    REQUIRE(singles.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(singles[i].members == std::vector<std::size_t>{i});
    CHECK(enumerate_k_allocations(4, 2)[0].members == std::vector<std::size_t>{0, 1});
    CHECK(enumerate_k_allocations(4, 2)[5].members == std::vector<std::size_t>{2, 3});
    CHECK(binomial(16, 2) == 120u);
    CHECK(binomial(81, 3) == 85320u);
    CHECK_THROWS_AS(enumerate_k_allocations(4, 5), ParameterError);
    CHECK_THROWS_AS(enumerate_k_allocations(4, 0), ParameterError);
    CHECK_THROWS_AS(enumerate_k_allocations(1000, 3, 1000), ResourceError);
}

TEST_CASE("top-k allocation") {
    const std::vector<double> sw{0.2, 0.9, 0.4, 0.9};
    CHECK(top_k_allocation(sw, 1).members == std::vector<std::size_t>{1});
    CHECK(top_k_allocation(sw, 2).members == std::vector<std::size_t>{1, 3});
    const std::vector<double> flat(6, 0.5);
    CHECK(top_k_allocation(flat, 3).members == std::vector<std::size_t>{0, 1, 2});

    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        // Additive-style scores on 16 allocations, with deliberate ties.
        std::vector<double> scores(16);
        for (auto& s : scores) s = static_cast<double>(rng.below(6)) / 5.0;
        const int k = 1 + static_cast<int>(rng.below(3));
        const auto [who, value] = oracle_top_k(scores, k);
        const auto got = top_k_allocation(scores, k);
        CHECK(got.members == who);
        CHECK(k_allocation_welfare(got, scores) == doctest::Approx(value).epsilon(1e-12));
    }
}

TEST_CASE("exponential mechanism distribution") {
    const std::vector<double> equal{0.3, 0.3};
    const auto half = exp_mech_distribution(equal, {1.0, 2});
    CHECK(half[0] == doctest::Approx(0.5));
    CHECK(half[1] == doctest::Approx(0.5));

    // epsilon n / 2 = 1, so the exponents are (1, 0).
    const std::vector<double> sw{1.0, 0.0};
    const auto exps = exp_mech_exponents(sw, {2.0, 1});
    CHECK(exps[0] == doctest::Approx(1.0));
    CHECK(exps[1] == doctest::Approx(0.0));
    const auto p = exp_mech_distribution(sw, {2.0, 1});
    const double e = std::exp(1.0);
    CHECK(p[0] == doctest::Approx(e / (e + 1.0)).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(1.0 / (e + 1.0)).epsilon(1e-14));
    CHECK(p[0] == doctest::Approx(0.7311).epsilon(1e-4));

    const std::vector<double> spread{1.0, 0.0, 0.5, 0.25};
    for (double v : exp_mech_distribution(spread, {1e-12, 3})) CHECK(std::abs(v - 0.25) <= 1e-9);

    // Shift normalisation keeps huge exponents finite.
    const auto big = exp_mech_distribution(sw, {1.0, 5000});
    CHECK(big[0] == doctest::Approx(1.0));
    CHECK(std::isfinite(big[1]));
    const auto logs = exp_mech_log_distribution(sw, {2.0, 1});
    CHECK(std::exp(logs[0]) == doctest::Approx(p[0]));
    CHECK_THROWS_AS(exp_mech_distribution(sw, {0.0, 1}), ParameterError);
    CHECK_THROWS_AS(exp_mech_distribution({}, {1.0, 1}), ParameterError);
}

TEST_CASE("exponential mechanism sampling") {
    Rng rng(99);
    const std::vector<double> one{1.0};
    const std::vector<double> last{0.0, 1.0};
    for (int i = 0; i < 1000; ++i) {
        CHECK(exp_mech_sample(one, rng) == 0);
        CHECK(exp_mech_sample(last, rng) == 1);
    }
    const double e = std::exp(1.0);
    const std::vector<double> p{e / (e + 1.0), 1.0 / (e + 1.0)};
    constexpr int draws = 100000;
    int zeros = 0;
    for (int i = 0; i < draws; ++i) zeros += exp_mech_sample(p, rng) == 0;
    const double sigma = std::sqrt(draws * p[0] * p[1]);
    CHECK(std::abs(zeros - draws * p[0]) <= 3.0 * sigma);

    Rng a(4), b(4);
    const std::vector<double> q{0.1, 0.2, 0.3, 0.4};
    for (int i = 0; i < 100; ++i) CHECK(exp_mech_sample(q, a) == exp_mech_sample(q, b));
}
