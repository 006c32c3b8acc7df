// Acceptance suite: one [PASS]/[FAIL] line per criterion, exit status 1 if any fails.
// Usage: acceptance PATH_TO_CLI

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "dpca/experiment.hpp"
#include "dpca/verify.hpp"

using namespace dpca;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(const std::string& id, const std::string& title, double budget_s,
            const std::function<Verdict()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > budget_s) {
        v.pass = false;
        v.detail += " (runtime over budget)";
    }
    if (!v.pass) ++failures;
    std::printf("[%s] %s %s: %s [%.2fs / %.0fs]\n", v.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(),
                v.detail.c_str(), secs, budget_s);
    std::fflush(stdout);
}

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

std::vector<std::vector<Bundle>> all_query_sets(int m, int T) {
    std::vector<std::vector<Bundle>> out;
    for (const auto& subset : enumerate_k_allocations(bundle_count(m), T)) {
        std::vector<Bundle> qs;
        for (auto mask : subset.members) qs.push_back(Bundle(m, static_cast<std::uint32_t>(mask)));
        out.push_back(qs);
    }
    return out;
}

// 1. Every query set, every grid report profile as the base, every single-bidder replacement.
Verdict exact_dp() {
    const int n = 3, m = 2, T = 2, k = 2;
    const Grid grid(0.5);
    const CandidateSpace space(n, m, k);
    std::size_t pairs = 0;
    bool ok = true;
    std::string detail;
    for (double eps : {0.1, 0.5, 1.0}) {
        double worst = 0.0;
        for (const auto& qs : all_query_sets(m, T)) {
            const auto sets = grid_report_sets(qs, grid);
            const std::size_t L = sets.size();
            for (std::size_t a = 0; a < L; ++a)
                for (std::size_t b = 0; b < L; ++b)
                    for (std::size_t c = 0; c < L; ++c) {
                        const std::vector<ReportSet> base{sets[a], sets[b], sets[c]};
                        for (int i = 0; i < n; ++i) {
                            const std::size_t own = i == 0 ? a : i == 1 ? b : c;
                            for (std::size_t alt = 0; alt < L; ++alt) {
                                if (alt == own) continue;
                                auto other = base;
                                other[i] = sets[alt];
                                const auto check = verify_dp(space, NeighborPair(base, other), eps);
                                worst = std::max(worst, check.max_log_ratio);
                                ok = ok && check.pass;
                                ++pairs;
                            }
                        }
                    }
        }
        detail += "eps=" + fmt(eps) + " max|log ratio|=" + fmt(worst) + "; ";
    }
    return {ok, detail + std::to_string(pairs) + " neighbour pairs"};
}

// 2. All 125 grid profiles, every bidder, every grid deviation.
Verdict two_eps_truthful() {
    const int n = 3, m = 1, T = 2, k = 2;
    const double eps = 0.1;
    const Grid grid(0.25);
    const CandidateSpace space(n, m, k);
    const auto queries = all_query_sets(m, T).front();
    Rng rng(0);
    const auto deviations = grid_deviations(queries, grid, rng);
    double worst = -1.0;
    bool ok = true;
    std::size_t checks = 0;
    for (int a = 0; a <= grid.levels(); ++a)
        for (int b = 0; b <= grid.levels(); ++b)
            for (int c = 0; c <= grid.levels(); ++c) {
                std::vector<Valuation> vals;
                for (int level : {a, b, c}) vals.emplace_back(m, std::vector<double>{0.0, grid.value(level)}, grid);
                const Market market{ValuationProfile(vals)};
                for (int i = 0; i < n; ++i) {
                    const auto rep = verify_two_eps_truthful(space, market, queries, i, deviations, eps);
                    worst = std::max(worst, rep.gain);
                    ok = ok && rep.gain <= 2 * eps + 1e-9;
                    ++checks;
                }
            }
    return {ok, "max gain=" + fmt(worst) + " <= 0.2 over " + std::to_string(checks) + " (profile, bidder) checks x " +
                        std::to_string(deviations.size()) + " deviations"};
}

// 3. Punishable instance: the deviator values every bundle 1, rivals 1 - c.
Verdict exact_truthful() {
    const int n = 3, m = 2, T = 4, k = 2;
    const Grid grid(0.5);
    const CandidateSpace space(n, m, k);
    const Market market(make_punishable_profile(n, m, grid, 1));
    const auto queries = all_query_sets(m, T).front();
    Rng rng(0);
    const auto deviations = grid_deviations(queries, grid, rng);
    const auto mix = params_exact_truthful(0.5, m, 0.5);
    const auto mixed = verify_exact_truthful(space, market, queries, 1, deviations, mix);
    const auto pure = verify_two_eps_truthful(space, market, queries, 1, deviations, mix.epsilon, 0.0);
    const bool ok = mixed.gain <= 1e-9 && pure.gain > 1e-9;
    return {ok, "q=" + fmt(mix.q) + " eps=" + fmt(mix.epsilon) + " mixture max gain=" + fmt(mixed.gain) +
                        "; q=0 max gain=" + fmt(pure.gain) + " over " + std::to_string(deviations.size()) +
                        " deviations"};
}

// 4. Exponential-mechanism tail.
Verdict welfare_tail() {
    const AuctionInstance inst{4, 2, 2, 2, 1.0};
    const CandidateSpace space(4, 2, 2);
    Rng profile_rng(2024);
    const Market market(random_grid_profile(4, 2, Grid(0.5), profile_rng));
    const std::vector<double> ts{1.0, 2.0, 3.0};
    const auto check = welfare_tail_check(space, inst, market, 10000, ts, Rng(1));
    std::string detail = "|range|=" + std::to_string(space.candidates().size()) + "; ";
    for (const auto& row : check.rows) {
        detail += "t=" + fmt(row.t) + " freq=" + fmt(row.frequency) + " <= " + fmt(row.bound + 3 * row.sigma) + "; ";
    }
    return {check.pass, detail};
}

// 5. Asymptotic trend with eps = 1 / ln n.
Verdict welfare_trend() {
    const TrendSettings settings{2, 2, 2, 1000};
    const std::vector<int> ns{3, 4, 5, 6, 7, 8};
    const auto schedule = [](int n) { return epsilon_for_asymptotic(n, 1.0); };
    const auto generator = [](int n, Rng& r) { return random_grid_profile(n, 2, Grid(0.5), r); };
    const auto sweep = welfare_trend_sweep(settings, ns, schedule, generator, Rng(1));
    std::string detail;
    for (const auto& row : sweep.rows) {
        detail += "n=" + std::to_string(row.bidders) + ":" + fmt(row.mean_gap) + "+-" + fmt(row.std_error) + " ";
    }
    return {sweep.pass, detail};
}

// 6. Second price, restricted VCG, top-k against brute force.
Verdict classical_oracles() {
    const Grid grid(0.1);
    const int L = grid.levels();
    std::size_t sp_cases = 0;
    bool sp_ok = true;
    const Bundle x(1, 1);
    for (int n = 1; n <= 3; ++n) {
        std::size_t total = 1;
        for (int i = 0; i < n; ++i) total *= L + 1;
        for (std::size_t code = 0; code < total; ++code) {
            std::size_t rest = code;
            std::vector<double> bids(n);
            for (int i = 0; i < n; ++i) {
                bids[i] = grid.value(static_cast<int>(rest % (L + 1)));
                rest /= L + 1;
            }
            for (int i = 0; i < n; ++i) {
                const double truth = bids[i];
                const auto honest = second_price(x, bids);
                const double u = honest.winner == i ? truth - honest.payment : 0.0;
                for (int d = 0; d <= L; ++d) {
                    auto lie = bids;
                    lie[i] = grid.value(d);
                    const auto dev = second_price(x, lie);
                    const double ud = dev.winner == i ? truth - dev.payment : 0.0;
                    sp_ok = sp_ok && ud <= u + 1e-12;
                    ++sp_cases;
                }
            }
        }
    }

    bool vcg_ok = true;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        Rng rng = Rng(7).substream(s);
        const int n = 1 + static_cast<int>(rng.below(3));
        const int m = 1 + static_cast<int>(rng.below(2));
        const auto allocations = allocation_count(n, m);
        const int k = 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(3, allocations)));
        const CandidateSpace space(n, m, k);
        const Market market(random_grid_profile(n, m, Grid(0.1), rng));
        const auto c = static_cast<std::size_t>(rng.below(space.candidates().size()));
        const auto out = restricted_vcg(space, c, market);
        for (int i = 0; i < n; ++i) vcg_ok = vcg_ok && out.payments[i] >= 0.0 && out.utilities[i] >= -1e-12;
    }

    bool topk_ok = true;
    const CandidateSpace space(3, 2, 2);
    for (std::uint64_t s = 0; s < 100; ++s) {
        Rng rng = Rng(11).substream(s);
        const auto profile = random_grid_profile(3, 2, Grid(0.1), rng);
        std::vector<ReportSet> reports;
        Rng qr = rng.substream("query");
        const auto queries = generate_queries(2, 2, qr);
        for (const auto& v : profile.valuations()) {
            reports.push_back(elicit_reports(BidderStrategy::truthful(), v, queries));
        }
        const auto sw = space.allocation_welfare(estimate_profile(reports, ridge_learner()));
        const auto top = top_k_allocation(sw, 2);
        const auto [best, value] = brute_force_opt_k(sw, 2);
        topk_ok = topk_ok && top == best && k_allocation_welfare(top, sw) == value;
    }
    return {sp_ok && vcg_ok && topk_ok,
            std::string("second-price ") + (sp_ok ? "ok" : "VIOLATED") + " over " + std::to_string(sp_cases) +
                    " deviations; VCG IR/p>=0 " + (vcg_ok ? "ok" : "VIOLATED") + " on 1000 instances; top-k " +
                    (topk_ok ? "==" : "!=") + " brute force on 100 instances"};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// 7. Same config and seed through the CLI twice.
Verdict determinism(const std::string& cli) {
    const auto dir = std::filesystem::temp_directory_path() / "dpca_acceptance";
    std::filesystem::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> configs{
            {"run", "mode = truthful\nn = 3\nm = 2\nT = 3\nk = 2\nq = 0.3\nepsilon = 0.5\ntrials = 200\nseed = 77\n"},
            {"run", "mode = verify-truthful\nn = 3\nm = 1\nT = 2\nk = 2\nc = 0.25\nepsilon = 0.1\nseed = 5\n"},
            {"run", "mode = welfare-tail\nn = 3\nm = 2\nk = 2\nepsilon = 1\ntrials = 1000\nseed = 3\n"},
            {"sweep", "n_range = 3..5\nepsilon = asymptotic\ntrials = 100\nseed = 12\n"},
    };
    std::size_t same = 0;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto cfg = dir / ("c" + std::to_string(i) + ".cfg");
        std::ofstream(cfg) << configs[i].second;
        std::string outputs[2];
        int codes[2] = {0, 0};
        for (int r = 0; r < 2; ++r) {
            const auto out = dir / ("c" + std::to_string(i) + "_" + std::to_string(r) + ".out");
            const std::string cmd = cli + " " + configs[i].first + " --config " + cfg.string() + " --out " + out.string();
            // A verifier FAIL (exit 1) is still a reproducible result.
            codes[r] = WEXITSTATUS(std::system(cmd.c_str()));
            if (codes[r] > 1) return {false, cmd + " exited " + std::to_string(codes[r])};
            outputs[r] = slurp(out);
            if (configs[i].first == "run") {
                const auto rec = nlohmann::json::parse(outputs[r]);
                validate_result(rec);
                outputs[r] = strip_wall_clock(rec).dump();
            }
        }
        same += codes[0] == codes[1] && outputs[0] == outputs[1] && !outputs[0].empty();
    }
    return {same == configs.size(),
            std::to_string(same) + "/" + std::to_string(configs.size()) + " configs byte-identical modulo wall clock"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance PATH_TO_CLI\n";
        return 2;
    }
    report("C1", "exact differential privacy", 60, exact_dp);
    report("C2", "2-epsilon truthfulness", 60, two_eps_truthful);
    report("C3", "exact truthfulness of the mixture", 120, exact_truthful);
    report("C4", "exponential-mechanism welfare tail", 120, welfare_tail);
    report("C5", "asymptotic welfare trend", 600, welfare_trend);
    report("C6", "classical mechanism oracles", 120, classical_oracles);
    report("C7", "CLI determinism", 120, [&] { return determinism(argv[1]); });
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
