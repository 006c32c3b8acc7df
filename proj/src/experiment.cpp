#include "dpca/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "dpca/errors.hpp"
#include "dpca/verify.hpp"
#include "dpca/welfare.hpp"

namespace dpca {

using nlohmann::json;

namespace {

constexpr const char* kModeNames[] = {"refined",         "truthful",     "verify-dp",
                                      "verify-truthful", "welfare-tail", "welfare-sweep"};

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

template <typename Int>
Int parse_int(const std::string& text, int line, const std::string& key) {
    Int value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(line, key + ": expected an integer, got '" + text + "'");
    }
    return value;
}

double parse_double(const std::string& text, int line, const std::string& key) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty() || !std::isfinite(value)) {
        throw ConfigError(line, key + ": expected a number, got '" + text + "'");
    }
    return value;
}

bool parse_bool(const std::string& text, int line, const std::string& key) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError(line, key + ": expected true or false, got '" + text + "'");
}

std::vector<int> parse_range(const std::string& text, int line, const std::string& key) {
    std::vector<int> out;
    for (const auto& part : split(text, ',')) {
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_int<int>(part, line, key));
            continue;
        }
        const int lo = parse_int<int>(trim(part.substr(0, dots)), line, key);
        const int hi = parse_int<int>(trim(part.substr(dots + 2)), line, key);
        if (hi < lo) throw ConfigError(line, key + ": empty range " + part);
        for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
    if (out.empty()) throw ConfigError(line, key + ": empty list");
    return out;
}

std::string format_number(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

std::string join_numbers(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ' ';
        out += format_number(values[i]);
    }
    return out;
}

// Strategy text: "truthful", "fixed v_1 ... v_{2^m-1}" or "random SEED".
BidderStrategy parse_strategy(const std::string& text, int items, const Grid& grid) {
    const auto parts = words(text);
    if (parts.empty()) throw ParameterError("empty strategy");
    if (parts[0] == "truthful" && parts.size() == 1) return BidderStrategy::truthful();
    if (parts[0] == "random" && parts.size() == 2) {
        return BidderStrategy::random_grid(std::stoull(parts[1]), grid);
    }
    if (parts[0] == "fixed") {
        std::vector<double> values;
        for (std::size_t i = 1; i < parts.size(); ++i) values.push_back(std::stod(parts[i]));
        return BidderStrategy::fixed(Valuation::from_nonempty(items, values, grid));
    }
    throw ParameterError("unknown strategy '" + text + "'");
}

struct LineIndex {
    std::map<std::string, int> lines;
    int of(const std::string& key) const {
        const auto it = lines.find(key);
        return it == lines.end() ? 0 : it->second;
    }
};

void validate(const ExperimentConfig& cfg, const LineIndex& at) {
    const auto require = [&](bool ok, const std::string& key, const std::string& message) {
        if (!ok) throw ConfigError(at.of(key), key + ": " + message);
    };
    require(cfg.n >= 1, "n", "must be >= 1");
    require(cfg.m >= 1 && cfg.m <= Bundle::kMaxItems, "m",
            "must lie in [1, " + std::to_string(Bundle::kMaxItems) + "]");
    require(cfg.T >= 1 && static_cast<std::uint32_t>(cfg.T) <= bundle_count(cfg.m), "T",
            "must lie in [1, 2^m = " + std::to_string(bundle_count(cfg.m)) + "]");
    require(cfg.k >= 1, "k", "must be >= 1");
    const auto allocations = allocation_count(cfg.n, cfg.m, cfg.caps.allocations);
    if (allocations <= cfg.caps.allocations) {
        require(static_cast<std::uint64_t>(cfg.k) <= allocations, "k",
                "must be <= n^m = " + std::to_string(allocations));
    }
    require(cfg.q >= 0.0 && cfg.q <= 1.0, "q", "must lie in [0, 1]");
    require(cfg.C0 > 0.0, "C0", "must be > 0");
    require(cfg.trials >= 1, "trials", "must be >= 1");
    try {
        Grid{cfg.c};
    } catch (const ParameterError& e) {
        throw ConfigError(at.of("c"), std::string("c: ") + e.what());
    }
    require(cfg.deviator >= -1 && cfg.deviator < cfg.n, "deviator", "must lie in [0, n) or be -1");

    const bool schedule = cfg.epsilon == "asymptotic" || cfg.epsilon == "exact" ||
                          cfg.epsilon == "joint";
    if (!schedule) {
        const double eps = parse_double(cfg.epsilon, at.of("epsilon"), "epsilon");
        require(eps > 0.0 && eps <= 1.0, "epsilon", "must lie in (0, 1]");
    }
    if (cfg.epsilon == "exact") require(cfg.q > 0.0, "epsilon", "exact schedule needs q > 0");

    if (cfg.mode == Mode::welfare_tail) {
        require(cfg.trials >= 1000, "trials", "welfare-tail needs trials >= 1000");
    }
    if (cfg.mode == Mode::verify_truthful && cfg.exact_truthfulness) {
        require(cfg.q > 0.0, "q", "exact truthfulness needs q > 0");
    }
    if (cfg.mode == Mode::welfare_sweep) {
        require(!cfg.n_range.empty(), "n_range", "welfare-sweep needs n_range");
    }
    for (int n : cfg.n_range) {
        require(n >= (cfg.epsilon == "asymptotic" || cfg.epsilon == "joint" ? 2 : 1), "n_range",
                "bidder counts must be >= 2 under an n-dependent epsilon schedule");
    }
    if (cfg.epsilon == "asymptotic" || cfg.epsilon == "joint") {
        require(cfg.n >= 2 || !cfg.n_range.empty(), "epsilon", "schedule needs n >= 2");
    }
    if (cfg.profile == ProfileKind::punishable) {
        require(cfg.n >= 2, "profile", "punishable profile needs n >= 2");
    }

    const Grid grid(cfg.c);
    for (const auto& [bidder, values] : cfg.values) {
        const std::string key = "value." + std::to_string(bidder);
        require(bidder >= 0 && bidder < cfg.n, key, "bidder index outside [0, n)");
        try {
            Valuation::from_nonempty(cfg.m, values, grid);
        } catch (const ParameterError& e) {
            throw ConfigError(at.of(key), key + ": " + e.what());
        }
    }
    if (cfg.profile == ProfileKind::explicit_values) {
        require(static_cast<int>(cfg.values.size()) == cfg.n, "profile",
                "explicit profile needs value.0 ... value." + std::to_string(cfg.n - 1));
    }
    for (const auto* table : {&cfg.strategies, &cfg.outcome_strategies}) {
        const std::string prefix = table == &cfg.strategies ? "strategy." : "outcome_strategy.";
        for (const auto& [bidder, text] : *table) {
            const std::string key = prefix + std::to_string(bidder);
            require(bidder >= 0 && bidder < cfg.n, key, "bidder index outside [0, n)");
            try {
                parse_strategy(text, cfg.m, grid);
            } catch (const std::exception& e) {
                throw ConfigError(at.of(key), key + ": " + e.what());
            }
        }
    }
}

ValuationProfile build_profile(const ExperimentConfig& cfg, int bidders, const Rng& root) {
    const Grid grid(cfg.c);
    switch (cfg.profile) {
        case ProfileKind::punishable:
            return make_punishable_profile(bidders, cfg.m, grid, cfg.deviator < 0 ? 1 : cfg.deviator);
        case ProfileKind::explicit_values: {
            std::vector<Valuation> out;
            for (int i = 0; i < bidders; ++i) {
                out.push_back(Valuation::from_nonempty(cfg.m, cfg.values.at(i), grid));
            }
            return ValuationProfile(std::move(out));
        }
        case ProfileKind::random:
            break;
    }
    Rng rng = cfg.profile_seed ? Rng(*cfg.profile_seed) : root.substream("profile");
    return random_grid_profile(bidders, cfg.m, grid, rng);
}

Market build_market(const ExperimentConfig& cfg, const Rng& root) {
    const Grid grid(cfg.c);
    auto profile = build_profile(cfg, cfg.n, root);
    std::vector<BidderStrategy> query(cfg.n), outcome(cfg.n);
    for (const auto& [i, text] : cfg.strategies) query[i] = parse_strategy(text, cfg.m, grid);
    for (const auto& [i, text] : cfg.outcome_strategies) outcome[i] = parse_strategy(text, cfg.m, grid);
    return Market(std::move(profile), std::move(query), std::move(outcome));
}

json bundle_json(const Bundle& b) { return to_string(b); }

json allocation_json(const Allocation& a) {
    json out = json::array();
    for (const auto& b : a.bundles()) out.push_back(bundle_json(b));
    return out;
}

json profile_json(const ValuationProfile& profile) {
    json out = json::array();
    for (const auto& v : profile.valuations()) {
        out.push_back(std::vector<double>(v.table().begin(), v.table().end()));
    }
    return out;
}

json outcome_json(std::size_t trial, const Rng& trial_rng, const AuctionOutcome& outcome,
                  const CandidateSpace& space, const Market& market) {
    json rec;
    rec["trial"] = trial;
    rec["seed"] = trial_rng.seed();
    rec["branch"] = to_string(outcome.branch);
    json queries = json::array();
    for (const auto& x : outcome.queries) queries.push_back(bundle_json(x));
    rec["queries"] = queries;
    json reports = json::array();
    for (const auto& r : outcome.reports) {
        json row = json::array();
        for (const auto& item : r) row.push_back(item.value);
        reports.push_back(row);
    }
    rec["reports"] = reports;
    rec["payments"] = outcome.payments;
    rec["utilities"] = outcome.utilities;
    if (outcome.punish) {
        rec["punished_bundle"] = bundle_json(outcome.punish->sale.bundle);
        rec["winner"] = outcome.punish->sale.winner;
    }
    if (outcome.allocation) {
        const auto& a = *outcome.allocation;
        rec["selected_candidate"] = a.selected.members;
        rec["allocation"] = allocation_json(a.vcg.allocation);
        rec["optimal_sw"] = a.optimal_sw;
        rec["selected_sw"] = a.selected_sw;
        rec["gap"] = a.optimal_sw - a.selected_sw;
        rec["true_welfare"] = true_welfare(market.truth, a.vcg.allocation);
    }
    (void)space;
    return rec;
}

json truthfulness_json(const TruthfulnessReport& r) {
    json out;
    out["bidder"] = r.bidder;
    out["truthful_utility"] = r.truthful_utility;
    out["gain"] = r.gain;
    out["bound"] = r.bound;
    out["deviations"] = r.deviations;
    out["pass"] = r.pass;
    if (r.best_deviation) {
        json dev = json::array();
        for (const auto& item : *r.best_deviation) dev.push_back(item.value);
        out["best_deviation"] = dev;
    }
    return out;
}

json base_record(const ExperimentConfig& cfg) {
    json rec;
    rec["schema_version"] = kResultSchemaVersion;
    json echo = json::object();
    std::istringstream in(cfg.to_text());
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        echo[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    rec["config"] = echo;
    rec["mode"] = to_string(cfg.mode);
    rec["trials"] = json::array();
    rec["verdicts"] = json::array();
    return rec;
}

void add_verdict(json& rec, const std::string& name, bool pass, json measured) {
    measured["name"] = name;
    measured["pass"] = pass;
    rec["verdicts"].push_back(std::move(measured));
}

int finish(json& rec, bool has_verdicts, double seconds) {
    bool all = true;
    for (const auto& v : rec["verdicts"]) all = all && v["pass"].get<bool>();
    rec["status"] = !has_verdicts ? "done" : (all ? "pass" : "fail");
    rec["wall_clock_seconds"] = seconds;
    return all ? 0 : 1;
}

std::vector<int> bidders_to_check(const ExperimentConfig& cfg) {
    if (cfg.deviator >= 0) return {cfg.deviator};
    if (cfg.profile == ProfileKind::punishable && cfg.exact_truthfulness) return {1};
    std::vector<int> all(cfg.n);
    for (int i = 0; i < cfg.n; ++i) all[i] = i;
    return all;
}

}  // namespace

const char* to_string(Mode mode) {
    return kModeNames[static_cast<int>(mode)];
}

ConfigError::ConfigError(int line, const std::string& message)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

std::string ExperimentConfig::to_text() const {
    std::ostringstream out;
    out << "mode = " << to_string(mode) << '\n';
    out << "n = " << n << '\n' << "m = " << m << '\n' << "T = " << T << '\n' << "k = " << k << '\n';
    out << "epsilon = " << epsilon << '\n';
    out << "q = " << format_number(q) << '\n' << "c = " << format_number(c) << '\n';
    out << "C0 = " << format_number(C0) << '\n';
    out << "seed = " << seed << '\n' << "trials = " << trials << '\n';
    out << "max_allocations = " << caps.allocations << '\n';
    out << "max_candidates = " << caps.candidates << '\n';
    out << "profile = "
        << (profile == ProfileKind::random ? "random"
                                           : profile == ProfileKind::punishable ? "punishable" : "explicit")
        << '\n';
    if (profile_seed) out << "profile_seed = " << *profile_seed << '\n';
    out << "deviator = " << deviator << '\n';
    out << "truthfulness = " << (exact_truthfulness ? "exact" : "approximate") << '\n';
    if (!n_range.empty()) {
        out << "n_range = ";
        for (std::size_t i = 0; i < n_range.size(); ++i) out << (i ? "," : "") << n_range[i];
        out << '\n';
    }
    out << "t_values = ";
    for (std::size_t i = 0; i < t_values.size(); ++i) out << (i ? "," : "") << format_number(t_values[i]);
    out << '\n';
    for (const auto& [i, v] : values) out << "value." << i << " = " << join_numbers(v) << '\n';
    for (const auto& [i, s] : strategies) out << "strategy." << i << " = " << s << '\n';
    for (const auto& [i, s] : outcome_strategies) out << "outcome_strategy." << i << " = " << s << '\n';
    return out.str();
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    LineIndex at;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    const auto bidder_suffix = [&](const std::string& key, const std::string& prefix) {
        return parse_int<int>(key.substr(prefix.size()), line, key);
    };
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(line, "expected 'key = value', got '" + body + "'");
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(line, "expected 'key = value', got '" + body + "'");
        }
        if (!at.lines.emplace(key, line).second) {
            throw ConfigError(line, "duplicate key '" + key + "'");
        }

        if (key == "mode") {
            const auto* it = std::find(std::begin(kModeNames), std::end(kModeNames), value);
            if (it == std::end(kModeNames)) throw ConfigError(line, "mode: unknown mode '" + value + "'");
            cfg.mode = static_cast<Mode>(it - std::begin(kModeNames));
        } else if (key == "n") {
            cfg.n = parse_int<int>(value, line, key);
        } else if (key == "m") {
            cfg.m = parse_int<int>(value, line, key);
        } else if (key == "T") {
            cfg.T = parse_int<int>(value, line, key);
        } else if (key == "k") {
            cfg.k = parse_int<int>(value, line, key);
        } else if (key == "epsilon") {
            cfg.epsilon = value;
        } else if (key == "q") {
            cfg.q = parse_double(value, line, key);
        } else if (key == "c") {
            cfg.c = parse_double(value, line, key);
        } else if (key == "C0") {
            cfg.C0 = parse_double(value, line, key);
        } else if (key == "seed") {
            cfg.seed = parse_int<std::uint64_t>(value, line, key);
        } else if (key == "trials") {
            cfg.trials = parse_int<int>(value, line, key);
        } else if (key == "max_allocations") {
            cfg.caps.allocations = parse_int<std::uint64_t>(value, line, key);
        } else if (key == "max_candidates") {
            cfg.caps.candidates = parse_int<std::uint64_t>(value, line, key);
        } else if (key == "profile") {
            if (value == "random") cfg.profile = ProfileKind::random;
            else if (value == "punishable") cfg.profile = ProfileKind::punishable;
            else if (value == "explicit") cfg.profile = ProfileKind::explicit_values;
            else throw ConfigError(line, "profile: expected random, punishable or explicit");
        } else if (key == "profile_seed") {
            cfg.profile_seed = parse_int<std::uint64_t>(value, line, key);
        } else if (key == "deviator") {
            cfg.deviator = parse_int<int>(value, line, key);
        } else if (key == "truthfulness") {
            if (value == "exact") cfg.exact_truthfulness = true;
            else if (value == "approximate") cfg.exact_truthfulness = false;
            else cfg.exact_truthfulness = parse_bool(value, line, key);
        } else if (key == "n_range") {
            cfg.n_range = parse_range(value, line, key);
        } else if (key == "t_values") {
            cfg.t_values.clear();
            for (const auto& part : split(value, ',')) cfg.t_values.push_back(parse_double(part, line, key));
        } else if (key.rfind("value.", 0) == 0) {
            std::vector<double> values;
            for (const auto& w : words(value)) values.push_back(parse_double(w, line, key));
            cfg.values[bidder_suffix(key, "value.")] = values;
        } else if (key.rfind("strategy.", 0) == 0) {
            cfg.strategies[bidder_suffix(key, "strategy.")] = value;
        } else if (key.rfind("outcome_strategy.", 0) == 0) {
            cfg.outcome_strategies[bidder_suffix(key, "outcome_strategy.")] = value;
        } else {
            throw ConfigError(line, "unknown key '" + key + "'");
        }
    }
    validate(cfg, at);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

MixtureParams resolve_parameters(const ExperimentConfig& cfg, int bidders) {
    if (cfg.epsilon == "asymptotic") return {cfg.q, cfg.c, epsilon_for_asymptotic(bidders, cfg.C0)};
    if (cfg.epsilon == "exact") return params_exact_truthful(cfg.c, cfg.m, cfg.q);
    if (cfg.epsilon == "joint") return params_joint_schedule(cfg.c, cfg.m, bidders, cfg.C0);
    return {cfg.q, cfg.c, std::stod(cfg.epsilon)};
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    const auto started = std::chrono::steady_clock::now();
    const Rng root(cfg.seed);
    json rec = base_record(cfg);
    bool has_verdicts = true;

    if (cfg.mode == Mode::welfare_sweep) {
        auto sweep = run_sweep(cfg);
        sweep.record["config"] = rec["config"];
        return {std::move(sweep.record), sweep.status};
    }

    const Market market = build_market(cfg, root);
    const CandidateSpace space(cfg.n, cfg.m, cfg.k, cfg.caps);
    const MixtureParams mix = resolve_parameters(cfg, cfg.n);
    const AuctionInstance instance{cfg.n, cfg.m, cfg.T, cfg.k, mix.epsilon, cfg.caps};
    rec["profile"] = profile_json(market.truth);
    rec["epsilon"] = mix.epsilon;
    rec["q"] = mix.q;

    switch (cfg.mode) {
        case Mode::refined:
        case Mode::truthful: {
            has_verdicts = false;
            std::size_t punished = 0;
            double welfare = 0.0;
            for (int r = 0; r < cfg.trials; ++r) {
                const Rng trial = root.substream(static_cast<std::uint64_t>(r));
                const auto outcome = cfg.mode == Mode::refined
                                             ? refined_mlca(space, instance, market, trial)
                                             : truthful_mlca(space, instance, mix, market, trial);
                if (outcome.branch == Branch::punish) ++punished;
                if (outcome.allocation) welfare += true_welfare(market.truth, outcome.allocation->vcg.allocation);
                rec["trials"].push_back(outcome_json(r, trial, outcome, space, market));
            }
            rec["summary"] = {{"punish_fraction", static_cast<double>(punished) / cfg.trials},
                              {"mean_true_welfare", welfare / cfg.trials}};
            break;
        }
        case Mode::verify_dp: {
            const auto sweep = verify_dp_exhaustive(space, market.truth, cfg.T, Grid(cfg.c), mix.epsilon);
            add_verdict(rec, "differential-privacy", sweep.pass,
                        {{"max_log_ratio", sweep.max_log_ratio},
                         {"epsilon", sweep.epsilon},
                         {"pairs", sweep.pairs},
                         {"query_sets", sweep.query_sets}});
            break;
        }
        case Mode::verify_truthful: {
            Rng query_rng = root.substream("query");
            const auto queries = generate_queries(cfg.T, cfg.m, query_rng);
            Rng deviation_rng = root.substream("deviations");
            const auto deviations = grid_deviations(queries, Grid(cfg.c), deviation_rng);
            json q_json = json::array();
            for (const auto& x : queries) q_json.push_back(bundle_json(x));
            rec["queries"] = q_json;
            for (int bidder : bidders_to_check(cfg)) {
                const auto report = cfg.exact_truthfulness
                        ? verify_exact_truthful(space, market, queries, bidder, deviations, mix)
                        : verify_two_eps_truthful(space, market, queries, bidder, deviations,
                                                  mix.epsilon, mix.q);
                add_verdict(rec, cfg.exact_truthfulness ? "exact-truthfulness" : "two-eps-truthfulness",
                            report.pass, truthfulness_json(report));
            }
            break;
        }
        case Mode::welfare_tail: {
            const auto check = welfare_tail_check(space, instance, market, cfg.trials, cfg.t_values, root);
            for (const auto& s : check.samples) {
                rec["trials"].push_back({{"seed", s.seed},
                                         {"optimal_sw", s.optimal_sw},
                                         {"realized_sw", s.realized_sw},
                                         {"gap", s.gap}});
            }
            for (const auto& row : check.rows) {
                add_verdict(rec, "welfare-tail", row.pass,
                            {{"t", row.t},
                             {"threshold", row.threshold},
                             {"exceedances", row.exceedances},
                             {"frequency", row.frequency},
                             {"bound", row.bound},
                             {"sigma", row.sigma}});
            }
            break;
        }
        case Mode::welfare_sweep:
            break;
    }
    const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const int status = finish(rec, has_verdicts, seconds);
    return {std::move(rec), status};
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
    if (cfg.n_range.empty()) throw ConfigError(0, "n_range: sweep needs a list of bidder counts");
    const auto started = std::chrono::steady_clock::now();
    const Rng root(cfg.seed);
    const Grid grid(cfg.c);
    const TrendSettings settings{cfg.m, cfg.k, cfg.T, cfg.trials, cfg.caps};
    const auto schedule = [&](int n) { return resolve_parameters(cfg, n).epsilon; };
    const auto generator = [&](int n, Rng& rng) { return random_grid_profile(n, cfg.m, grid, rng); };
    const auto sweep = welfare_trend_sweep(settings, cfg.n_range, schedule, generator, root);

    std::ostringstream csv;
    csv << kSweepCsvHeader << '\n';
    json rec = base_record(cfg);
    rec["mode"] = to_string(Mode::welfare_sweep);
    json rows = json::array();
    for (const auto& row : sweep.rows) {
        for (std::size_t r = 0; r < row.samples.size(); ++r) {
            const auto& s = row.samples[r];
            csv << row.bidders << ',' << r << ',' << s.seed << ',' << format_number(s.optimal_sw) << ','
                << format_number(s.realized_sw) << ',' << format_number(s.gap) << ','
                << format_number(row.epsilon) << ',' << format_number(0.0) << '\n';
        }
        rows.push_back({{"n", row.bidders},
                        {"epsilon", row.epsilon},
                        {"mean_gap", row.mean_gap},
                        {"std_error", row.std_error}});
    }
    rec["rows"] = rows;
    add_verdict(rec, "welfare-trend", sweep.pass, {{"rows", sweep.rows.size()}});
    const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const int status = finish(rec, true, seconds);
    return {csv.str(), std::move(rec), status};
}

void validate_result(const json& record) {
    const auto fail = [](const std::string& what) { throw ConfigError(0, "result schema: " + what); };
    if (!record.is_object()) fail("document is not an object");
    for (const char* key : {"schema_version", "config", "mode", "trials", "verdicts", "status",
                            "wall_clock_seconds"}) {
        if (!record.contains(key)) fail(std::string("missing field '") + key + "'");
    }
    if (record["schema_version"] != kResultSchemaVersion) fail("unsupported schema_version");
    if (!record["config"].is_object()) fail("config is not an object");
    if (!record["trials"].is_array() || !record["verdicts"].is_array()) fail("trials/verdicts not arrays");
    if (!record["wall_clock_seconds"].is_number()) fail("wall_clock_seconds is not a number");
    const auto status = record["status"].get<std::string>();
    if (status != "done" && status != "pass" && status != "fail") fail("unknown status '" + status + "'");
    for (const auto& v : record["verdicts"]) {
        if (!v.contains("name") || !v.contains("pass") || !v["pass"].is_boolean()) fail("malformed verdict");
    }
    std::string text;
    for (const auto& [key, value] : record["config"].items()) {
        if (!value.is_string()) fail("config value for '" + key + "' is not a string");
        text += key + " = " + value.get<std::string>() + "\n";
    }
    const auto cfg = parse_config(text);
    if (record["mode"] != to_string(cfg.mode)) fail("mode does not match config echo");
}

json strip_wall_clock(json record) {
    record.erase("wall_clock_seconds");
    return record;
}

}  // namespace dpca
