#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpca/auction.hpp"

namespace dpca {

inline constexpr int kResultSchemaVersion = 1;

enum class Mode { refined, truthful, verify_dp, verify_truthful, welfare_tail, welfare_sweep };

const char* to_string(Mode mode);

/// A malformed or out-of-bounds experiment configuration. `line()` is the
/// 1-based line of the offending key, or 0 when it is not tied to one line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

enum class ProfileKind { random, punishable, explicit_values };

/// A flat `key = value` experiment description.
///
/// `epsilon` is either a number or one of the schedules "asymptotic"
/// (C0 / ln n), "exact" (largest epsilon with 2 epsilon = q c / 2^m) and
/// "joint" (which also fixes q).
struct ExperimentConfig {
    Mode mode = Mode::refined;
    int n = 3;
    int m = 2;
    int T = 2;
    int k = 2;
    std::string epsilon = "0.5";
    double q = 0.0;
    double c = 0.5;
    double C0 = 1.0;
    std::uint64_t seed = 1;
    int trials = 1;
    EnumerationCaps caps;
    ProfileKind profile = ProfileKind::random;
    std::optional<std::uint64_t> profile_seed;
    int deviator = -1;
    bool exact_truthfulness = false;
    std::vector<int> n_range;
    std::vector<double> t_values{1.0, 2.0, 3.0};
    std::map<int, std::vector<double>> values;
    std::map<int, std::string> strategies;
    std::map<int, std::string> outcome_strategies;

    /// Key/value echo in parse order; parse_config(to_text()) reproduces the
    /// configuration.
    std::string to_text() const;
};

/// Parses and validates a configuration. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// The epsilon (and possibly q) a configuration resolves to for n bidders.
MixtureParams resolve_parameters(const ExperimentConfig& config, int bidders);

struct RunResult {
    nlohmann::json record;
    /// 0 done or all verdicts pass, 1 some verdict failed.
    int status = 0;
};

/// Executes the configured mode. Throws ConfigError, ParameterError or
/// ResourceError.
RunResult run_experiment(const ExperimentConfig& config);

struct SweepResult {
    std::string csv;
    nlohmann::json record;
    int status = 0;
};

inline constexpr const char* kSweepCsvHeader = "n,trial,seed,opt_sw,realized_sw,gap,epsilon,q";

/// The welfare trend sweep over `n_range`, one CSV row per n per trial.
SweepResult run_sweep(const ExperimentConfig& config);

/// Checks a result document against the schema, re-validating its config
/// echo. Throws ConfigError describing the first violation.
void validate_result(const nlohmann::json& record);

/// The record without its wall-clock field, for byte comparisons.
nlohmann::json strip_wall_clock(nlohmann::json record);

}  // namespace dpca
