#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dpca/errors.hpp"
#include "dpca/experiment.hpp"

namespace {

enum Exit : int { kDone = 0, kFail = 1, kConfig = 2, kResource = 3 };

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
};

void add_common(CLI::App& cmd, Options& opts) {
    cmd.add_option("--config", opts.config, "experiment config (key = value lines)")->required();
    cmd.add_option("--out", opts.out, "output path (stdout when omitted)");
    cmd.add_option("--seed", opts.seed, "root seed, overrides the config");
    cmd.add_option("--trials", opts.trials, "trial count, overrides the config");
}

dpca::ExperimentConfig load(const Options& opts) {
    auto cfg = dpca::load_config(opts.config);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.trials) cfg.trials = *opts.trials;
    // Overrides go through the same bound checks as file values.
    return dpca::parse_config(cfg.to_text());
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Differentially private combinatorial auction experiments"};
    app.require_subcommand(1);
    Options run_opts, sweep_opts;
    auto* run = app.add_subcommand("run", "execute the configured mode, write a JSON record");
    add_common(*run, run_opts);
    auto* sweep = app.add_subcommand("sweep", "welfare trend sweep over n_range, write CSV");
    add_common(*sweep, sweep_opts);
    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto result = dpca::run_experiment(load(run_opts));
            emit(run_opts.out, result.record.dump(2) + "\n");
            return result.status == 0 ? kDone : kFail;
        }
        auto cfg = load(sweep_opts);
        cfg.mode = dpca::Mode::welfare_sweep;
        const auto result = dpca::run_sweep(cfg);
        emit(sweep_opts.out, result.csv);
        return result.status == 0 ? kDone : kFail;
    } catch (const dpca::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const dpca::ResourceError& e) {
        std::cerr << "resource cap: " << e.what() << '\n';
        return kResource;
    } catch (const dpca::ParameterError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFail;
    }
}
