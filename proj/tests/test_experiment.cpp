#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dpca/errors.hpp"
#include "dpca/experiment.hpp"
#include "dpca/verify.hpp"

using namespace dpca;

namespace {

int config_error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

std::string read(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "dpca_test_experiment";
    std::filesystem::create_directories(dir);
    return dir / name;
}

int run_cli(const std::string& args) {
    const char* cli = std::getenv("DPCA_CLI");
    REQUIRE(cli != nullptr);
    const int raw = std::system((std::string(cli) + " " + args + " 2>/dev/null").c_str());
    return WEXITSTATUS(raw);
}

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = parse_config("# comment\nmode = verify-truthful\nn = 4 # trailing\nm=1\nT = 2\n"
                                  "epsilon = 0.1\nc = 0.25\nstrategy.2 = fixed 0.5\n");
    CHECK(cfg.mode == Mode::verify_truthful);
    CHECK(cfg.n == 4);
    CHECK(cfg.m == 1);
    CHECK(cfg.strategies.at(2) == "fixed 0.5");
    CHECK(parse_config(cfg.to_text()).to_text() == cfg.to_text());

    CHECK(config_error_line("n = 3\nbogus = 1\n") == 2);
    CHECK(config_error_line("n = 3\nn = 4\n") == 2);
    CHECK(config_error_line("\n\nnot a pair\n") == 3);
    CHECK(config_error_line("m = 2\nT = 5\n") == 2);
    CHECK(config_error_line("epsilon = 1.5\n") == 1);
    CHECK(config_error_line("c = 0.3\n") == 1);
    CHECK(config_error_line("n = x\n") == 1);
    CHECK(config_error_line("mode = welfare-tail\ntrials = 10\n") == 2);
    CHECK(config_error_line("n = 2\nm = 1\nk = 3\n") == 3);
    CHECK(config_error_line("m = 1\nvalue.0 = 0.3\n") == 2);
    CHECK(config_error_line("m = 1\nstrategy.0 = sometimes\n") == 2);
    CHECK(config_error_line("profile = explicit\nm = 1\nn = 2\nvalue.0 = 0.5\n") == 1);
    try {
        parse_config("mode = refined\nT = 9\n");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("2^m") != std::string::npos);
    }
}

TEST_CASE("parameter resolution") {
    auto cfg = parse_config("epsilon = asymptotic\nn = 8\nC0 = 1\n");
    CHECK(resolve_parameters(cfg, 8).epsilon == doctest::Approx(1.0 / std::log(8.0)));
    cfg = parse_config("epsilon = exact\nq = 0.5\nc = 0.5\nm = 2\n");
    CHECK(resolve_parameters(cfg, 3).epsilon == doctest::Approx(0.03125));
}

TEST_CASE("refined run with one bidder") {
    const auto result = run_experiment(parse_config("mode = refined\nn = 1\nk = 1\n"));
    CHECK(result.status == 0);
    const auto& rec = result.record;
    CHECK(rec["status"] == "done");
    REQUIRE(rec["trials"].size() == 1);
    CHECK(rec["trials"][0]["payments"][0] == 0.0);
    CHECK_NOTHROW(validate_result(rec));
}

TEST_CASE("records are deterministic and round-trip") {
    const auto cfg = parse_config("mode = truthful\nq = 0.5\ntrials = 20\nseed = 9\nT = 3\n");
    const auto a = run_experiment(cfg).record;
    const auto b = run_experiment(cfg).record;
    CHECK(strip_wall_clock(a).dump() == strip_wall_clock(b).dump());
    CHECK(a["trials"].size() == 20);
    CHECK_NOTHROW(validate_result(nlohmann::json::parse(a.dump())));
    auto broken = a;
    broken.erase("schema_version");
    CHECK_THROWS_AS(validate_result(broken), ConfigError);
    auto bad_config = a;
    bad_config["config"]["epsilon"] = "7";
    CHECK_THROWS_AS(validate_result(bad_config), ConfigError);
}

TEST_CASE("verify-dp mode matches the verifier") {
    const auto cfg = parse_config("mode = verify-dp\nn = 3\nm = 2\nT = 2\nk = 2\nepsilon = 0.5\nc = 0.5\n");
    const auto result = run_experiment(cfg);
    CHECK(result.status == 0);
    const auto& verdict = result.record["verdicts"][0];
    CHECK(verdict["pass"] == true);

    const Rng root(cfg.seed);
    Rng profile_rng = root.substream("profile");
    const auto profile = random_grid_profile(3, 2, Grid(0.5), profile_rng);
    const auto direct = verify_dp_exhaustive(CandidateSpace(3, 2, 2), profile, 2, Grid(0.5), 0.5);
    CHECK(verdict["max_log_ratio"].get<double>() == direct.max_log_ratio);
}

TEST_CASE("verify-truthful modes") {
    const auto approx = run_experiment(
            parse_config("mode = verify-truthful\nn = 3\nm = 1\nT = 2\nk = 2\nepsilon = 0.1\nc = 0.25\n"));
    CHECK(approx.status == 0);
    CHECK(approx.record["verdicts"].size() == 3);
    const auto exact = run_experiment(parse_config(
            "mode = verify-truthful\nprofile = punishable\nn = 3\nm = 2\nT = 4\nk = 2\nc = 0.5\n"
            "q = 0.5\nepsilon = exact\ntruthfulness = exact\n"));
    CHECK(exact.status == 0);
    CHECK(exact.record["verdicts"][0]["pass"] == true);
}

TEST_CASE("sweep csv") {
    const auto one = run_sweep(parse_config("mode = welfare-sweep\nn_range = 2\ntrials = 1\nepsilon = asymptotic\n"));
    std::istringstream lines(one.csv);
    std::string header, row, extra;
    std::getline(lines, header);
    CHECK(header == "n,trial,seed,opt_sw,realized_sw,gap,epsilon,q");
    CHECK(std::getline(lines, row));
    CHECK_FALSE(std::getline(lines, extra));

    const auto many = run_sweep(parse_config("mode = welfare-sweep\nn_range = 2..4\ntrials = 20\nepsilon = 1\n"));
    std::istringstream body(many.csv);
    std::getline(body, header);
    int rows = 0;
    while (std::getline(body, row)) {
        ++rows;
        std::vector<std::string> cols;
        std::stringstream cells(row);
        for (std::string c; std::getline(cells, c, ',');) cols.push_back(c);
        REQUIRE(cols.size() == 8);
        CHECK(std::stod(cols[5]) >= 0.0);
    }
    CHECK(rows == 60);
}

TEST_CASE("cli exit codes and outputs") {
    const auto good = scratch("good.cfg");
    std::ofstream(good) << "mode = verify-dp\nepsilon = 0.5\n";
    const auto out1 = scratch("out1.json"), out2 = scratch("out2.json");
    CHECK(run_cli("run --config " + good.string() + " --out " + out1.string()) == 0);
    CHECK(run_cli("run --config " + good.string() + " --out " + out2.string()) == 0);
    const auto j1 = nlohmann::json::parse(read(out1)), j2 = nlohmann::json::parse(read(out2));
    CHECK(strip_wall_clock(j1).dump() == strip_wall_clock(j2).dump());
    CHECK_NOTHROW(validate_result(j1));

    CHECK(run_cli("run --config " + good.string() + " --seed 5 --out " + out1.string()) == 0);
    CHECK(nlohmann::json::parse(read(out1))["config"]["seed"] == "5");

    const auto bad = scratch("bad.cfg");
    std::ofstream(bad) << "n = 3\nwhat = 1\n";
    CHECK(run_cli("run --config " + bad.string()) == 2);
    CHECK(run_cli("run --config " + scratch("missing.cfg").string()) == 2);

    const auto huge = scratch("huge.cfg");
    std::ofstream(huge) << "n = 9\nm = 16\nT = 1\nk = 1\n";
    CHECK(run_cli("run --config " + huge.string()) == 3);

    const auto sweep = scratch("sweep.cfg");
    std::ofstream(sweep) << "n_range = 2\ntrials = 1\nepsilon = 1\n";
    const auto csv = scratch("sweep.csv");
    CHECK(run_cli("sweep --config " + sweep.string() + " --out " + csv.string()) == 0);
    CHECK(read(csv).rfind("n,trial,seed,opt_sw,realized_sw,gap,epsilon,q\n", 0) == 0);
}
