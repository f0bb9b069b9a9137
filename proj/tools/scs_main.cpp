#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "scs/config.hpp"
#include "scs/harness.hpp"

// Exit codes: 0 success, 1 validator misbehaved, 2 config/usage error,
// 3 runtime failure (I/O, numerical).
int main(int argc, char** argv) {
    CLI::App app{"spatial channel sharing simulator (blind null-space learning)"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string beacon_name;
    uint64_t seed = 0;
    int cycle_n = 0;

    CLI::App* learn = app.add_subcommand(
        "learn", "run one blind learning session and dump the learned Gram");
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Monte Carlo rate sweep; writes raw and aggregate CSV");
    CLI::App* validate = app.add_subcommand(
        "validate", "statistical validators (DoF preservation, ZMSW effective channel)");

    for (CLI::App* sub : {learn, sweep, validate}) {
        sub->add_option("--config", config_path, "experiment config (key=value lines)")
            ->required();
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--out", out_path, "override output_path");
    }
    learn->add_option("--beacon", beacon_name,
                      "override beacon_mode (ideal|sample_average|projected_ideal|"
                      "projected_sample_average)");
    learn->add_option("--N", cycle_n, "override cycle_length_n");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        scs::ExperimentConfig cfg = scs::ExperimentConfig::parse_file(config_path);
        if (sub->count("--seed")) cfg.seed = seed;
        if (sub->count("--out")) cfg.output_path = out_path;
        if (sub == learn) {
            if (learn->count("--beacon")) cfg.beacon_mode = scs::parse_beacon_mode(beacon_name);
            if (learn->count("--N")) cfg.cycle_length_n = cycle_n;
            return scs::cli_learn(cfg, std::cout);
        }
        if (sub == sweep) return scs::cli_sweep(cfg, std::cout);
        return scs::cli_validate(cfg, std::cout);
    } catch (const scs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
