// stablenn: limit laws of Stable neural networks and their Monte Carlo checks.

#include <stablenn/cli/config.hpp>
#include <stablenn/cli/run.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

int main(int argc, char** argv)
{
    using namespace stablenn::cli;

    CLI::App app{"Infinite-width limits of Stable neural networks: predict, simulate, verify."};
    app.set_help_all_flag("--help-all", "Show every configuration key");

    std::string command, config_path, preset, out_path, format;
    std::vector<std::string> sets;
    long long seed = -1;
    unsigned workers = stablenn::default_workers();

    app.add_option("command", command, "predict | simulate | verify | tailscan | surface | sample")
        ->check(CLI::IsMember({"predict", "simulate", "verify", "tailscan", "surface", "sample"}));
    app.add_option("--config", config_path, "key = value file, or a JSON artifact to re-run");
    app.add_option("--preset", preset, "tanh | id | cube | z32 | relu | deep_relu | deep_cube");
    app.add_option("--seed", seed, "RNG seed (ensemble.seed)");
    app.add_option("--workers", workers, "worker threads (default $STABLENN_WORKERS or 1); never changes results")
        ->check(CLI::Range(1u, 1024u));
    app.add_option("--out", out_path, "output file (output.path)");
    app.add_option("--format", format, "csv | json (output.format)")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--set", sets, "override: key=value (repeatable)");

    // one flag per configuration key, e.g. --network.alpha 1.7
    std::map<std::string, std::string> field_flags;
    auto* keys = app.add_option_group("keys", "Configuration keys");
    for (const auto& f : schema()) {
        if (f.key == "command") continue;
        keys->add_option("--" + f.key, field_flags[f.key], f.help + " [" + f.default_value + "]");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    RunConfig cfg;
    try {
        if (!preset.empty()) cfg.apply_preset(preset);
        if (!config_path.empty()) cfg.merge_file(config_path);
        for (const auto& [k, v] : field_flags)
            if (keys->get_option("--" + k)->count() > 0) cfg.set(k, v);
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw stablenn::ConfigError("--set", "expected key=value, got '" + kv + "'");
            cfg.set(stablenn::cli::detail::trim(kv.substr(0, eq)), kv.substr(eq + 1));
        }
        if (!command.empty()) cfg.set("command", command);
        if (seed >= 0) cfg.set("ensemble.seed", std::to_string(seed));
        if (!out_path.empty()) cfg.set("output.path", out_path);
        if (!format.empty()) cfg.set("output.format", format);
    } catch (const stablenn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_usage;
    }
    if (command.empty() && config_path.empty()) {
        std::cerr << app.help();
        return exit_usage;
    }
    return run(cfg, workers, std::cout, std::cerr);
}
