// Batch driver: modspace <subcommand> [--config file] [--out dir] [--threads n] [--seed s]
#include <iostream>

#include <CLI11.hpp>

#include "modspace/modspace.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Modulation-space decomposition, evolution and estimate checks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    unsigned threads = 1;
    std::uint64_t seed = 0;
    bool seed_given = false;

    for (const auto& name : modspace::subcommands()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON experiment config (defaults apply when omitted)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](const std::uint64_t& s) { seed = s, seed_given = true; }, "overrides the config seed");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : modspace::exit_config;
    }

    modspace::ExperimentConfig cfg;
    try {
        cfg = config_path.empty() ? modspace::parse_config(modspace::json{{"schema_version", modspace::kSchemaVersion}})
                                  : modspace::load_config(config_path);
    } catch (const modspace::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return modspace::exit_config;
    }
    if (seed_given) cfg.seed = seed;
    modspace::set_worker_threads(threads);

    const std::string sub = app.get_subcommands().front()->get_name();
    return modspace::run(sub, cfg, out_dir, std::cout, std::cerr);
}
