// slowlight - command-line driver for the slow-light and matter-wave experiments

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "slowlight/cli/app.hpp"
#include "slowlight/errors.hpp"

using namespace slowlight;

int main(int argc, char** argv)
{
    CLI::App app{"Slow light, light storage and matter-wave soliton simulations"};
    app.require_subcommand(0, 1);

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    bool force = false;
    bool print_config = false;
    bool list_keys = false;

    app.add_flag("--list-keys", list_keys, "List every config key with its meaning and exit");

    const std::vector<std::string> experiments{"groupvel",  "propagate",   "store",     "imbalance",
                                               "mediums",   "gpe-soliton", "gpe-split", "feasibility"};
    for (const auto& name : experiments) {
        auto* sub = app.add_subcommand(name, "Run the " + name + " experiment");
        sub->add_option("--config", config_path, "YAML config file")->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory (overrides output.dir)");
        sub->add_option("--set", overrides, "Override one key: key=value (repeatable)");
        sub->add_flag("--force", force, "Run even if the feasibility check fails");
        sub->add_flag("--print-config", print_config, "Print the resolved config and exit");
    }

    CLI11_PARSE(app, argc, argv);

    if (list_keys) {
        for (const auto& [key, doc] : cli::config_keys()) fmt::print("{:<40} {}\n", key, doc);
        return cli::Success;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return cli::BadConfig;
    }
    const std::string experiment = app.get_subcommands().front()->get_name();

    cli::RunConfig config;
    try {
        if (!config_path.empty()) config = cli::load_config_file(config_path);
        cli::apply_override(config, "experiment=" + experiment);
        for (const auto& o : overrides) cli::apply_override(config, o);
    } catch (const ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return cli::BadConfig;
    }
    if (print_config) {
        fmt::print("{}", cli::serialize_config(config));
        return cli::Success;
    }
    return cli::run(config, out_dir, force, std::cerr);
}
