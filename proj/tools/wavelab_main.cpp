#include "wavelab/commands.hpp"
#include "wavelab/version.hpp"

#include <CLI11.hpp>

#include <string>

int main(int argc, char** argv) {
    CLI::App app{"wavelab: pseudospectral solver and estimate laboratory for a "
                 "nonlocal moderate-amplitude shallow-water wave model"};
    app.set_version_flag("--version", std::string(wavelab::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    wavelab::cli::CliOptions opts;
    std::string out_dir;
    std::uint64_t seed = 0;

    const auto add = [&](const std::string& name, const std::string& desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides WAVELAB_OUT and config)");
        sub->add_option("--seed", seed, "override the configured seeds");
        sub->add_flag("--quiet", opts.quiet, "suppress progress output");
        return sub;
    };

    CLI::App* solve = add("solve", "integrate one initial-value problem");
    CLI::App* verify = add("verify-lemmas", "run the estimate-ladder verification suite");
    CLI::App* conv = add("convergence", "temporal-order and grid-refinement study");
    CLI::App* equiv = add("equivalence", "compare the split and direct right-hand sides");
    CLI::App* breaking = add("breaking-search", "sweep initial amplitudes for wave breaking");

    CLI11_PARSE(app, argc, argv);

    for (const auto& [sub, name] :
         {std::pair{solve, "solve"}, {verify, "verify-lemmas"}, {conv, "convergence"},
          {equiv, "equivalence"}, {breaking, "breaking-search"}}) {
        if (sub->parsed()) {
            if (sub->count("--out")) opts.out_dir = out_dir;
            if (sub->count("--seed")) opts.seed = seed;
            return wavelab::cli::run_command(name, config_path, opts);
        }
    }
    return wavelab::cli::kExitConfig;
}
