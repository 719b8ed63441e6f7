#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spinflow/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"spinflow: nonlinear Dirac equations on flat 2D domains"};
    app.require_subcommand(1, 1);

    std::string config;
    std::string out_dir;
    std::uint64_t seed = 0;
    for (const char* name : {"solve", "reconstruct", "blowup", "verify"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "Run configuration (key = value text)")->required();
        sub->add_option("--out", out_dir, "Output directory (overrides output.dir)");
        sub->add_option("--seed", seed, "RNG seed (overrides rng.seed)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : spinflow::kExitInvalidConfig;
    }

    const auto* sub = app.get_subcommands().front();
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed_override;
    if (sub->count("--out") > 0) out = out_dir;
    if (sub->count("--seed") > 0) seed_override = seed;
    return spinflow::run_command(sub->get_name(), config, out, seed_override, std::cerr);
}
