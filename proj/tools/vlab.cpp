#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "vlab/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Disc vortex laboratory: minimizes the anisotropic modulus-"
                 "penalized Dirichlet energy and checks the structure of the "
                 "minimizers"};

    std::string config_path, out_dir = ".", command;
    int jobs = 1;
    std::uint64_t seed = 0;
    bool seed_given = false;

    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_dir, "output directory for result.json and CSV dumps");
    app.add_option("--jobs", jobs, "parallel workers for independent entries")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "override every seed in the config")
        ->each([&](const std::string&) { seed_given = true; });
    app.add_option("--command", command,
                   "one of: solve, sweep, excess, exact, thinfilm, verify")
        ->required()
        ->check(CLI::IsMember({"solve", "sweep", "excess", "exact", "thinfilm", "verify"}));

    CLI11_PARSE(app, argc, argv);

    try {
        vlab::RunConfig cfg = vlab::parse_config_file(config_path);
        if (seed_given) cfg.override_seed(seed);
        return vlab::run_command(command, std::move(cfg), out_dir, jobs);
    } catch (const vlab::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const vlab::IoError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 3;
    }
}
