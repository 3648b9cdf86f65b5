// Command-line front end for the four-component two-level atom simulator.
//
//   dlatom run <config>        single evolution -> <prefix>.csv / <prefix>.json
//   dlatom sweep <config>      one run per sweep value + <prefix>_sweep.csv
//   dlatom algebra-check       operator identity table
//   dlatom compare <config>    cross-model deviations -> <prefix>_compare.json

#include "dlatom/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Four-component two-level atom simulator"};
    app.require_subcommand(1);

    dlatom::CommandOptions opts;
    std::string output_dir = ".";
    unsigned jobs = 0;
    bool quiet = false;
    app.add_option("--output-dir", output_dir, "Directory for CSV/JSON outputs");
    app.add_option("--jobs", jobs, "Concurrent sweep runs (0 = available parallelism)");
    app.add_flag("--quiet", quiet, "Suppress progress output");

    std::string config_path;
    auto* run = app.add_subcommand("run", "Evolve one configuration");
    run->add_option("config", config_path, "Config file (JSON)")->required();
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
    sweep->add_option("config", config_path, "Sweep config file (JSON)")->required();
    auto* compare = app.add_subcommand("compare", "Cross-check the model variants");
    compare->add_option("config", config_path, "Config file (JSON)")->required();
    auto* algebra = app.add_subcommand("algebra-check", "Verify the operator identities");

    for (auto* sub : {run, sweep, compare, algebra}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : dlatom::kExitConfig;
    }

    opts.output_dir = output_dir;
    opts.jobs = jobs;
    opts.quiet = quiet;
    std::ostringstream sink;
    if (quiet) opts.out = &sink;

    if (algebra->parsed()) return dlatom::cmd_algebra_check(opts);
    if (run->parsed()) return dlatom::dispatch("run", config_path, opts);
    if (sweep->parsed()) return dlatom::dispatch("sweep", config_path, opts);
    return dlatom::dispatch("compare", config_path, opts);
}
