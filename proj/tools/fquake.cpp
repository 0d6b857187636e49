// fquake: run, sweep and analyse financial-quake simulations.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "fquake/app.hpp"
#include "fquake/config.hpp"
#include "fquake/error.hpp"

namespace {

struct Common {
    std::string config;
    std::string series;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 1;
    std::optional<std::size_t> runs;
};

void add_common(CLI::App& cmd, Common& c) {
    cmd.add_option("--config", c.config, "flat key = value model configuration")
        ->envname("FQUAKE_CONFIG");
    cmd.add_option("--series", c.series, "date,close CSV of daily index values")
        ->envname("FQUAKE_SERIES");
    cmd.add_option("--out", c.out, "output directory")->envname("FQUAKE_OUT")->required();
    cmd.add_option("--seed", c.seed, "use this seed for every random stream")
        ->envname("FQUAKE_SEED");
    cmd.add_option("--jobs", c.jobs, "worker threads for ensemble runs")
        ->envname("FQUAKE_JOBS")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--runs", c.runs, "independent runs (seed offsets 0..runs-1)")
        ->envname("FQUAKE_RUNS")
        ->check(CLI::PositiveNumber);
}

fquake::RunRequest to_request(const Common& c) {
    fquake::RunRequest request;
    if (!c.config.empty()) request.config = fquake::load_config(c.config);
    if (c.seed) request.config.set_all_seeds(*c.seed);
    if (c.series.empty()) throw fquake::InvalidConfig("--series is required");
    request.series = c.series;
    request.out = c.out;
    request.jobs = c.jobs;
    request.runs = c.runs.value_or(1);
    return request;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Herding avalanches of traders on a small-world network"};
    app.require_subcommand(1);

    Common run_opts;
    std::string manifest;
    auto* run = app.add_subcommand("run", "simulate one configuration");
    add_common(*run, run_opts);
    run->add_option("--manifest", manifest, "replay the run recorded in a manifest.json");

    Common sweep_opts;
    std::string sweep_spec;
    auto* sweep = app.add_subcommand("sweep", "simulate a grid of random-trader fractions and placements");
    add_common(*sweep, sweep_opts);
    sweep->add_option("--sweep", sweep_spec, "sweep specification file")
        ->envname("FQUAKE_SWEEP")
        ->required();

    fquake::StatsRequest stats_req;
    std::string stats_in;
    std::string stats_out;
    auto* stats = app.add_subcommand("stats", "fit size and wealth distributions of a run directory");
    stats->add_option("--in", stats_in, "directory written by run (or a sweep cell)")
        ->envname("FQUAKE_IN")
        ->required();
    stats->add_option("--out", stats_out, "output directory (default: --in)")->envname("FQUAKE_OUT");
    stats->add_option("--fit-min", stats_req.fit_min, "lower bound of the size fit range")
        ->envname("FQUAKE_FIT_MIN");
    stats->add_option("--fit-max", stats_req.fit_max, "upper bound of the size fit range")
        ->envname("FQUAKE_FIT_MAX");
    stats->add_option("--wealth-fit-min", stats_req.wealth_fit_min,
                      "lower bound of the wealth fit range (default: mean initial capital)")
        ->envname("FQUAKE_WEALTH_FIT_MIN");
    stats->add_option("--wealth-fit-max", stats_req.wealth_fit_max, "upper bound of the wealth fit range")
        ->envname("FQUAKE_WEALTH_FIT_MAX");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            fquake::RunRequest request;
            if (!manifest.empty()) {
                request = fquake::request_from_manifest(manifest, run_opts.out);
                request.jobs = run_opts.jobs;
            } else {
                request = to_request(run_opts);
            }
            fquake::cmd_run(request);
        } else if (*sweep) {
            auto request = to_request(sweep_opts);
            auto spec = fquake::load_sweep_spec(sweep_spec);
            if (sweep_opts.runs) spec.runs = *sweep_opts.runs;
            fquake::cmd_sweep(request, spec);
        } else if (*stats) {
            stats_req.in = stats_in;
            stats_req.out = stats_out;
            fquake::cmd_stats(stats_req);
        }
    } catch (const fquake::Error& e) {
        std::cerr << "fquake: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "fquake: unexpected error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
