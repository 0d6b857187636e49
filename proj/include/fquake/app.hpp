#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "fquake/config.hpp"

namespace fquake {

struct RunRequest {
    SimConfig config;
    std::filesystem::path series;
    std::filesystem::path out;
    std::size_t runs = 1;
    std::size_t jobs = 1;
};

// Writes quakes.csv, wealth.csv, summary.json and manifest.json into out.
void cmd_run(const RunRequest& request);

// Rebuilds the request recorded in a manifest. Fails when the series file no
// longer matches the recorded digest.
RunRequest request_from_manifest(const std::filesystem::path& manifest,
                                 const std::filesystem::path& out);

struct SweepSpec {
    std::vector<double> random_fractions;
    std::vector<Placement> placements;
    std::size_t runs = 10;
};

// `random_fractions = 0, 0.02`, `placements = uniform, one_community`,
// `runs = 10`; both lists are required.
SweepSpec parse_sweep_spec(std::string_view text);
SweepSpec load_sweep_spec(const std::filesystem::path& path);

// Runs every (fraction, placement) cell. Per-cell outputs go to
// out/cells/<cell>/; max_size.csv, size_ccdf.csv, wealth_ccdf.csv, fits.csv,
// summary.json and manifest.json go to out/.
void cmd_sweep(const RunRequest& base, const SweepSpec& spec);

struct StatsRequest {
    std::filesystem::path in;
    std::filesystem::path out;  // defaults to `in`
    std::optional<double> fit_min;
    std::optional<double> fit_max;
    std::optional<double> wealth_fit_min;
    std::optional<double> wealth_fit_max;
};

// Reads a run directory and writes stats.json, size_ccdf.csv and wealth_ccdf.csv.
void cmd_stats(const StatsRequest& request);

}  // namespace fquake
