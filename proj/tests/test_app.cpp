#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fquake/app.hpp"
#include "fquake/error.hpp"
#include "fquake/report.hpp"

using namespace fquake;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("fquake_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::size_t count_lines(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("run on the bundled fixture") {
    const auto out = scratch_dir("run");
    RunRequest req;
    req.series = FQUAKE_FIXTURE;
    req.out = out;
    cmd_run(req);

    const auto quakes = read_quakes_csv(out / "quakes.csv");
    CHECK(quakes.size() == 15);
    CHECK(quakes.front().day == 1);
    CHECK(quakes.back().day == 15);
    CHECK(read_wealth_csv(out / "wealth.csv").size() == 1600);
    for (const char* f : {"summary.json", "manifest.json"}) CHECK(fs::exists(out / f));

    const auto manifest = nlohmann::ordered_json::parse(slurp(out / "manifest.json"));
    CHECK(manifest["command"] == "run");
    CHECK(manifest["series"]["sha256"] == sha256_file(FQUAKE_FIXTURE));

    SUBCASE("manifest replay is byte identical") {
        const auto replay_dir = scratch_dir("replay");
        cmd_run(request_from_manifest(out / "manifest.json", replay_dir));
        for (const char* f : {"quakes.csv", "wealth.csv", "summary.json", "manifest.json"}) {
            CHECK(slurp(out / f) == slurp(replay_dir / f));
        }
    }
    SUBCASE("stats agree with the run summary") {
        const auto stats_dir = scratch_dir("stats");
        StatsRequest sreq;
        sreq.in = out;
        sreq.out = stats_dir;
        cmd_stats(sreq);
        CHECK(slurp(stats_dir / "stats.json") == slurp(out / "summary.json"));
        CHECK(count_lines(slurp(stats_dir / "size_ccdf.csv")) > 1);
        CHECK(count_lines(slurp(stats_dir / "wealth_ccdf.csv")) > 1);
    }
    SUBCASE("stats without inputs") {
        StatsRequest sreq;
        sreq.in = scratch_dir("missing");
        CHECK_THROWS_AS(cmd_stats(sreq), Error);
    }
}

TEST_CASE("run errors") {
    RunRequest req;
    req.series = "/nonexistent/series.csv";
    req.out = scratch_dir("bad");
    try {
        cmd_run(req);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("file not found") != std::string::npos);
    }
}

TEST_CASE("tampered series is rejected on replay") {
    const auto dir = scratch_dir("tamper");
    fs::create_directories(dir);
    fs::copy_file(FQUAKE_FIXTURE, dir / "series.csv");
    RunRequest req;
    req.series = dir / "series.csv";
    req.out = dir / "out";
    cmd_run(req);
    std::ofstream(dir / "series.csv", std::ios::app) << "1989-10-03,350.00\n";
    CHECK_THROWS_AS(request_from_manifest(dir / "out" / "manifest.json", dir / "again"),
                    ValidationError);
}

TEST_CASE("sweep spec") {
    const auto spec = parse_sweep_spec(
        "random_fractions = 0, 0.05\n"
        "placements = uniform, one_community\n"
        "runs = 2\n");
    CHECK(spec.random_fractions == std::vector<double>{0.0, 0.05});
    CHECK(spec.placements == std::vector<Placement>{Placement::Uniform, Placement::OneCommunity});
    CHECK(spec.runs == 2);

    CHECK_THROWS_AS(parse_sweep_spec(""), ValidationError);
    CHECK_THROWS_AS(parse_sweep_spec("placements = uniform\n"), ValidationError);
    CHECK_THROWS_AS(parse_sweep_spec("random_fractions = 0.1\n"), ValidationError);
    CHECK_THROWS_AS(parse_sweep_spec("random_fractions = 2\nplacements = uniform\n"), InvalidConfig);
    CHECK_THROWS_AS(parse_sweep_spec("random_fractions = 0\nplacements = ring\n"), InvalidConfig);
    CHECK_THROWS_AS(parse_sweep_spec("colour = red\n"), ParseError);
}

TEST_CASE("small sweep") {
    const auto out = scratch_dir("sweep");
    RunRequest base;
    base.series = FQUAKE_FIXTURE;
    base.out = out;
    base.config.rows = 10;
    base.config.cols = 10;
    const auto spec = parse_sweep_spec(
        "random_fractions = 0.1, 0\nplacements = uniform, four_communities\nruns = 2\n");
    cmd_sweep(base, spec);

    const auto table = slurp(out / "max_size.csv");
    CHECK(count_lines(table) == 5);
    CHECK(table.rfind("random_fraction,placement,runs,mean_max_size\n0,uniform,2,", 0) == 0);
    for (const char* f : {"size_ccdf.csv", "wealth_ccdf.csv", "fits.csv", "summary.json", "manifest.json"}) {
        CHECK(fs::exists(out / f));
    }
    std::size_t cells = 0;
    for (const auto& entry : fs::directory_iterator(out / "cells")) {
        ++cells;
        CHECK(read_quakes_csv(entry.path() / "quakes.csv").size() == 2 * 15);
        CHECK(fs::exists(entry.path() / "manifest.json"));
    }
    CHECK(cells == 4);
}
