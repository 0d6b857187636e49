// Full-scale acceptance checks, one PASS/FAIL line per criterion. Exit status is
// nonzero when any check fails. Set FQUAKE_SERIES to a date,close file to use a
// real index history instead of the built-in synthetic one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "fquake/app.hpp"
#include "fquake/dynamics.hpp"
#include "fquake/market.hpp"
#include "fquake/report.hpp"
#include "fquake/stats.hpp"

using namespace fquake;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kRuns = 10;
constexpr std::size_t kDays = 5750;

std::size_t jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// Daily log-normal steps with roughly the drift and volatility of a large-cap
// index over 1989-2012, rounded to cents.
MarketSeries synthetic_index() {
    std::mt19937_64 rng(20120531);
    std::normal_distribution<double> step(0.00024, 0.0115);
    std::vector<double> closes{346.73};
    double level = closes.front();
    while (closes.size() < kDays) {
        level *= std::exp(step(rng));
        closes.push_back(std::round(level * 100.0) / 100.0);
    }
    return MarketSeries::from_closes(closes);
}

MarketSeries series_under_test(std::string& label) {
    if (const char* path = std::getenv("FQUAKE_SERIES")) {
        label = path;
        return load_series(path);
    }
    label = "synthetic";
    return synthetic_index();
}

struct Cell {
    std::vector<std::vector<double>> sizes_by_run;
    std::vector<double> capital;
    std::vector<double> random_capital;
};

class Grid {
public:
    explicit Grid(const MarketSeries& series) : series_(series) {}

    const Cell& at(double fraction, Placement placement) {
        if (fraction == 0.0) placement = Placement::Uniform;
        const SweepKey key{fraction, placement};
        auto it = cells_.find(key);
        if (it != cells_.end()) return it->second;
        SimConfig cfg;
        cfg.random_fraction = fraction;
        cfg.placement = placement;
        const auto ens = run_ensemble(cfg, series_, kRuns, jobs(), {false});
        Cell cell;
        for (const auto& run : ens.runs) {
            std::vector<double> sizes;
            for (const auto& q : run.quakes) sizes.push_back(static_cast<double>(q.size));
            cell.sizes_by_run.push_back(std::move(sizes));
        }
        cell.capital = ens.pooled_capitals();
        cell.random_capital = ens.pooled_capitals(TraderKind::Random);
        return cells_.emplace(key, std::move(cell)).first->second;
    }

    double mean_max(double fraction, Placement placement) {
        const auto& cell = at(fraction, placement);
        std::map<SweepKey, std::vector<std::vector<double>>> one{{{fraction, placement}, cell.sizes_by_run}};
        return max_size_sweep(one).front().mean_max_size;
    }

private:
    const MarketSeries& series_;
    std::map<SweepKey, Cell> cells_;
};

std::vector<double> pooled(const Cell& cell) {
    std::vector<double> all;
    for (const auto& run : cell.sizes_by_run) all.insert(all.end(), run.begin(), run.end());
    return all;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string describe(const std::pair<FitResult, FitResult>& fits) {
    const auto& [p, e] = fits;
    return "power slope " + fmt(p.exponent) + " rms " + fmt(p.goodness) + ", exp rate " +
           fmt(e.exponent) + " rms " + fmt(e.goodness) + ", range [" + fmt(p.range.min) + ", " +
           fmt(p.range.max) + "]";
}

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Verdict()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Verdict out;
    try {
        out = check();
    } catch (const std::exception& e) {
        out = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.pass) ++failures;
    std::printf("%s %d %s: %s (%.1fs)\n", out.pass ? "PASS" : "FAIL", id, name, out.detail.c_str(),
                secs);
    std::fflush(stdout);
}

std::pair<FitResult, FitResult> size_fits(const Cell& cell) {
    const auto dist = cumulative_distribution(pooled(cell));
    return compare_models(dist, default_fit_range(dist));
}

std::pair<FitResult, FitResult> wealth_fits(const Cell& cell) {
    const auto dist = cumulative_distribution(cell.capital);
    FitRange range = default_fit_range(dist);
    range.min = SimConfig{}.initial_capital_mean;
    return compare_models(dist, range);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

int main() {
    std::string label;
    const auto series = series_under_test(label);
    std::printf("series: %s, %zu closes; %zu runs per cell; %zu threads\n", label.c_str(),
                series.size(), kRuns, jobs());
    Grid grid(series);

    report(1, "SOC baseline", [&] {
        const auto fits = size_fits(grid.at(0.0, Placement::Uniform));
        const bool power = fits.first.preferred;
        const double slope = fits.first.exponent;
        return Verdict{power && slope >= -2.5 && slope <= -1.3,
                       std::string("preferred ") + (power ? "power_law" : "exponential") + "; " +
                           describe(fits)};
    });

    report(2, "crossover at 10% random", [&] {
        const auto fits = size_fits(grid.at(0.10, Placement::Uniform));
        return Verdict{fits.second.preferred,
                       std::string("preferred ") + (fits.second.preferred ? "exponential" : "power_law") +
                           "; " + describe(fits)};
    });

    report(3, "damping at 5% random", [&] {
        const double base = grid.mean_max(0.0, Placement::Uniform);
        const double damped = grid.mean_max(0.05, Placement::Uniform);
        return Verdict{damped <= base / 3.0, "mean max " + fmt(damped) + " vs " + fmt(base) +
                                                 " (ratio " + fmt(damped / base) + ", limit 0.3333)"};
    });

    report(4, "placement ordering", [&] {
        bool ok = true;
        std::string detail;
        for (double f : {0.02, 0.05, 0.08, 0.10}) {
            const double u = grid.mean_max(f, Placement::Uniform);
            const double one = grid.mean_max(f, Placement::OneCommunity);
            const double four = grid.mean_max(f, Placement::FourCommunities);
            ok &= u <= one && u <= four;
            detail += fmt(100 * f) + "%: " + fmt(u) + "/" + fmt(one) + "/" + fmt(four) + "; ";
        }
        return Verdict{ok, detail + "uniform/one/four"};
    });

    report(5, "wealth Pareto tail", [&] {
        bool ok = true;
        std::vector<double> slopes;
        std::string detail;
        for (double f : {0.0, 0.05, 0.10}) {
            const auto fits = wealth_fits(grid.at(f, Placement::Uniform));
            const double slope = fits.first.exponent;
            ok &= fits.first.preferred && slope >= -3.2 && slope <= -1.8;
            slopes.push_back(slope);
            detail += fmt(100 * f) + "%: " + (fits.first.preferred ? "power_law " : "exponential ") +
                      describe(fits) + "; ";
        }
        const auto [lo, hi] = std::minmax_element(slopes.begin(), slopes.end());
        ok &= *hi - *lo <= 0.3;
        return Verdict{ok, detail + "slope spread " + fmt(*hi - *lo)};
    });

    report(6, "random-trader wealth", [&] {
        const auto& cell = grid.at(0.10, Placement::Uniform);
        const auto dist = cumulative_distribution(cell.random_capital);
        const auto fits = compare_models(dist, default_fit_range(dist));
        const double mean_all =
            std::accumulate(cell.capital.begin(), cell.capital.end(), 0.0) / cell.capital.size();
        const double mean_random =
            std::accumulate(cell.random_capital.begin(), cell.random_capital.end(), 0.0) /
            cell.random_capital.size();
        return Verdict{fits.second.preferred && mean_random > mean_all,
                       std::string("preferred ") + (fits.second.preferred ? "exponential" : "power_law") +
                           "; " + describe(fits) + "; mean random " + fmt(mean_random) +
                           " vs all " + fmt(mean_all)};
    });

    report(7, "sizes ignore the price series", [&] {
        SimConfig cfg;
        cfg.random_fraction = 0.05;
        std::vector<std::size_t> order(series.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), std::mt19937_64(7));
        const auto a = run_simulation(cfg, series, {false});
        const auto b = run_simulation(cfg, series.permuted(order), {false});
        bool same = a.quakes.size() == b.quakes.size();
        std::size_t signs_changed = 0;
        for (std::size_t i = 0; same && i < a.quakes.size(); ++i) {
            same = a.quakes[i].size == b.quakes[i].size;
            signs_changed += a.quakes[i].won != b.quakes[i].won;
        }
        return Verdict{same, std::to_string(a.quakes.size()) + " quakes compared, " +
                                 std::to_string(signs_changed) + " signs differ"};
    });

    report(8, "conservation", [&] {
        std::mt19937_64 gen(8);
        auto topo = make_stream(8, Stream::Topology);
        const auto lattice = build_lattice(40, 40);
        const auto rewired = rewire(lattice, 0.02, topo);
        std::uniform_real_distribution<double> level(0.0, 1.0);
        std::uniform_int_distribution<NodeId> interior(1, 38);
        std::uniform_int_distribution<NodeId> any(0, 1599);
        double worst_drift = 0.0;
        std::size_t not_decreasing = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            Community c;
            c.kinds.assign(1600, TraderKind::Technical);
            for (int i = 0; i < 1600; ++i) c.information.push_back(level(gen));
            auto d = c;

            const NodeId k = interior(gen) * 40 + interior(gen);
            c.information[k] = 1.0 + level(gen);
            const double before = c.total_information();
            topple(c, lattice, k, HerdingRule{1.0, 1.0, false, 1'000'000});
            worst_drift = std::max(worst_drift, std::abs(c.total_information() - before));

            const NodeId j = any(gen);
            d.information[j] = 1.0 + level(gen);
            const double before_d = d.total_information();
            topple(d, rewired, j, HerdingRule{1.0, 0.84, false, 1'000'000});
            not_decreasing += !(d.total_information() < before_d);
        }
        return Verdict{worst_drift <= 1e-12 && not_decreasing == 0,
                       "max drift " + fmt(worst_drift) + " at alpha 1, " +
                           std::to_string(not_decreasing) + " non-decreasing topplings at alpha 0.84"};
    });

    report(9, "oracle suites", [&] {
        std::string failed;
        auto need = [&](bool ok, const char* what) {
            if (!ok) failed += std::string(what) + "; ";
        };

        // Toppling arithmetic.
        const auto grid3 = build_lattice(3, 3);
        Community c;
        c.kinds.assign(9, TraderKind::Technical);
        c.information.assign(9, 0.0);
        c.information[4] = 1.0;
        topple(c, grid3, 4, HerdingRule{});
        need(std::abs(c.information[1] - 0.21) < 1e-12 && c.information[4] == 0.0, "toppling 0.21");
        const std::vector<std::pair<NodeId, NodeId>> path{{0, 1}, {1, 2}};
        const auto line = TraderNetwork::from_edges(3, path);
        Community p;
        p.kinds.assign(3, TraderKind::Technical);
        p.information = {0.0, 1.05, 0.0};
        topple(p, line, 1, HerdingRule{});
        need(std::abs(p.information[0] - 0.441) < 1e-12, "toppling 0.441");

        // RSI limits.
        std::vector<double> up, down;
        for (int i = 0; i <= 14; ++i) {
            up.push_back(100.0 + i);
            down.push_back(100.0 - i);
        }
        need(rsi(MarketSeries::from_closes(up), 14, 14) == 100.0, "rsi all gains");
        need(rsi(MarketSeries::from_closes(down), 14, 14) == 0.0, "rsi all losses");

        // Fit recovery.
        CumulativeDistribution pl, ex;
        for (int s = 1; s <= 100; ++s) {
            pl.support.push_back(s);
            pl.ccdf.push_back(std::pow(s, -2.0));
        }
        for (int s = 1; s <= 50; ++s) {
            ex.support.push_back(s);
            ex.ccdf.push_back(std::exp(-0.2 * s));
        }
        need(std::abs(fit_power_law(pl, {}).exponent + 2.0) <= 0.01, "power-law slope");
        need(std::abs(fit_exponential(ex, {}).exponent + 0.2) <= 0.005, "exponential rate");

        // Manifest replay.
        const auto dir = fs::temp_directory_path() / "fquake_acceptance";
        fs::remove_all(dir);
        RunRequest req;
        req.series = FQUAKE_FIXTURE;
        req.out = dir / "first";
        cmd_run(req);
        cmd_run(request_from_manifest(dir / "first" / "manifest.json", dir / "second"));
        for (const char* f : {"quakes.csv", "wealth.csv", "summary.json", "manifest.json"}) {
            need(slurp(dir / "first" / f) == slurp(dir / "second" / f), "replay");
        }
        fs::remove_all(dir);
        return Verdict{failed.empty(), failed.empty() ? "toppling, rsi, fits, replay" : failed};
    });

    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
