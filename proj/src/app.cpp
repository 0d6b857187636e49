#include "fquake/app.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "fquake/dynamics.hpp"
#include "fquake/error.hpp"
#include "fquake/market.hpp"
#include "fquake/report.hpp"
#include "fquake/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace fquake {

namespace {

struct Pooled {
    std::vector<std::vector<double>> sizes_by_run;
    std::vector<double> capital;
    std::vector<double> initial;
    std::vector<TraderKind> kinds;

    std::vector<double> sizes() const {
        std::vector<double> out;
        for (const auto& run : sizes_by_run) out.insert(out.end(), run.begin(), run.end());
        return out;
    }

    std::vector<double> capital_of(TraderKind kind) const {
        std::vector<double> out;
        for (std::size_t i = 0; i < capital.size(); ++i) {
            if (kinds[i] == kind) out.push_back(capital[i]);
        }
        return out;
    }
};

Pooled pool(const EnsembleResult& ensemble) {
    Pooled p;
    for (const auto& run : ensemble.runs) {
        auto& sizes = p.sizes_by_run.emplace_back();
        for (const auto& q : run.quakes) sizes.push_back(static_cast<double>(q.size));
        p.capital.insert(p.capital.end(), run.ledger.capital.begin(), run.ledger.capital.end());
        p.initial.insert(p.initial.end(), run.ledger.initial.begin(), run.ledger.initial.end());
        p.kinds.insert(p.kinds.end(), run.community.kinds.begin(), run.community.kinds.end());
    }
    return p;
}

struct FitBounds {
    std::optional<double> size_min;
    std::optional<double> size_max;
    std::optional<double> wealth_min;
    std::optional<double> wealth_max;
};

ordered_json summarize(const Pooled& p, const FitBounds& bounds) {
    ordered_json j;
    j["runs"] = p.sizes_by_run.size();
    j["quakes"] = p.sizes().size();
    if (!p.sizes_by_run.empty()) {
        const auto rows = max_size_sweep({{SweepKey{}, p.sizes_by_run}});
        j["mean_max_size"] = rows.front().mean_max_size;
    }
    j["sizes"] = fit_report(p.sizes(), bounds.size_min, bounds.size_max);
    j["wealth"] = to_json(wealth_summary(p.capital, p.initial, p.kinds));
    j["wealth_fit"] = fit_report(p.capital, bounds.wealth_min, bounds.wealth_max);
    const auto random = p.capital_of(TraderKind::Random);
    j["random_wealth_fit"] = random.empty() ? ordered_json(nullptr) : fit_report(random);
    return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string quakes_csv(const EnsembleResult& ensemble) {
    std::ostringstream out;
    write_quakes_header(out);
    for (std::size_t r = 0; r < ensemble.runs.size(); ++r) {
        write_quakes_rows(out, r, ensemble.runs[r].quakes);
    }
    return out.str();
}

std::string wealth_csv(const EnsembleResult& ensemble) {
    std::ostringstream out;
    write_wealth_header(out);
    for (std::size_t r = 0; r < ensemble.runs.size(); ++r) {
        const auto& run = ensemble.runs[r];
        write_wealth_rows(out, r, run.ledger, run.community.kinds);
    }
    return out.str();
}

ordered_json series_json(const fs::path& series) {
    return {{"path", series.generic_string()}, {"sha256", sha256_file(series)}};
}

ordered_json seeds_json(const SimConfig& cfg) {
    return {{"topology", cfg.seed_topology},
            {"drive", cfg.seed_drive},
            {"bets", cfg.seed_bets},
            {"capital", cfg.seed_capital}};
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
}

std::string cell_name(const SweepKey& key) {
    return "p" + format_number(key.random_fraction) + "_" + std::string(to_string(key.placement));
}

template <typename T>
T parse_value(std::string_view text, std::string_view what) {
    T out{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw InvalidConfig("bad " + std::string(what) + " '" + std::string(text) + "'");
    }
    return out;
}

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> split_list(std::string_view value) {
    std::vector<std::string_view> items;
    while (!value.empty()) {
        const auto comma = value.find(',');
        const auto item = trim(value.substr(0, comma));
        if (!item.empty()) items.push_back(item);
        if (comma == std::string_view::npos) break;
        value.remove_prefix(comma + 1);
    }
    return items;
}

}  // namespace

void cmd_run(const RunRequest& request) {
    request.config.validate();
    const auto series = load_series(request.series);
    const auto ensemble = run_ensemble(request.config, series, request.runs, request.jobs);

    ensure_dir(request.out);
    write_file(request.out / "quakes.csv", quakes_csv(ensemble));
    write_file(request.out / "wealth.csv", wealth_csv(ensemble));
    FitBounds bounds;
    bounds.wealth_min = request.config.initial_capital_mean;
    write_file(request.out / "summary.json", dump(summarize(pool(ensemble), bounds)));

    ordered_json manifest;
    manifest["tool"] = "fquake";
    manifest["version"] = kToolVersion;
    manifest["command"] = "run";
    manifest["config"] = config_to_json(request.config);
    manifest["seeds"] = seeds_json(request.config);
    manifest["runs"] = request.runs;
    manifest["series"] = series_json(request.series);
    manifest["outputs"] = {"quakes.csv", "wealth.csv", "summary.json", "manifest.json"};
    write_file(request.out / "manifest.json", dump(manifest));
}

RunRequest request_from_manifest(const fs::path& manifest, const fs::path& out) {
    std::ifstream in(manifest, std::ios::binary);
    if (!in) throw Error("file not found: " + manifest.string());
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(manifest.string() + ": " + e.what());
    }
    if (j.value("command", "") != "run") throw ValidationError("manifest does not describe a run");

    RunRequest request;
    request.config = config_from_json(j.at("config"));
    request.series = j.at("series").at("path").get<std::string>();
    request.runs = j.at("runs").get<std::size_t>();
    request.out = out;
    const auto expected = j.at("series").at("sha256").get<std::string>();
    if (sha256_file(request.series) != expected) {
        throw ValidationError("series file " + request.series.string() +
                              " does not match the manifest digest");
    }
    return request;
}

SweepSpec parse_sweep_spec(std::string_view text) {
    SweepSpec spec;
    bool have_fractions = false;
    bool have_placements = false;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "random_fractions") {
            for (auto item : split_list(value)) {
                const double f = parse_value<double>(item, "random fraction");
                if (!(f >= 0.0 && f <= 1.0)) throw InvalidConfig("random fraction outside [0, 1]");
                spec.random_fractions.push_back(f);
            }
            have_fractions = true;
        } else if (key == "placements") {
            for (auto item : split_list(value)) spec.placements.push_back(parse_placement(item));
            have_placements = true;
        } else if (key == "runs") {
            spec.runs = parse_value<std::size_t>(value, "run count");
        } else {
            throw ParseError(line_no, "unknown sweep key '" + std::string(key) + "'");
        }
    }
    if (!have_fractions || spec.random_fractions.empty()) {
        throw ValidationError("sweep spec lists no random_fractions");
    }
    if (!have_placements || spec.placements.empty()) {
        throw ValidationError("sweep spec lists no placements");
    }
    if (spec.runs < 1) throw InvalidConfig("sweep needs at least one run per cell");
    return spec;
}

SweepSpec load_sweep_spec(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("file not found: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_sweep_spec(buf.str());
}

void cmd_sweep(const RunRequest& base, const SweepSpec& spec) {
    base.config.validate();
    const auto series = load_series(base.series);
    ensure_dir(base.out / "cells");

    std::map<SweepKey, std::vector<std::vector<double>>> sizes_by_cell;
    std::ostringstream size_ccdf;
    std::ostringstream wealth_ccdf;
    std::ostringstream fits;
    size_ccdf << "random_fraction,placement,size,ccdf\n";
    wealth_ccdf << "random_fraction,placement,kind,capital,ccdf\n";
    fits << "random_fraction,placement,target,model,exponent,intercept,fit_min,fit_max,points,"
            "rms_residual,preferred\n";
    ordered_json cells = ordered_json::object();

    std::vector<SweepKey> keys;
    for (double f : spec.random_fractions) {
        for (Placement p : spec.placements) keys.push_back({f, p});
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    for (const auto& key : keys) {
        SimConfig cfg = base.config;
        cfg.random_fraction = key.random_fraction;
        cfg.placement = key.placement;
        cfg.validate();
        const auto ensemble = run_ensemble(cfg, series, spec.runs, base.jobs, {false});
        const auto pooled = pool(ensemble);

        const auto name = cell_name(key);
        const auto dir = base.out / "cells" / name;
        ensure_dir(dir);
        write_file(dir / "quakes.csv", quakes_csv(ensemble));
        write_file(dir / "wealth.csv", wealth_csv(ensemble));
        FitBounds bounds;
        bounds.wealth_min = cfg.initial_capital_mean;
        const auto summary = summarize(pooled, bounds);
        write_file(dir / "summary.json", dump(summary));
        ordered_json cell_manifest;
        cell_manifest["tool"] = "fquake";
        cell_manifest["version"] = kToolVersion;
        cell_manifest["command"] = "run";
        cell_manifest["config"] = config_to_json(cfg);
        cell_manifest["seeds"] = seeds_json(cfg);
        cell_manifest["runs"] = spec.runs;
        cell_manifest["series"] = series_json(base.series);
        cell_manifest["outputs"] = {"quakes.csv", "wealth.csv", "summary.json", "manifest.json"};
        write_file(dir / "manifest.json", dump(cell_manifest));
        cells[name] = summary;

        const std::string prefix =
            format_number(key.random_fraction) + "," + std::string(to_string(key.placement)) + ",";
        write_ccdf_rows(size_ccdf, prefix, cumulative_distribution(pooled.sizes()));
        write_ccdf_rows(wealth_ccdf, prefix + "all,", cumulative_distribution(pooled.capital));
        for (auto kind : {TraderKind::Technical, TraderKind::Random}) {
            const auto caps = pooled.capital_of(kind);
            if (caps.empty()) continue;
            write_ccdf_rows(wealth_ccdf, prefix + std::string(to_string(kind)) + ",",
                            cumulative_distribution(caps));
        }
        for (const char* target : {"sizes", "wealth_fit", "random_wealth_fit"}) {
            const auto& report = summary[target];
            if (report.is_null() || report.contains("error")) continue;
            for (const char* model : {"power_law", "exponential"}) {
                const auto& f = report[model];
                fits << prefix << target << ',' << model << ','
                     << format_number(f["exponent"].get<double>()) << ','
                     << format_number(f["intercept"].get<double>()) << ','
                     << format_number(f["fit_min"].get<double>()) << ','
                     << format_number(f["fit_max"].get<double>()) << ','
                     << f["points"].get<std::size_t>() << ','
                     << format_number(f["rms_residual"].get<double>()) << ','
                     << (f["preferred"].get<bool>() ? "true" : "false") << '\n';
            }
        }
        sizes_by_cell[key] = pooled.sizes_by_run;
    }

    std::ostringstream table;
    table << "random_fraction,placement,runs,mean_max_size\n";
    for (const auto& row : max_size_sweep(sizes_by_cell)) {
        table << format_number(row.key.random_fraction) << ',' << to_string(row.key.placement) << ','
              << row.runs << ',' << format_number(row.mean_max_size) << '\n';
    }
    write_file(base.out / "max_size.csv", table.str());
    write_file(base.out / "size_ccdf.csv", size_ccdf.str());
    write_file(base.out / "wealth_ccdf.csv", wealth_ccdf.str());
    write_file(base.out / "fits.csv", fits.str());
    write_file(base.out / "summary.json", dump(ordered_json{{"cells", cells}}));

    ordered_json manifest;
    manifest["tool"] = "fquake";
    manifest["version"] = kToolVersion;
    manifest["command"] = "sweep";
    manifest["config"] = config_to_json(base.config);
    manifest["seeds"] = seeds_json(base.config);
    ordered_json placements = ordered_json::array();
    for (auto p : spec.placements) placements.push_back(to_string(p));
    manifest["sweep"] = {{"random_fractions", spec.random_fractions},
                         {"placements", placements},
                         {"runs", spec.runs}};
    manifest["series"] = series_json(base.series);
    manifest["outputs"] = {"max_size.csv", "size_ccdf.csv", "wealth_ccdf.csv", "fits.csv",
                           "summary.json", "manifest.json", "cells/"};
    write_file(base.out / "manifest.json", dump(manifest));
}

void cmd_stats(const StatsRequest& request) {
    const auto quakes = read_quakes_csv(request.in / "quakes.csv");
    const auto wealth = read_wealth_csv(request.in / "wealth.csv");
    const auto manifest_path = request.in / "manifest.json";
    std::ifstream manifest_in(manifest_path, std::ios::binary);
    if (!manifest_in) throw Error("file not found: " + manifest_path.string());
    const auto manifest = ordered_json::parse(manifest_in);
    const auto cfg = config_from_json(manifest.at("config"));

    Pooled p;
    for (const auto& q : quakes) {
        if (q.run >= p.sizes_by_run.size()) p.sizes_by_run.resize(q.run + 1);
        p.sizes_by_run[q.run].push_back(static_cast<double>(q.size));
    }
    // Starting capitals are not in wealth.csv; they are a pure function of
    // the capital seed, so regenerate them per run.
    std::map<std::size_t, CapitalLedger> initial_by_run;
    for (const auto& w : wealth) {
        auto it = initial_by_run.find(w.run);
        if (it == initial_by_run.end()) {
            const auto run_cfg = cfg.with_seed_offset(w.run);
            auto rng = make_stream(run_cfg.seed_capital, Stream::Capital);
            it = initial_by_run
                     .emplace(w.run, init_capitals(run_cfg.node_count(), run_cfg.initial_capital_mean,
                                                   run_cfg.initial_capital_sd_fraction, rng))
                     .first;
        }
        p.capital.push_back(w.capital);
        p.initial.push_back(it->second.initial.at(w.agent));
        p.kinds.push_back(w.kind);
    }

    FitBounds bounds{request.fit_min, request.fit_max,
                     request.wealth_fit_min.value_or(cfg.initial_capital_mean),
                     request.wealth_fit_max};
    const auto out_dir = request.out.empty() ? request.in : request.out;
    ensure_dir(out_dir);
    write_file(out_dir / "stats.json", dump(summarize(p, bounds)));

    std::ostringstream sizes;
    sizes << "size,ccdf\n";
    if (!quakes.empty()) write_ccdf_rows(sizes, "", cumulative_distribution(p.sizes()));
    write_file(out_dir / "size_ccdf.csv", sizes.str());

    std::ostringstream caps;
    caps << "kind,capital,ccdf\n";
    if (!p.capital.empty()) {
        write_ccdf_rows(caps, "all,", cumulative_distribution(p.capital));
        for (auto kind : {TraderKind::Technical, TraderKind::Random}) {
            const auto values = p.capital_of(kind);
            if (!values.empty()) {
                write_ccdf_rows(caps, std::string(to_string(kind)) + ",", cumulative_distribution(values));
            }
        }
    }
    write_file(out_dir / "wealth_ccdf.csv", caps.str());
}

}  // namespace fquake
