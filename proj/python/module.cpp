#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstdio>

#include "fquake/app.hpp"
#include "fquake/dynamics.hpp"
#include "fquake/error.hpp"
#include "fquake/report.hpp"
#include "fquake/stats.hpp"

namespace py = pybind11;
using namespace fquake;

namespace {

py::dict fit_dict(const FitResult& f) {
    py::dict d;
    d["model"] = std::string(to_string(f.model));
    d["exponent"] = f.exponent;
    d["intercept"] = f.intercept;
    d["fit_min"] = f.range.min;
    d["fit_max"] = f.range.max;
    d["points"] = f.points;
    d["rms_residual"] = f.goodness;
    d["preferred"] = f.preferred;
    return d;
}

FitRange make_range(std::optional<double> lo, std::optional<double> hi) {
    FitRange r;
    if (lo) r.min = *lo;
    if (hi) r.max = *hi;
    return r;
}

}  // namespace

PYBIND11_MODULE(_fquake, m) {
    m.doc() = "Herding avalanches of technical traders on a small-world network";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<InvalidConfig>(m, "InvalidConfig", base.ptr());
    py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<InsufficientData>(m, "InsufficientData", base.ptr());
    py::register_exception<IndexError>(m, "IndexError", base.ptr());
    py::register_exception<NonTermination>(m, "NonTermination", base.ptr());

    py::enum_<Placement>(m, "Placement")
        .value("UNIFORM", Placement::Uniform)
        .value("ONE_COMMUNITY", Placement::OneCommunity)
        .value("FOUR_COMMUNITIES", Placement::FourCommunities);

    py::enum_<TraderKind>(m, "TraderKind")
        .value("TECHNICAL", TraderKind::Technical)
        .value("RANDOM", TraderKind::Random);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("rows", &SimConfig::rows)
        .def_readwrite("cols", &SimConfig::cols)
        .def_readwrite("rewire_prob", &SimConfig::rewire_prob)
        .def_readwrite("threshold", &SimConfig::threshold)
        .def_readwrite("alpha", &SimConfig::alpha)
        .def_readwrite("rsi_window", &SimConfig::rsi_window)
        .def_readwrite("random_fraction", &SimConfig::random_fraction)
        .def_readwrite("placement", &SimConfig::placement)
        .def_readwrite("win_bet_fraction", &SimConfig::win_bet_fraction)
        .def_readwrite("loss_bet_fraction", &SimConfig::loss_bet_fraction)
        .def_readwrite("first_bet_fraction", &SimConfig::first_bet_fraction)
        .def_readwrite("initial_capital_mean", &SimConfig::initial_capital_mean)
        .def_readwrite("initial_capital_sd_fraction", &SimConfig::initial_capital_sd_fraction)
        .def_readwrite("redistribute_random_share", &SimConfig::redistribute_random_share)
        .def_readwrite("max_topplings", &SimConfig::max_topplings)
        .def_readwrite("seed_topology", &SimConfig::seed_topology)
        .def_readwrite("seed_drive", &SimConfig::seed_drive)
        .def_readwrite("seed_bets", &SimConfig::seed_bets)
        .def_readwrite("seed_capital", &SimConfig::seed_capital)
        .def("set_all_seeds", &SimConfig::set_all_seeds)
        .def("validate", &SimConfig::validate)
        .def("__eq__", [](const SimConfig& a, const SimConfig& b) { return a == b; })
        .def("__repr__", [](const SimConfig& c) { return format_config(c); });

    m.def("parse_config", &parse_config);
    m.def("load_config", &load_config);
    m.def("format_config", &format_config);

    py::class_<MarketSeries>(m, "MarketSeries")
        .def_static("from_closes", &MarketSeries::from_closes)
        .def("__len__", &MarketSeries::size)
        .def_property_readonly("closes", [](const MarketSeries& s) { return s.closes(); })
        .def_property_readonly("dates", [](const MarketSeries& s) {
            std::vector<std::string> out;
            for (auto d : s.dates()) {
                const std::chrono::year_month_day ymd{d};
                char buf[16];
                std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()),
                              unsigned(ymd.month()), unsigned(ymd.day()));
                out.emplace_back(buf);
            }
            return out;
        });

    m.def("parse_series", &parse_series);
    m.def("load_series", &load_series);
    m.def("rsi", &rsi, py::arg("series"), py::arg("day"), py::arg("window") = 14);

    py::class_<TraderNetwork>(m, "TraderNetwork")
        .def_property_readonly("node_count", &TraderNetwork::node_count)
        .def_property_readonly("edge_count", &TraderNetwork::edge_count)
        .def_property_readonly("rewired_edges", &TraderNetwork::rewired_edges)
        .def("neighbors",
             [](const TraderNetwork& n, NodeId id) {
                 const auto s = n.neighbors(id);
                 return std::vector<NodeId>(s.begin(), s.end());
             })
        .def("edges", &TraderNetwork::edges)
        .def("mean_degree", &TraderNetwork::mean_degree);

    m.def("build_lattice", &build_lattice);
    m.def(
        "rewire",
        [](const TraderNetwork& net, double p, std::uint64_t seed) {
            auto rng = make_stream(seed, Stream::Topology);
            return rewire(net, p, rng);
        },
        py::arg("net"), py::arg("p"), py::arg("seed"));
    m.def("mean_shortest_path", &mean_shortest_path);

    py::class_<QuakeRecord>(m, "QuakeRecord")
        .def_readonly("day", &QuakeRecord::day)
        .def_readonly("seed_agent", &QuakeRecord::seed_agent)
        .def_readonly("seed_kind", &QuakeRecord::seed_kind)
        .def_property_readonly("prediction",
                               [](const QuakeRecord& q) { return std::string(to_string(q.prediction)); })
        .def_property_readonly("actual",
                               [](const QuakeRecord& q) { return std::string(to_string(q.actual)); })
        .def_readonly("size", &QuakeRecord::size)
        .def_readonly("won", &QuakeRecord::won)
        .def_readonly("signed_size", &QuakeRecord::signed_size)
        .def_property_readonly("participants", [](const QuakeRecord& q) {
            std::vector<std::pair<NodeId, double>> out;
            for (const auto& p : q.participants) out.emplace_back(p.agent, p.bet);
            return out;
        });

    py::class_<SimulationResult>(m, "SimulationResult")
        .def_readonly("network", &SimulationResult::network)
        .def_readonly("quakes", &SimulationResult::quakes)
        .def_property_readonly("kinds", [](const SimulationResult& r) { return r.community.kinds; })
        .def_property_readonly("information",
                               [](const SimulationResult& r) { return r.community.information; })
        .def_property_readonly("capital", [](const SimulationResult& r) { return r.ledger.capital; })
        .def_property_readonly("initial_capital",
                               [](const SimulationResult& r) { return r.ledger.initial; })
        .def_property_readonly("signed_sizes", [](const SimulationResult& r) {
            std::vector<std::int64_t> out;
            for (const auto& q : r.quakes) out.push_back(q.signed_size);
            return out;
        });

    m.def(
        "run_simulation",
        [](const SimConfig& cfg, const MarketSeries& series, bool keep_participants) {
            py::gil_scoped_release release;
            return run_simulation(cfg, series, {keep_participants});
        },
        py::arg("config"), py::arg("series"), py::arg("keep_participants") = true);
    m.def(
        "run_ensemble",
        [](const SimConfig& cfg, const MarketSeries& series, std::size_t runs, std::size_t jobs) {
            py::gil_scoped_release release;
            return run_ensemble(cfg, series, runs, jobs, {false}).runs;
        },
        py::arg("config"), py::arg("series"), py::arg("runs"), py::arg("jobs") = 1);

    py::class_<CumulativeDistribution>(m, "CumulativeDistribution")
        .def_readonly("support", &CumulativeDistribution::support)
        .def_readonly("ccdf", &CumulativeDistribution::ccdf)
        .def_readonly("samples", &CumulativeDistribution::samples);

    m.def("cumulative_distribution",
          [](const std::vector<double>& v) { return cumulative_distribution(v); });
    m.def("default_fit_range", [](const CumulativeDistribution& d, std::size_t min_events) {
        const auto r = default_fit_range(d, min_events);
        return std::make_pair(r.min, r.max);
    }, py::arg("dist"), py::arg("min_events") = 5);
    m.def(
        "fit_power_law",
        [](const CumulativeDistribution& d, std::optional<double> lo, std::optional<double> hi) {
            return fit_dict(fit_power_law(d, make_range(lo, hi)));
        },
        py::arg("dist"), py::arg("fit_min") = py::none(), py::arg("fit_max") = py::none());
    m.def(
        "fit_exponential",
        [](const CumulativeDistribution& d, std::optional<double> lo, std::optional<double> hi) {
            return fit_dict(fit_exponential(d, make_range(lo, hi)));
        },
        py::arg("dist"), py::arg("fit_min") = py::none(), py::arg("fit_max") = py::none());
    m.def(
        "compare_models",
        [](const CumulativeDistribution& d, std::optional<double> lo, std::optional<double> hi) {
            auto [p, e] = compare_models(d, make_range(lo, hi));
            return std::make_pair(fit_dict(p), fit_dict(e));
        },
        py::arg("dist"), py::arg("fit_min") = py::none(), py::arg("fit_max") = py::none());
    m.def("power_law_mle",
          [](const std::vector<double>& v, double xmin) { return power_law_mle(v, xmin); });
    m.def(
        "fit_report",
        [](const std::vector<double>& v, std::optional<double> lo, std::optional<double> hi) {
            return fit_report(v, lo, hi).dump();
        },
        py::arg("values"), py::arg("fit_min") = py::none(), py::arg("fit_max") = py::none());
    m.def("wealth_summary", [](const SimulationResult& r) {
        return to_json(wealth_summary(r.ledger, r.community.kinds)).dump();
    });

    m.def(
        "cmd_run",
        [](const SimConfig& cfg, const std::filesystem::path& series, const std::filesystem::path& out,
           std::size_t runs, std::size_t jobs) {
            py::gil_scoped_release release;
            cmd_run({cfg, series, out, runs, jobs});
        },
        py::arg("config"), py::arg("series"), py::arg("out"), py::arg("runs") = 1, py::arg("jobs") = 1);
    m.def(
        "cmd_stats",
        [](const std::filesystem::path& in, std::optional<std::filesystem::path> out) {
            StatsRequest req;
            req.in = in;
            req.out = out.value_or(in);
            cmd_stats(req);
        },
        py::arg("run_dir"), py::arg("out") = py::none());
}
