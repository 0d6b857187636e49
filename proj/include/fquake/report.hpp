#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fquake/config.hpp"
#include "fquake/dynamics.hpp"
#include "fquake/stats.hpp"

namespace fquake {

inline constexpr const char* kToolVersion = "0.1.0";

// Shortest round-trip decimal form; output files rely on it being stable.
std::string format_number(double value);

inline constexpr const char* kQuakesHeader =
    "run,day,size,signed_size,prediction,actual,seed_agent,seed_kind";
inline constexpr const char* kWealthHeader = "run,agent_id,kind,capital,bets,wins,losses";

void write_quakes_header(std::ostream& out);
void write_quakes_rows(std::ostream& out, std::size_t run, const std::vector<QuakeRecord>& quakes);
void write_wealth_header(std::ostream& out);
void write_wealth_rows(std::ostream& out, std::size_t run, const CapitalLedger& ledger,
                       const std::vector<TraderKind>& kinds);

struct QuakeRow {
    std::size_t run = 0;
    std::size_t day = 0;
    std::size_t size = 0;
    std::int64_t signed_size = 0;
    Direction prediction = Direction::Up;
    Direction actual = Direction::Flat;
    NodeId seed_agent = 0;
    TraderKind seed_kind = TraderKind::Technical;
};

struct WealthRow {
    std::size_t run = 0;
    NodeId agent = 0;
    TraderKind kind = TraderKind::Technical;
    double capital = 0.0;
    std::uint32_t bets = 0;
    std::uint32_t wins = 0;
    std::uint32_t losses = 0;
};

std::vector<QuakeRow> read_quakes_csv(const std::filesystem::path& path);
std::vector<WealthRow> read_wealth_csv(const std::filesystem::path& path);

// `value,ccdf` rows prefixed by the given label columns.
void write_ccdf_rows(std::ostream& out, const std::string& prefix, const CumulativeDistribution& dist);

nlohmann::ordered_json to_json(const FitResult& fit);
nlohmann::ordered_json to_json(const WealthSummary& summary);
nlohmann::ordered_json config_to_json(const SimConfig& cfg);
SimConfig config_from_json(const nlohmann::ordered_json& j);

// Power-law and exponential fits over the default range, with either bound
// overridden when given. An insufficient sample yields {"error": ...}.
nlohmann::ordered_json fit_report(const std::vector<double>& values,
                                  std::optional<double> fit_min = std::nullopt,
                                  std::optional<double> fit_max = std::nullopt);

std::string sha256_file(const std::filesystem::path& path);

// Writes `text` to `path`, throwing on failure.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace fquake
