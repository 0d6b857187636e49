#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace fquake {

enum class Placement { Uniform, OneCommunity, FourCommunities };

std::string_view to_string(Placement p);
Placement parse_placement(std::string_view text);

// Every free parameter of the model. Defaults reproduce the baseline
// community: 40x40 traders, p = 0.02, I_th = 1, alpha = 0.84, 14-day RSI.
struct SimConfig {
    std::size_t rows = 40;
    std::size_t cols = 40;
    double rewire_prob = 0.02;
    double threshold = 1.0;
    double alpha = 0.84;
    std::size_t rsi_window = 14;
    double random_fraction = 0.0;
    Placement placement = Placement::Uniform;

    double win_bet_fraction = 0.5;
    double loss_bet_fraction = 0.1;
    // Stake used before an agent's first settled bet.
    double first_bet_fraction = 0.1;
    double initial_capital_mean = 1000.0;
    double initial_capital_sd_fraction = 0.1;

    // Give the share a toppling agent would pass to Random neighbors to its
    // Technical neighbors instead of dissipating it.
    bool redistribute_random_share = false;
    std::size_t max_topplings = 1'000'000;

    std::uint64_t seed_topology = 1989'09'11;
    std::uint64_t seed_drive = 1989'09'11;
    std::uint64_t seed_bets = 1989'09'11;
    std::uint64_t seed_capital = 1989'09'11;

    std::size_t node_count() const noexcept { return rows * cols; }
    std::size_t random_count() const;

    void set_all_seeds(std::uint64_t seed);
    // Copy with every stream seed shifted by `offset` (ensemble member `offset`).
    SimConfig with_seed_offset(std::uint64_t offset) const;

    // Throws InvalidConfig on out-of-range values.
    void validate() const;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

// Flat `key = value` text, one entry per line, `#` starts a comment. Keys are
// the SimConfig field names; missing keys keep their defaults.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::filesystem::path& path);
// Canonical serialization; parse_config(format_config(c)) == c.
std::string format_config(const SimConfig& cfg);

}  // namespace fquake
