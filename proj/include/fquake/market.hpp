#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

namespace fquake {

enum class Direction { Up, Down, Flat };

std::string_view to_string(Direction d);

// Daily closes E_j with strictly increasing dates and strictly positive values.
class MarketSeries {
public:
    MarketSeries() = default;
    // Throws ValidationError when the invariants do not hold.
    MarketSeries(std::vector<std::chrono::sys_days> dates, std::vector<double> closes);

    // Consecutive synthetic dates starting at 1970-01-01; for tests and tools
    // that only care about values.
    static MarketSeries from_closes(std::vector<double> closes);

    std::size_t size() const noexcept { return closes_.size(); }
    const std::vector<std::chrono::sys_days>& dates() const noexcept { return dates_; }
    const std::vector<double>& closes() const noexcept { return closes_; }
    double close(std::size_t j) const { return closes_.at(j); }

    // Same dates, closes reordered by `order` (a permutation of 0..T-1).
    MarketSeries permuted(const std::vector<std::size_t>& order) const;

private:
    std::vector<std::chrono::sys_days> dates_;
    std::vector<double> closes_;
};

// Reads `date,close` rows (ISO-8601 dates, optional header line).
MarketSeries load_series(const std::filesystem::path& path);
MarketSeries parse_series(std::string_view text);

// r_j = (E_{j+1} - E_j) / E_j, length T-1.
std::vector<double> compute_returns(const MarketSeries& series);

// Relative Strength Index over the `window` price changes ending at day j.
double rsi(const MarketSeries& series, std::size_t day, std::size_t window);

// Contrarian call for day j from the RSI at day j-1: oversold (< 50) bets Up,
// overbought (> 50) bets Down, exactly 50 repeats the sign of the last change.
// Returns nullopt while there is not enough history for an RSI at j-1.
std::optional<Direction> rsi_prediction(const MarketSeries& series, std::size_t day,
                                        std::size_t window);

// Sign of E_j - E_{j-1}.
Direction actual_sign(const MarketSeries& series, std::size_t day);

}  // namespace fquake
