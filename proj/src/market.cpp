#include "fquake/market.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "fquake/error.hpp"

namespace fquake {

std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::Up: return "up";
        case Direction::Down: return "down";
        case Direction::Flat: return "flat";
    }
    return "?";
}

MarketSeries::MarketSeries(std::vector<std::chrono::sys_days> dates, std::vector<double> closes)
    : dates_(std::move(dates)), closes_(std::move(closes)) {
    if (dates_.size() != closes_.size()) {
        throw ValidationError("dates and closes differ in length");
    }
    for (std::size_t j = 0; j < closes_.size(); ++j) {
        if (!(closes_[j] > 0.0) || !std::isfinite(closes_[j])) {
            throw ValidationError("close at row " + std::to_string(j) + " is not positive");
        }
        if (j > 0 && !(dates_[j] > dates_[j - 1])) {
            throw ValidationError("dates not strictly increasing at row " + std::to_string(j));
        }
    }
}

MarketSeries MarketSeries::from_closes(std::vector<double> closes) {
    std::vector<std::chrono::sys_days> dates;
    dates.reserve(closes.size());
    const std::chrono::sys_days start{std::chrono::days{0}};
    for (std::size_t j = 0; j < closes.size(); ++j) {
        dates.push_back(start + std::chrono::days{static_cast<int>(j)});
    }
    return MarketSeries(std::move(dates), std::move(closes));
}

MarketSeries MarketSeries::permuted(const std::vector<std::size_t>& order) const {
    if (order.size() != closes_.size()) throw InvalidInput("permutation length mismatch");
    std::vector<double> closes;
    closes.reserve(order.size());
    for (std::size_t idx : order) closes.push_back(closes_.at(idx));
    return MarketSeries(dates_, std::move(closes));
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

std::optional<std::chrono::sys_days> parse_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    if (!parse_number(s.substr(0, 4), y) || !parse_number(s.substr(5, 2), m) ||
        !parse_number(s.substr(8, 2), d)) {
        return std::nullopt;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                          std::chrono::day{d}};
    if (!ymd.ok()) return std::nullopt;
    return std::chrono::sys_days{ymd};
}

}  // namespace

MarketSeries parse_series(std::string_view text) {
    std::vector<std::chrono::sys_days> dates;
    std::vector<double> closes;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;

        const auto comma = line.find(',');
        if (comma == std::string_view::npos) {
            throw ParseError(line_no, "expected 'date,close'");
        }
        const auto date_field = trim(line.substr(0, comma));
        const auto close_field = trim(line.substr(comma + 1));
        const auto date = parse_date(date_field);
        if (!date) {
            // A non-date first row is a header.
            if (dates.empty() && line_no == 1) continue;
            throw ParseError(line_no, "bad date '" + std::string(date_field) + "'");
        }
        double close = 0.0;
        if (!parse_number(close_field, close)) {
            throw ParseError(line_no, "bad close '" + std::string(close_field) + "'");
        }
        if (!(close > 0.0)) {
            throw ValidationError("line " + std::to_string(line_no) + ": close must be positive");
        }
        if (!dates.empty() && !(*date > dates.back())) {
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": dates must be strictly increasing");
        }
        dates.push_back(*date);
        closes.push_back(close);
    }
    return MarketSeries(std::move(dates), std::move(closes));
}

MarketSeries load_series(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("file not found: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_series(buf.str());
}

std::vector<double> compute_returns(const MarketSeries& series) {
    const auto& e = series.closes();
    if (e.size() < 2) throw InvalidInput("returns need at least two closes");
    std::vector<double> out(e.size() - 1);
    for (std::size_t j = 0; j + 1 < e.size(); ++j) out[j] = (e[j + 1] - e[j]) / e[j];
    return out;
}

double rsi(const MarketSeries& series, std::size_t day, std::size_t window) {
    if (window == 0) throw InvalidConfig("RSI window must be positive");
    if (day < window) throw InsufficientData("RSI needs `window` changes before the day");
    if (day >= series.size()) throw IndexError("RSI day past the end of the series");
    const auto& e = series.closes();
    double gains = 0.0;
    double losses = 0.0;
    for (std::size_t k = day + 1 - window; k <= day; ++k) {
        const double change = e[k] - e[k - 1];
        if (change > 0.0) {
            gains += change;
        } else {
            losses -= change;
        }
    }
    if (losses == 0.0) return 100.0;
    if (gains == 0.0) return 0.0;
    return 100.0 - 100.0 / (1.0 + gains / losses);
}

std::optional<Direction> rsi_prediction(const MarketSeries& series, std::size_t day,
                                        std::size_t window) {
    if (day < 1 || day - 1 < window) return std::nullopt;
    const double value = rsi(series, day - 1, window);
    if (value < 50.0) return Direction::Up;
    if (value > 50.0) return Direction::Down;
    return series.close(day - 1) < series.close(day - 2) ? Direction::Down : Direction::Up;
}

Direction actual_sign(const MarketSeries& series, std::size_t day) {
    if (day < 1 || day >= series.size()) throw IndexError("day outside 1..T-1");
    const double diff = series.close(day) - series.close(day - 1);
    if (diff > 0.0) return Direction::Up;
    if (diff < 0.0) return Direction::Down;
    return Direction::Flat;
}

}  // namespace fquake
