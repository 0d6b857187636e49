#include "fquake/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fquake/error.hpp"

namespace fquake {

std::string_view to_string(Placement p) {
    switch (p) {
        case Placement::Uniform: return "uniform";
        case Placement::OneCommunity: return "one_community";
        case Placement::FourCommunities: return "four_communities";
    }
    return "?";
}

Placement parse_placement(std::string_view text) {
    if (text == "uniform") return Placement::Uniform;
    if (text == "one_community") return Placement::OneCommunity;
    if (text == "four_communities") return Placement::FourCommunities;
    throw InvalidConfig("unknown placement '" + std::string(text) + "'");
}

std::size_t SimConfig::random_count() const {
    return static_cast<std::size_t>(std::llround(random_fraction * static_cast<double>(node_count())));
}

void SimConfig::set_all_seeds(std::uint64_t seed) {
    seed_topology = seed_drive = seed_bets = seed_capital = seed;
}

SimConfig SimConfig::with_seed_offset(std::uint64_t offset) const {
    SimConfig out = *this;
    out.seed_topology += offset;
    out.seed_drive += offset;
    out.seed_bets += offset;
    out.seed_capital += offset;
    return out;
}

void SimConfig::validate() const {
    if (rows < 2 || cols < 2) throw InvalidConfig("rows and cols must be at least 2");
    if (!(rewire_prob >= 0.0 && rewire_prob <= 1.0)) throw InvalidConfig("rewire_prob outside [0, 1]");
    if (!(threshold > 0.0)) throw InvalidConfig("threshold must be positive");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidConfig("alpha outside [0, 1]");
    if (rsi_window < 1) throw InvalidConfig("rsi_window must be at least 1");
    if (!(random_fraction >= 0.0 && random_fraction <= 1.0)) {
        throw InvalidConfig("random_fraction outside [0, 1]");
    }
    for (double f : {win_bet_fraction, loss_bet_fraction, first_bet_fraction}) {
        if (!(f > 0.0 && f < 1.0)) throw InvalidConfig("bet fractions must lie in (0, 1)");
    }
    if (!(initial_capital_mean > 0.0)) throw InvalidConfig("initial_capital_mean must be positive");
    if (!(initial_capital_sd_fraction >= 0.0)) {
        throw InvalidConfig("initial_capital_sd_fraction must be non-negative");
    }
    if (max_topplings < 1) throw InvalidConfig("max_topplings must be positive");
}

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

template <typename T>
T number(std::size_t line, std::string_view key, std::string_view value) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ParseError(line, "bad value for " + std::string(key) + ": '" + std::string(value) + "'");
    }
    return out;
}

bool boolean(std::size_t line, std::string_view key, std::string_view value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ParseError(line, "bad boolean for " + std::string(key));
}

template <typename T>
std::string fmt_num(T v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

SimConfig parse_config(std::string_view text) {
    SimConfig cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));

        if (key == "rows") cfg.rows = number<std::size_t>(line_no, key, value);
        else if (key == "cols") cfg.cols = number<std::size_t>(line_no, key, value);
        else if (key == "rewire_prob") cfg.rewire_prob = number<double>(line_no, key, value);
        else if (key == "threshold") cfg.threshold = number<double>(line_no, key, value);
        else if (key == "alpha") cfg.alpha = number<double>(line_no, key, value);
        else if (key == "rsi_window") cfg.rsi_window = number<std::size_t>(line_no, key, value);
        else if (key == "random_fraction") cfg.random_fraction = number<double>(line_no, key, value);
        else if (key == "placement") cfg.placement = parse_placement(value);
        else if (key == "win_bet_fraction") cfg.win_bet_fraction = number<double>(line_no, key, value);
        else if (key == "loss_bet_fraction") cfg.loss_bet_fraction = number<double>(line_no, key, value);
        else if (key == "first_bet_fraction") cfg.first_bet_fraction = number<double>(line_no, key, value);
        else if (key == "initial_capital_mean") cfg.initial_capital_mean = number<double>(line_no, key, value);
        else if (key == "initial_capital_sd_fraction") {
            cfg.initial_capital_sd_fraction = number<double>(line_no, key, value);
        } else if (key == "redistribute_random_share") {
            cfg.redistribute_random_share = boolean(line_no, key, value);
        } else if (key == "max_topplings") cfg.max_topplings = number<std::size_t>(line_no, key, value);
        else if (key == "seed_topology") cfg.seed_topology = number<std::uint64_t>(line_no, key, value);
        else if (key == "seed_drive") cfg.seed_drive = number<std::uint64_t>(line_no, key, value);
        else if (key == "seed_bets") cfg.seed_bets = number<std::uint64_t>(line_no, key, value);
        else if (key == "seed_capital") cfg.seed_capital = number<std::uint64_t>(line_no, key, value);
        else if (key == "seed") cfg.set_all_seeds(number<std::uint64_t>(line_no, key, value));
        else throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
    }
    cfg.validate();
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("file not found: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string format_config(const SimConfig& cfg) {
    std::string out;
    auto put = [&out](std::string_view key, const std::string& value) {
        out.append(key).append(" = ").append(value).push_back('\n');
    };
    put("rows", fmt_num(cfg.rows));
    put("cols", fmt_num(cfg.cols));
    put("rewire_prob", fmt_num(cfg.rewire_prob));
    put("threshold", fmt_num(cfg.threshold));
    put("alpha", fmt_num(cfg.alpha));
    put("rsi_window", fmt_num(cfg.rsi_window));
    put("random_fraction", fmt_num(cfg.random_fraction));
    put("placement", std::string(to_string(cfg.placement)));
    put("win_bet_fraction", fmt_num(cfg.win_bet_fraction));
    put("loss_bet_fraction", fmt_num(cfg.loss_bet_fraction));
    put("first_bet_fraction", fmt_num(cfg.first_bet_fraction));
    put("initial_capital_mean", fmt_num(cfg.initial_capital_mean));
    put("initial_capital_sd_fraction", fmt_num(cfg.initial_capital_sd_fraction));
    put("redistribute_random_share", cfg.redistribute_random_share ? "true" : "false");
    put("max_topplings", fmt_num(cfg.max_topplings));
    put("seed_topology", fmt_num(cfg.seed_topology));
    put("seed_drive", fmt_num(cfg.seed_drive));
    put("seed_bets", fmt_num(cfg.seed_bets));
    put("seed_capital", fmt_num(cfg.seed_capital));
    return out;
}

}  // namespace fquake
