#include "fquake/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "fquake/error.hpp"

namespace fquake {

std::string format_number(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

void write_quakes_header(std::ostream& out) { out << kQuakesHeader << '\n'; }

void write_quakes_rows(std::ostream& out, std::size_t run, const std::vector<QuakeRecord>& quakes) {
    for (const auto& q : quakes) {
        out << run << ',' << q.day << ',' << q.size << ',' << q.signed_size << ','
            << to_string(q.prediction) << ',' << to_string(q.actual) << ',' << q.seed_agent << ','
            << to_string(q.seed_kind) << '\n';
    }
}

void write_wealth_header(std::ostream& out) { out << kWealthHeader << '\n'; }

void write_wealth_rows(std::ostream& out, std::size_t run, const CapitalLedger& ledger,
                       const std::vector<TraderKind>& kinds) {
    for (std::size_t i = 0; i < ledger.size(); ++i) {
        out << run << ',' << i << ',' << to_string(kinds.at(i)) << ','
            << format_number(ledger.capital[i]) << ',' << ledger.bets[i] << ',' << ledger.wins[i]
            << ',' << ledger.losses[i] << '\n';
    }
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    while (true) {
        const auto comma = line.find(',');
        fields.push_back(line.substr(0, comma));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return fields;
}

template <typename T>
T field(std::size_t line, std::string_view text) {
    T out{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError(line, "bad field '" + std::string(text) + "'");
    }
    return out;
}

Direction direction(std::size_t line, std::string_view text) {
    if (text == "up") return Direction::Up;
    if (text == "down") return Direction::Down;
    if (text == "flat") return Direction::Flat;
    throw ParseError(line, "bad direction '" + std::string(text) + "'");
}

TraderKind kind(std::size_t line, std::string_view text) {
    if (text == "technical") return TraderKind::Technical;
    if (text == "random") return TraderKind::Random;
    throw ParseError(line, "bad trader kind '" + std::string(text) + "'");
}

// Calls `row` for every data line after checking the header.
template <typename F>
void for_each_row(const std::filesystem::path& path, std::string_view header, std::size_t columns,
                  F&& row) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("file not found: " + path.string());
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line) || line != header) {
        throw ParseError(1, path.string() + ": expected header '" + std::string(header) + "'");
    }
    ++line_no;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != columns) throw ParseError(line_no, "wrong number of columns");
        row(line_no, fields);
    }
}

}  // namespace

std::vector<QuakeRow> read_quakes_csv(const std::filesystem::path& path) {
    std::vector<QuakeRow> rows;
    for_each_row(path, kQuakesHeader, 8, [&](std::size_t ln, const auto& f) {
        rows.push_back({field<std::size_t>(ln, f[0]), field<std::size_t>(ln, f[1]),
                        field<std::size_t>(ln, f[2]), field<std::int64_t>(ln, f[3]),
                        direction(ln, f[4]), direction(ln, f[5]), field<NodeId>(ln, f[6]),
                        kind(ln, f[7])});
    });
    return rows;
}

std::vector<WealthRow> read_wealth_csv(const std::filesystem::path& path) {
    std::vector<WealthRow> rows;
    for_each_row(path, kWealthHeader, 7, [&](std::size_t ln, const auto& f) {
        rows.push_back({field<std::size_t>(ln, f[0]), field<NodeId>(ln, f[1]), kind(ln, f[2]),
                        field<double>(ln, f[3]), field<std::uint32_t>(ln, f[4]),
                        field<std::uint32_t>(ln, f[5]), field<std::uint32_t>(ln, f[6])});
    });
    return rows;
}

void write_ccdf_rows(std::ostream& out, const std::string& prefix, const CumulativeDistribution& dist) {
    for (std::size_t i = 0; i < dist.size(); ++i) {
        out << prefix << format_number(dist.support[i]) << ',' << format_number(dist.ccdf[i]) << '\n';
    }
}

nlohmann::ordered_json to_json(const FitResult& fit) {
    return {{"model", to_string(fit.model)},
            {"exponent", fit.exponent},
            {"intercept", fit.intercept},
            {"fit_min", fit.range.min},
            {"fit_max", fit.range.max},
            {"points", fit.points},
            {"rms_residual", fit.goodness},
            {"preferred", fit.preferred}};
}

nlohmann::ordered_json to_json(const WealthSummary& s) {
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    return {{"agents", s.agents},
            {"technical", s.technical},
            {"random", s.random},
            {"mean_all", opt(s.mean_all)},
            {"mean_technical", opt(s.mean_technical)},
            {"mean_random", opt(s.mean_random)},
            {"above_initial_all", opt(s.above_initial_all)},
            {"above_initial_technical", opt(s.above_initial_technical)},
            {"above_initial_random", opt(s.above_initial_random)},
            {"technical_below_worst_random", opt(s.technical_below_worst_random)},
            {"technical_above_best_random", opt(s.technical_above_best_random)}};
}

nlohmann::ordered_json config_to_json(const SimConfig& cfg) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    std::istringstream lines(format_config(cfg));
    std::string line;
    while (std::getline(lines, line)) {
        const auto eq = line.find(" = ");
        j[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return j;
}

SimConfig config_from_json(const nlohmann::ordered_json& j) {
    std::string text;
    for (const auto& [key, value] : j.items()) {
        text += key + " = " + value.get<std::string>() + "\n";
    }
    return parse_config(text);
}

nlohmann::ordered_json fit_report(const std::vector<double>& values, std::optional<double> fit_min,
                                  std::optional<double> fit_max) {
    nlohmann::ordered_json out;
    out["samples"] = values.size();
    try {
        const auto dist = cumulative_distribution(values);
        FitRange used = default_fit_range(dist);
        if (fit_min) used.min = *fit_min;
        if (fit_max) used.max = *fit_max;
        auto [power, expo] = compare_models(dist, used);
        out["power_law"] = to_json(power);
        out["exponential"] = to_json(expo);
        out["preferred"] = to_string(power.preferred ? FitModel::PowerLaw : FitModel::Exponential);
        try {
            out["mle_density_exponent"] = power_law_mle(values, power.range.min);
        } catch (const InsufficientData&) {
            out["mle_density_exponent"] = nullptr;
        }
    } catch (const Error& e) {
        out["error"] = e.what();
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("file not found: " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 unavailable");
    }
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return hex.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw Error("failed writing " + path.string());
}

}  // namespace fquake
