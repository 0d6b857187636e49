#include "fquake/stats.hpp"

#include <algorithm>
#include <cmath>

#include "fquake/error.hpp"

namespace fquake {

CumulativeDistribution cumulative_distribution(std::span<const double> values) {
    if (values.empty()) throw InvalidInput("distribution of an empty sample");
    std::vector<double> sorted;
    sorted.reserve(values.size());
    for (double v : values) {
        const double a = std::abs(v);
        if (!(a > 0.0) || !std::isfinite(a)) throw InvalidInput("sizes must be non-zero and finite");
        sorted.push_back(a);
    }
    std::sort(sorted.begin(), sorted.end());

    CumulativeDistribution dist;
    dist.samples = sorted.size();
    const auto n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0 && sorted[i] == sorted[i - 1]) continue;
        dist.support.push_back(sorted[i]);
        dist.ccdf.push_back(static_cast<double>(sorted.size() - i) / n);
    }
    return dist;
}

FitRange default_fit_range(const CumulativeDistribution& dist, std::size_t min_events) {
    if (dist.support.empty()) throw InvalidInput("empty distribution");
    FitRange range{dist.support.front(), dist.support.front()};
    const auto n = static_cast<double>(dist.samples);
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (std::llround(dist.ccdf[i] * n) >= static_cast<long long>(min_events)) {
            range.max = dist.support[i];
        }
    }
    return range;
}

std::string_view to_string(FitModel m) {
    return m == FitModel::PowerLaw ? "power_law" : "exponential";
}

namespace {

FitResult line_fit(const CumulativeDistribution& dist, const FitRange& range, FitModel model) {
    std::vector<double> xs;
    std::vector<double> ys;
    FitResult fit;
    fit.model = model;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double s = dist.support[i];
        if (!range.contains(s)) continue;
        if (xs.empty()) fit.range.min = s;
        fit.range.max = s;
        xs.push_back(model == FitModel::PowerLaw ? std::log(s) : s);
        ys.push_back(std::log(dist.ccdf[i]));
    }
    if (xs.size() < 5) {
        throw InsufficientData("fit needs at least 5 support points in range, got " +
                               std::to_string(xs.size()));
    }
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    fit.exponent = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.exponent * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.exponent * xs[i]);
        ss += r * r;
    }
    fit.goodness = std::sqrt(ss / n);
    fit.points = xs.size();
    return fit;
}

}  // namespace

FitResult fit_power_law(const CumulativeDistribution& dist, const FitRange& range) {
    return line_fit(dist, range, FitModel::PowerLaw);
}

FitResult fit_exponential(const CumulativeDistribution& dist, const FitRange& range) {
    return line_fit(dist, range, FitModel::Exponential);
}

FitModel model_preference(const FitResult& power, const FitResult& expo) {
    return expo.goodness < power.goodness ? FitModel::Exponential : FitModel::PowerLaw;
}

std::pair<FitResult, FitResult> compare_models(const CumulativeDistribution& dist,
                                               const FitRange& range) {
    auto power = fit_power_law(dist, range);
    auto expo = fit_exponential(dist, range);
    const auto winner = model_preference(power, expo);
    power.preferred = winner == FitModel::PowerLaw;
    expo.preferred = winner == FitModel::Exponential;
    return {power, expo};
}

double power_law_mle(std::span<const double> values, double xmin) {
    if (!(xmin > 0.0)) throw InvalidInput("xmin must be positive");
    double log_sum = 0.0;
    std::size_t n = 0;
    for (double v : values) {
        const double a = std::abs(v);
        if (a < xmin) continue;
        log_sum += std::log(a / xmin);
        ++n;
    }
    if (n < 2 || log_sum <= 0.0) throw InsufficientData("too few observations above xmin");
    return 1.0 + static_cast<double>(n) / log_sum;
}

std::vector<MaxSizeRow> max_size_sweep(
    const std::map<SweepKey, std::vector<std::vector<double>>>& sizes_by_run) {
    std::vector<MaxSizeRow> rows;
    for (const auto& [key, runs] : sizes_by_run) {
        if (runs.empty()) throw InvalidInput("sweep cell without runs");
        double total = 0.0;
        for (const auto& sizes : runs) {
            if (sizes.empty()) throw InvalidInput("run without quakes");
            double largest = 0.0;
            for (double s : sizes) largest = std::max(largest, std::abs(s));
            total += largest;
        }
        rows.push_back({key, runs.size(), total / static_cast<double>(runs.size())});
    }
    return rows;
}

WealthSummary wealth_summary(std::span<const double> capital, std::span<const double> initial,
                             std::span<const TraderKind> kinds) {
    if (capital.size() != kinds.size() || initial.size() != kinds.size()) {
        throw InvalidInput("capital, initial and kind arrays differ in length");
    }
    WealthSummary out;
    out.agents = capital.size();

    double sum_all = 0.0;
    double sum_tech = 0.0;
    double sum_rand = 0.0;
    std::size_t up_all = 0;
    std::size_t up_tech = 0;
    std::size_t up_rand = 0;
    double worst_random = std::numeric_limits<double>::infinity();
    double best_random = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < capital.size(); ++i) {
        const bool up = capital[i] > initial[i];
        sum_all += capital[i];
        up_all += up;
        if (kinds[i] == TraderKind::Random) {
            ++out.random;
            sum_rand += capital[i];
            up_rand += up;
            worst_random = std::min(worst_random, capital[i]);
            best_random = std::max(best_random, capital[i]);
        } else {
            ++out.technical;
            sum_tech += capital[i];
            up_tech += up;
        }
    }

    auto ratio = [](double num, std::size_t den) { return num / static_cast<double>(den); };
    if (out.agents > 0) {
        out.mean_all = ratio(sum_all, out.agents);
        out.above_initial_all = ratio(static_cast<double>(up_all), out.agents);
    }
    if (out.technical > 0) {
        out.mean_technical = ratio(sum_tech, out.technical);
        out.above_initial_technical = ratio(static_cast<double>(up_tech), out.technical);
    }
    if (out.random > 0) {
        out.mean_random = ratio(sum_rand, out.random);
        out.above_initial_random = ratio(static_cast<double>(up_rand), out.random);
    }
    if (out.technical > 0 && out.random > 0) {
        std::size_t below = 0;
        std::size_t above = 0;
        for (std::size_t i = 0; i < capital.size(); ++i) {
            if (kinds[i] != TraderKind::Technical) continue;
            below += capital[i] < worst_random;
            above += capital[i] > best_random;
        }
        out.technical_below_worst_random = ratio(static_cast<double>(below), out.technical);
        out.technical_above_best_random = ratio(static_cast<double>(above), out.technical);
    }
    return out;
}

WealthSummary wealth_summary(const CapitalLedger& ledger, std::span<const TraderKind> kinds) {
    return wealth_summary(ledger.capital, ledger.initial, kinds);
}

}  // namespace fquake
