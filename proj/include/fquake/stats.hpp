#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "fquake/config.hpp"
#include "fquake/dynamics.hpp"
#include "fquake/wealth.hpp"

namespace fquake {

// Empirical P(X >= x) over absolute values.
struct CumulativeDistribution {
    std::vector<double> support;  // strictly increasing
    std::vector<double> ccdf;     // non-increasing, ccdf.front() == 1
    std::size_t samples = 0;

    std::size_t size() const noexcept { return support.size(); }
};

CumulativeDistribution cumulative_distribution(std::span<const double> values);

struct FitRange {
    double min = 0.0;
    double max = std::numeric_limits<double>::infinity();

    bool contains(double x) const noexcept { return x >= min && x <= max; }
};

// Whole support, minus the sparse tail where fewer than `min_events`
// observations lie at or above the point.
FitRange default_fit_range(const CumulativeDistribution& dist, std::size_t min_events = 5);

enum class FitModel { PowerLaw, Exponential };

std::string_view to_string(FitModel m);

// Straight-line least-squares fit in linearizing coordinates:
// PowerLaw uses (ln s, ln ccdf), Exponential uses (s, ln ccdf).
struct FitResult {
    FitModel model = FitModel::PowerLaw;
    double exponent = 0.0;  // slope
    double intercept = 0.0;
    FitRange range;         // actual first/last support point used
    std::size_t points = 0;
    double goodness = 0.0;  // RMS residual of ln ccdf
    bool preferred = false;
};

FitResult fit_power_law(const CumulativeDistribution& dist, const FitRange& range);
FitResult fit_exponential(const CumulativeDistribution& dist, const FitRange& range);

// Smaller residual wins; ties go to PowerLaw.
FitModel model_preference(const FitResult& power, const FitResult& expo);

// Both fits over one range with their `preferred` flags set.
std::pair<FitResult, FitResult> compare_models(const CumulativeDistribution& dist,
                                               const FitRange& range);

// Continuous maximum-likelihood estimate of the density exponent a in
// p(x) ~ x^-a for x >= xmin. The matching ccdf slope is 1 - a.
double power_law_mle(std::span<const double> values, double xmin);

struct SweepKey {
    double random_fraction = 0.0;
    Placement placement = Placement::Uniform;

    friend auto operator<=>(const SweepKey&, const SweepKey&) = default;
};

struct MaxSizeRow {
    SweepKey key;
    std::size_t runs = 0;
    double mean_max_size = 0.0;
};

// Per cell: the largest |s| of each run, averaged over runs.
std::vector<MaxSizeRow> max_size_sweep(
    const std::map<SweepKey, std::vector<std::vector<double>>>& sizes_by_run);

struct WealthSummary {
    std::size_t agents = 0;
    std::size_t technical = 0;
    std::size_t random = 0;
    std::optional<double> mean_all;
    std::optional<double> mean_technical;
    std::optional<double> mean_random;
    // Strictly above the agent's own starting capital.
    std::optional<double> above_initial_all;
    std::optional<double> above_initial_technical;
    std::optional<double> above_initial_random;
    // Share of Technical agents below the poorest / above the richest Random agent.
    std::optional<double> technical_below_worst_random;
    std::optional<double> technical_above_best_random;
};

WealthSummary wealth_summary(std::span<const double> capital, std::span<const double> initial,
                             std::span<const TraderKind> kinds);
WealthSummary wealth_summary(const CapitalLedger& ledger, std::span<const TraderKind> kinds);

}  // namespace fquake
