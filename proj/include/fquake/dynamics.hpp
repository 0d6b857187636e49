#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fquake/config.hpp"
#include "fquake/market.hpp"
#include "fquake/network.hpp"
#include "fquake/rng.hpp"
#include "fquake/wealth.hpp"

namespace fquake {

enum class TraderKind : std::uint8_t { Technical, Random };

std::string_view to_string(TraderKind k);

// Information levels and strategy of every trader, indexed by NodeId.
struct Community {
    std::vector<TraderKind> kinds;
    std::vector<double> information;

    std::size_t size() const noexcept { return kinds.size(); }
    double total_information() const;
};

// Snapshot of one trader at the end of a run.
struct AgentState {
    NodeId id = 0;
    TraderKind kind = TraderKind::Technical;
    double information = 0.0;
    double capital = 0.0;
    Outcome last_outcome = Outcome::None;
};

struct Participation {
    NodeId agent = 0;
    double bet = 0.0;

    friend bool operator==(const Participation&, const Participation&) = default;
};

// One avalanche. `size` counts topplings with multiplicity, so `participants`
// may list the same agent more than once.
struct QuakeRecord {
    std::size_t day = 0;
    NodeId seed_agent = 0;
    TraderKind seed_kind = TraderKind::Technical;
    Direction prediction = Direction::Up;
    Direction actual = Direction::Flat;
    std::size_t size = 0;
    std::vector<Participation> participants;
    bool won = false;
    std::int64_t signed_size = 0;

    friend bool operator==(const QuakeRecord&, const QuakeRecord&) = default;
};

// Parameters of the toppling rule.
struct HerdingRule {
    double threshold = 1.0;
    double alpha = 0.84;
    bool redistribute_random_share = false;
    std::size_t max_topplings = 1'000'000;

    static HerdingRule from(const SimConfig& cfg) {
        return {cfg.threshold, cfg.alpha, cfg.redistribute_random_share, cfg.max_topplings};
    }
};

struct ToppleEvent {
    NodeId agent = 0;
    double load = 0.0;
};

// Marks round(random_fraction * N) traders as Random according to the
// configured placement. FourCommunities splits the count into four blocks
// whose sizes differ by at most one.
std::vector<TraderKind> place_random_traders(const TraderNetwork& net, const SimConfig& cfg,
                                             Rng& rng);

// Adds an independent uniform increment in [0, threshold - I_max] to every agent.
void drive(Community& community, double threshold, Rng& rng);

// Raises the most informed agent (lowest id on ties) to exactly the threshold
// and returns it as the quake's seed.
NodeId trigger(Community& community, double threshold);

// Resets agent k and hands alpha / degree(k) of its load to each Technical
// neighbor. Random agents pass nothing on. Throws std::logic_error when k is
// below threshold.
ToppleEvent topple(Community& community, const TraderNetwork& net, NodeId k,
                   const HerdingRule& rule);

// Propagates the avalanche started by the seed in synchronous sweeps: every
// agent at or above threshold topples (ascending id) using its load at the
// start of the sweep; transfers become visible in the next sweep.
QuakeRecord run_quake(Community& community, const TraderNetwork& net, std::size_t day,
                      Direction prediction, const HerdingRule& rule);

// Scores the quake against the market. Flat days count as losses.
void resolve_quake(QuakeRecord& record, const MarketSeries& series);

// Settles each participation in order, recomputing the stake after every
// settlement, and writes the stake into the record.
void settle_quake(QuakeRecord& record, CapitalLedger& ledger, const BetPolicy& policy);

struct RunOptions {
    // Dropping participant lists keeps large sweeps small in memory.
    bool keep_participants = true;
};

struct SimulationResult {
    TraderNetwork network;
    Community community;
    CapitalLedger ledger;
    std::vector<QuakeRecord> quakes;

    std::vector<AgentState> agents() const;
};

// One quake per day j = 1..T-1, fully determined by the four seeds.
SimulationResult run_simulation(const SimConfig& cfg, const MarketSeries& series,
                                const RunOptions& options = {});

struct EnsembleResult {
    std::vector<SimulationResult> runs;

    // |s| of every quake, run by run.
    std::vector<double> pooled_sizes() const;
    std::vector<double> pooled_capitals() const;
    std::vector<double> pooled_capitals(TraderKind kind) const;
};

// Run r uses cfg.with_seed_offset(r). Runs may execute on up to `jobs`
// threads; results are always ordered by run index.
EnsembleResult run_ensemble(const SimConfig& cfg, const MarketSeries& series, std::size_t n_runs,
                            std::size_t jobs = 1, const RunOptions& options = {});

}  // namespace fquake
