#include "fquake/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "fquake/error.hpp"

namespace fquake {

std::string_view to_string(TraderKind k) {
    return k == TraderKind::Random ? "random" : "technical";
}

double Community::total_information() const {
    return std::accumulate(information.begin(), information.end(), 0.0);
}

std::vector<TraderKind> place_random_traders(const TraderNetwork& net, const SimConfig& cfg,
                                             Rng& rng) {
    const std::size_t n = net.node_count();
    const std::size_t count = cfg.random_count();
    if (count > n) throw InvalidConfig("more random traders than agents");

    std::vector<TraderKind> kinds(n, TraderKind::Technical);
    if (count == 0) return kinds;

    std::uniform_int_distribution<NodeId> pick_anchor(0, static_cast<NodeId>(n - 1));
    switch (cfg.placement) {
        case Placement::Uniform: {
            std::vector<NodeId> ids(n);
            std::iota(ids.begin(), ids.end(), NodeId{0});
            // Partial Fisher-Yates: the first `count` slots are a uniform subset.
            for (std::size_t i = 0; i < count; ++i) {
                std::uniform_int_distribution<std::size_t> pick(i, n - 1);
                std::swap(ids[i], ids[pick(rng)]);
                kinds[ids[i]] = TraderKind::Random;
            }
            break;
        }
        case Placement::OneCommunity: {
            for (NodeId id : lattice_block(net, pick_anchor(rng), count)) {
                kinds[id] = TraderKind::Random;
            }
            break;
        }
        case Placement::FourCommunities: {
            constexpr std::size_t kMaxAttempts = 100'000;
            for (std::size_t b = 0; b < 4; ++b) {
                const std::size_t size = count / 4 + (b < count % 4 ? 1 : 0);
                if (size == 0) continue;
                bool placed = false;
                for (std::size_t attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
                    const auto block = lattice_block(net, pick_anchor(rng), size);
                    const bool free = std::none_of(block.begin(), block.end(), [&](NodeId id) {
                        return kinds[id] == TraderKind::Random;
                    });
                    if (!free) continue;
                    for (NodeId id : block) kinds[id] = TraderKind::Random;
                    placed = true;
                }
                if (!placed) throw InvalidConfig("cannot fit four disjoint random-trader communities");
            }
            break;
        }
    }
    return kinds;
}

void drive(Community& community, double threshold, Rng& rng) {
    auto& info = community.information;
    if (info.empty()) return;
    const double i_max = *std::max_element(info.begin(), info.end());
    const double room = std::max(0.0, threshold - i_max);
    std::uniform_real_distribution<double> increment(0.0, room);
    for (auto& value : info) value += increment(rng);
}

NodeId trigger(Community& community, double threshold) {
    auto& info = community.information;
    if (info.empty()) throw InvalidInput("trigger on an empty community");
    const auto it = std::max_element(info.begin(), info.end());
    *it = threshold;
    return static_cast<NodeId>(it - info.begin());
}

namespace {

// Hands `load` from agent k to its neighbors; returns nothing, records
// receivers in `touched`.
void distribute(Community& community, const TraderNetwork& net, NodeId k, double load,
                const HerdingRule& rule, std::vector<NodeId>& touched) {
    if (community.kinds[k] == TraderKind::Random) return;
    const auto neighbors = net.neighbors(k);
    if (neighbors.empty()) return;

    double share = rule.alpha / static_cast<double>(neighbors.size()) * load;
    if (rule.redistribute_random_share) {
        const auto technical = std::count_if(neighbors.begin(), neighbors.end(), [&](NodeId v) {
            return community.kinds[v] == TraderKind::Technical;
        });
        if (technical == 0) return;
        share = rule.alpha / static_cast<double>(technical) * load;
    }
    for (NodeId v : neighbors) {
        if (community.kinds[v] != TraderKind::Technical) continue;
        community.information[v] += share;
        touched.push_back(v);
    }
}

}  // namespace

ToppleEvent topple(Community& community, const TraderNetwork& net, NodeId k,
                   const HerdingRule& rule) {
    double& level = community.information.at(k);
    if (level < rule.threshold) throw std::logic_error("toppling an agent below threshold");
    const double load = level;
    level = 0.0;
    std::vector<NodeId> touched;
    distribute(community, net, k, load, rule, touched);
    return {k, load};
}

QuakeRecord run_quake(Community& community, const TraderNetwork& net, std::size_t day,
                      Direction prediction, const HerdingRule& rule) {
    QuakeRecord record;
    record.day = day;
    record.prediction = prediction;

    std::vector<NodeId> active;
    for (NodeId id = 0; id < community.size(); ++id) {
        if (community.information[id] >= rule.threshold) active.push_back(id);
    }
    if (active.empty()) throw std::logic_error("quake started with nobody at threshold");
    record.seed_agent = active.front();
    record.seed_kind = community.kinds[record.seed_agent];

    std::vector<double> loads;
    std::vector<NodeId> touched;
    while (!active.empty()) {
        record.size += active.size();
        if (record.size > rule.max_topplings) {
            throw NonTermination("avalanche on day " + std::to_string(day) + " exceeded " +
                                 std::to_string(rule.max_topplings) + " topplings");
        }
        loads.clear();
        for (NodeId k : active) {
            loads.push_back(community.information[k]);
            community.information[k] = 0.0;
            record.participants.push_back({k, 0.0});
        }
        touched.clear();
        for (std::size_t i = 0; i < active.size(); ++i) {
            distribute(community, net, active[i], loads[i], rule, touched);
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        active.clear();
        for (NodeId v : touched) {
            if (community.information[v] >= rule.threshold) active.push_back(v);
        }
    }
    return record;
}

void resolve_quake(QuakeRecord& record, const MarketSeries& series) {
    record.actual = actual_sign(series, record.day);
    record.won = record.actual != Direction::Flat && record.prediction == record.actual;
    const auto s = static_cast<std::int64_t>(record.size);
    record.signed_size = record.won ? s : -s;
}

void settle_quake(QuakeRecord& record, CapitalLedger& ledger, const BetPolicy& policy) {
    for (auto& p : record.participants) {
        p.bet = bet_amount(ledger, p.agent, policy);
        settle(ledger, p.agent, p.bet, record.won);
    }
}

std::vector<AgentState> SimulationResult::agents() const {
    std::vector<AgentState> out(community.size());
    for (NodeId id = 0; id < out.size(); ++id) {
        out[id] = {id, community.kinds[id], community.information[id], ledger.capital[id],
                   ledger.last_outcome[id]};
    }
    return out;
}

SimulationResult run_simulation(const SimConfig& cfg, const MarketSeries& series,
                                const RunOptions& options) {
    cfg.validate();
    if (series.size() < 2) throw InvalidInput("simulation needs at least two closes");

    SimulationResult result;
    auto topology = make_stream(cfg.seed_topology, Stream::Topology);
    result.network = rewire(build_lattice(cfg.rows, cfg.cols), cfg.rewire_prob, topology);
    const std::size_t n = result.network.node_count();

    auto& community = result.community;
    community.kinds = place_random_traders(result.network, cfg, topology);

    auto drive_rng = make_stream(cfg.seed_drive, Stream::Drive);
    std::uniform_real_distribution<double> initial(0.0, cfg.threshold);
    community.information.resize(n);
    for (auto& value : community.information) value = initial(drive_rng);

    auto capital_rng = make_stream(cfg.seed_capital, Stream::Capital);
    result.ledger = init_capitals(n, cfg.initial_capital_mean, cfg.initial_capital_sd_fraction,
                                  capital_rng);
    auto bets_rng = make_stream(cfg.seed_bets, Stream::Bets);

    const auto rule = HerdingRule::from(cfg);
    const BetPolicy policy{cfg.win_bet_fraction, cfg.loss_bet_fraction, cfg.first_bet_fraction};
    result.quakes.reserve(series.size() - 1);

    for (std::size_t day = 1; day < series.size(); ++day) {
        drive(community, cfg.threshold, drive_rng);
        const NodeId seed = trigger(community, cfg.threshold);

        std::optional<Direction> call;
        if (community.kinds[seed] == TraderKind::Technical) {
            call = rsi_prediction(series, day, cfg.rsi_window);
        }
        if (!call) call = coin_flip(bets_rng) ? Direction::Up : Direction::Down;

        auto quake = run_quake(community, result.network, day, *call, rule);
        resolve_quake(quake, series);
        settle_quake(quake, result.ledger, policy);
        if (!options.keep_participants) {
            quake.participants.clear();
            quake.participants.shrink_to_fit();
        }
        result.quakes.push_back(std::move(quake));
    }
    return result;
}

std::vector<double> EnsembleResult::pooled_sizes() const {
    std::vector<double> out;
    for (const auto& run : runs) {
        for (const auto& q : run.quakes) out.push_back(static_cast<double>(q.size));
    }
    return out;
}

std::vector<double> EnsembleResult::pooled_capitals() const {
    std::vector<double> out;
    for (const auto& run : runs) {
        out.insert(out.end(), run.ledger.capital.begin(), run.ledger.capital.end());
    }
    return out;
}

std::vector<double> EnsembleResult::pooled_capitals(TraderKind kind) const {
    std::vector<double> out;
    for (const auto& run : runs) {
        for (std::size_t i = 0; i < run.ledger.size(); ++i) {
            if (run.community.kinds[i] == kind) out.push_back(run.ledger.capital[i]);
        }
    }
    return out;
}

EnsembleResult run_ensemble(const SimConfig& cfg, const MarketSeries& series, std::size_t n_runs,
                            std::size_t jobs, const RunOptions& options) {
    if (n_runs < 1) throw InvalidConfig("ensemble needs at least one run");
    EnsembleResult out;
    out.runs.resize(n_runs);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t r = next++; r < n_runs; r = next++) {
            try {
                out.runs[r] = run_simulation(cfg.with_seed_offset(r), series, options);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    const std::size_t threads = std::clamp<std::size_t>(jobs, 1, n_runs);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace fquake
