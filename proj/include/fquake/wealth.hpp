#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fquake/rng.hpp"

namespace fquake {

enum class Outcome : std::uint8_t { None, Win, Loss };

// Stake sizes as fractions of current capital, keyed by the last outcome.
struct BetPolicy {
    double after_win = 0.5;
    double after_loss = 0.1;
    double first = 0.1;

    double fraction(Outcome last) const noexcept {
        switch (last) {
            case Outcome::Win: return after_win;
            case Outcome::Loss: return after_loss;
            case Outcome::None: break;
        }
        return first;
    }
};

// Per-agent capital and betting history for one run.
struct CapitalLedger {
    std::vector<double> initial;
    std::vector<double> capital;
    std::vector<Outcome> last_outcome;
    std::vector<std::uint32_t> bets;
    std::vector<std::uint32_t> wins;
    std::vector<std::uint32_t> losses;

    std::size_t size() const noexcept { return capital.size(); }
};

// Normal(mean, sd_fraction * mean) endowments; draws below 0.01 * mean are
// redrawn so every capital starts positive.
CapitalLedger init_capitals(std::size_t n, double mean, double sd_fraction, Rng& rng);

double bet_amount(const CapitalLedger& ledger, std::size_t agent, const BetPolicy& policy);

// Applies one settled bet: capital moves by +/- bet, outcome and counters update.
void settle(CapitalLedger& ledger, std::size_t agent, double bet, bool won);

}  // namespace fquake
