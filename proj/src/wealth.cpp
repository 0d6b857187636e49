#include "fquake/wealth.hpp"

#include <cassert>

#include "fquake/error.hpp"

namespace fquake {

CapitalLedger init_capitals(std::size_t n, double mean, double sd_fraction, Rng& rng) {
    if (!(mean > 0.0)) throw InvalidConfig("mean capital must be positive");
    if (!(sd_fraction >= 0.0)) throw InvalidConfig("capital spread must be non-negative");

    CapitalLedger ledger;
    ledger.capital.resize(n, mean);
    if (sd_fraction > 0.0) {
        std::normal_distribution<double> normal(mean, sd_fraction * mean);
        const double floor = 0.01 * mean;
        for (auto& c : ledger.capital) {
            do {
                c = normal(rng);
            } while (c < floor);
        }
    }
    ledger.initial = ledger.capital;
    ledger.last_outcome.assign(n, Outcome::None);
    ledger.bets.assign(n, 0);
    ledger.wins.assign(n, 0);
    ledger.losses.assign(n, 0);
    return ledger;
}

double bet_amount(const CapitalLedger& ledger, std::size_t agent, const BetPolicy& policy) {
    return policy.fraction(ledger.last_outcome.at(agent)) * ledger.capital.at(agent);
}

void settle(CapitalLedger& ledger, std::size_t agent, double bet, bool won) {
    double& c = ledger.capital.at(agent);
    if (won) {
        c += bet;
        ledger.last_outcome[agent] = Outcome::Win;
        ++ledger.wins[agent];
    } else {
        c -= bet;
        ledger.last_outcome[agent] = Outcome::Loss;
        ++ledger.losses[agent];
    }
    ++ledger.bets[agent];
    assert(c > 0.0);
}

}  // namespace fquake
