#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pngd/rng.hpp"
#include "pngd/sim.hpp"

namespace pngd {

// lines[k] is the line with base level -k. Only non-flat lines are stored;
// every line below the last stored one is flat.
struct LineEnsemble {
    std::vector<HeightLine> lines;
    double horizon = 0.0;

    int height(int level, double x) const;
    std::size_t nonflat_lines() const { return lines.size(); }
    std::int64_t total_up_steps() const;
    void validate() const;  // throws std::logic_error on an ordering violation
    friend bool operator==(const LineEnsemble&, const LineEnsemble&) = default;
};

LineEnsemble rsk_evolve(const PointSet& points);
LineEnsemble gw_evolve(double t, Rng& rng);
LineEnsemble gw_evolve(double t, std::uint64_t seed);

// Step coordinates (y^{l,+}_j, y^{l,-}_j) per line, j-th up-step paired with j-th down-step.
struct StepCoordinates {
    std::vector<std::vector<std::pair<double, double>>> lines;
    double horizon = 0.0;
};
StepCoordinates step_map(const LineEnsemble& e);
LineEnsemble step_map_inverse(const StepCoordinates& s);

// Discrete-time model. Positions are stored in half-delta units, so a step
// at (m + 1/2) delta is the odd integer 2m + 1.
struct DiscreteLine {
    int base_level = 0;
    std::vector<int> ups;
    std::vector<int> downs;
    friend auto operator<=>(const DiscreteLine&, const DiscreteLine&) = default;
};

struct DiscreteEnsemble {
    std::vector<DiscreteLine> lines;  // non-flat lines, lines[k] at level -k
    int tau = 0;
    double delta = 1.0;
    double q = 0.5;

    int height(int level, int X) const;  // X in half-delta units
    int total_up_steps() const;
    void validate() const;  // odd distances, support, ordering
};

// A 2-delta block [B, B+4] (half-delta units) of the line at the given level.
struct DiscreteBlock {
    int level = 0;
    int left = 0;
    friend bool operator==(const DiscreteBlock&, const DiscreteBlock&) = default;
};

DiscreteEnsemble discrete_flat(double delta, double q);
// (i): pairs (down at P, up at P+2) annihilate, then ups move left and downs right by delta.
void discrete_deterministic_step(DiscreteEnsemble& e);
// (ii) bookkeeping on the configuration after (i), for the update tau -> tau + 1
// (e.tau still holds the old time). discrete_block_grid tiles the level into
// 2-delta blocks from its anchors: -(tau+1) delta for the top line, half a delta
// right of each step, and (y + 1/2) delta below the line above's first up-step y.
// A piece of odd length in delta units is a configuration the rules do not
// cover and throws std::logic_error.
std::vector<int> discrete_block_grid(const DiscreteEnsemble& e, int level);
// Grid blocks where the gap to the line above is >= 2 throughout, all levels.
std::vector<DiscreteBlock> discrete_eligible_blocks(const DiscreteEnsemble& e);
void discrete_nucleate(DiscreteEnsemble& e, const DiscreteBlock& b);

DiscreteEnsemble discrete_evolve(int tau, double delta, double q, Rng& rng);
DiscreteEnsemble discrete_evolve(int tau, double delta, double q, std::uint64_t seed);

double discrete_log_partition(int tau, double q);  // log Z_d(tau)

struct DiscreteConvergenceRow {
    double delta = 0.0;
    int tau = 0;
    double q = 0.0;
    double ks_distance = 0.0;
};
struct DiscreteConvergenceReport {
    double t = 0.0;
    std::vector<DiscreteConvergenceRow> rows;
    bool monotone = false;
};
// KS distance between h_0(0) of the discrete model at tau = floor(t/delta),
// q = 4 delta^2 and continuum droplet samples at time tau*delta.
DiscreteConvergenceReport discrete_to_continuum_check(double t, std::span<const double> deltas, std::uint64_t seed,
                                                      int replicas, int reference_replicas);

}  // namespace pngd
