#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pngd/multilayer.hpp"
#include "pngd/stats.hpp"

namespace pngd {

namespace {

struct Step {
    int pos;
    bool up;
};

std::vector<Step> merged(const DiscreteLine& l) {
    std::vector<Step> s;
    s.reserve(l.ups.size() + l.downs.size());
    for (int u : l.ups) s.push_back({u, true});
    for (int d : l.downs) s.push_back({d, false});
    std::sort(s.begin(), s.end(), [](const Step& a, const Step& b) { return a.pos < b.pos; });
    return s;
}

int line_height(const DiscreteLine& l, int X) {
    const auto u = std::upper_bound(l.ups.begin(), l.ups.end(), X) - l.ups.begin();
    const auto d = std::lower_bound(l.downs.begin(), l.downs.end(), X) - l.downs.begin();
    return l.base_level + static_cast<int>(u - d);
}

[[noreturn]] void uncovered(const DiscreteEnsemble& e, int level, const char* what) {
    throw std::logic_error("discrete block placement: " + std::string(what) + " at level " + std::to_string(level) +
                           ", tau " + std::to_string(e.tau));
}

}  // namespace

int DiscreteEnsemble::height(int level, int X) const {
    if (level > 0) throw std::invalid_argument("DiscreteEnsemble::height: level must be <= 0");
    const auto k = static_cast<std::size_t>(-level);
    return k < lines.size() ? line_height(lines[k], X) : level;
}

int DiscreteEnsemble::total_up_steps() const {
    int n = 0;
    for (const auto& l : lines) n += static_cast<int>(l.ups.size());
    return n;
}

void DiscreteEnsemble::validate() const {
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const DiscreteLine& l = lines[k];
        if (l.base_level != -static_cast<int>(k)) throw std::logic_error("DiscreteEnsemble: base levels not consecutive");
        if (l.ups.empty() || l.ups.size() != l.downs.size()) throw std::logic_error("DiscreteEnsemble: bad step counts");
        const auto s = merged(l);
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i].pos % 2 == 0) throw std::logic_error("DiscreteEnsemble: step off the half-integer grid");
            if (std::abs(s[i].pos) > 2 * tau) throw std::logic_error("DiscreteEnsemble: step outside [-tau, tau]");
            if (i > 0 && (s[i].pos - s[i - 1].pos) % 4 != 2) throw std::logic_error("DiscreteEnsemble: even step distance");
        }
        for (std::size_t j = 0; j < l.ups.size(); ++j)
            if (l.downs[j] < l.ups[j]) throw std::logic_error("DiscreteEnsemble: line dips below base level");
    }
    for (std::size_t k = 0; k + 1 < lines.size(); ++k)
        for (int X = -2 * tau - 1; X <= 2 * tau + 1; ++X)
            if (line_height(lines[k + 1], X) >= line_height(lines[k], X))
                throw std::logic_error("DiscreteEnsemble: ordering violated at level " + std::to_string(-static_cast<int>(k)));
}

DiscreteEnsemble discrete_flat(double delta, double q) {
    if (!(delta > 0)) throw std::invalid_argument("discrete model: delta must be positive");
    if (!(q > 0 && q < 1)) throw std::invalid_argument("discrete model: q must lie in (0,1)");
    DiscreteEnsemble e;
    e.delta = delta;
    e.q = q;
    return e;
}

void discrete_deterministic_step(DiscreteEnsemble& e) {
    for (DiscreteLine& l : e.lines) {
        const auto s = merged(l);
        std::vector<char> gone(s.size(), 0);
        for (std::size_t i = 0; i + 1 < s.size(); ++i)
            if (!s[i].up && s[i + 1].up && s[i + 1].pos == s[i].pos + 2) {
                gone[i] = gone[i + 1] = 1;
                ++i;
            }
        l.ups.clear();
        l.downs.clear();
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (gone[i]) continue;
            if (s[i].up) l.ups.push_back(s[i].pos - 2);
            else l.downs.push_back(s[i].pos + 2);
        }
    }
    std::erase_if(e.lines, [](const DiscreteLine& l) { return l.ups.empty(); });
}

std::vector<int> discrete_block_grid(const DiscreteEnsemble& e, int level) {
    if (level > 0) throw std::invalid_argument("discrete_block_grid: level must be <= 0");
    const auto k = static_cast<std::size_t>(-level);
    const int right = 2 * (e.tau + 1);
    int anchor;
    if (k == 0) {
        anchor = -right;
    } else {
        if (k > e.lines.size()) return {};  // flat below a flat line: no room
        anchor = e.lines[k - 1].ups.front() + 1;
    }
    std::vector<int> cuts{anchor};
    if (k < e.lines.size())
        for (const Step& s : merged(e.lines[k])) {
            cuts.push_back(s.pos - 1);
            cuts.push_back(s.pos + 1);
        }
    cuts.push_back(right);

    std::vector<int> blocks;
    for (std::size_t p = 0; p + 1 < cuts.size(); p += 2) {
        const int a = cuts[p], b = cuts[p + 1];
        const bool last = p + 2 == cuts.size();
        if (b < a) uncovered(e, level, "anchor right of the first step");
        if ((b - a) % 4 != 0 && !(last && k > 0)) uncovered(e, level, "piece of odd length");
        for (int B = a; B + 4 <= b; B += 4) blocks.push_back(B);
    }
    return blocks;
}

std::vector<DiscreteBlock> discrete_eligible_blocks(const DiscreteEnsemble& e) {
    std::vector<DiscreteBlock> out;
    for (std::size_t k = 0; k <= e.lines.size(); ++k) {
        const int level = -static_cast<int>(k);
        for (int B : discrete_block_grid(e, level)) {
            bool ok = true;
            if (k > 0)
                for (int X = B; X <= B + 4 && ok; X += 2) ok = e.height(level + 1, X) - e.height(level, X) >= 2;
            if (ok) out.push_back({level, B});
        }
    }
    return out;
}

void discrete_nucleate(DiscreteEnsemble& e, const DiscreteBlock& b) {
    const auto k = static_cast<std::size_t>(-b.level);
    if (k > e.lines.size()) throw std::logic_error("discrete_nucleate: no line above the block");
    if (k == e.lines.size()) e.lines.push_back({b.level, {}, {}});
    DiscreteLine& l = e.lines[k];
    l.ups.insert(std::upper_bound(l.ups.begin(), l.ups.end(), b.left + 1), b.left + 1);
    l.downs.insert(std::upper_bound(l.downs.begin(), l.downs.end(), b.left + 3), b.left + 3);
}

DiscreteEnsemble discrete_evolve(int tau, double delta, double q, Rng& rng) {
    if (tau < 0) throw std::invalid_argument("discrete_evolve: tau must be >= 0");
    DiscreteEnsemble e = discrete_flat(delta, q);
    for (int round = 0; round < tau; ++round) {
        discrete_deterministic_step(e);
        // all blocks are read off the same configuration before any nucleation
        const auto blocks = discrete_eligible_blocks(e);
        for (const DiscreteBlock& b : blocks)
            if (rng.uniform() < q) discrete_nucleate(e, b);
        ++e.tau;
    }
    e.validate();
    return e;
}

DiscreteEnsemble discrete_evolve(int tau, double delta, double q, std::uint64_t seed) {
    Rng rng(seed);
    return discrete_evolve(tau, delta, q, rng);
}

double discrete_log_partition(int tau, double q) {
    return -0.5 * static_cast<double>(tau) * (tau + 1.0) * std::log1p(-q);
}

DiscreteConvergenceReport discrete_to_continuum_check(double t, std::span<const double> deltas, std::uint64_t seed,
                                                      int replicas, int reference_replicas) {
    if (!(t >= 0)) throw std::invalid_argument("discrete_to_continuum_check: t must be >= 0");
    if (replicas < 1 || reference_replicas < 1) throw std::invalid_argument("discrete_to_continuum_check: need replicas");
    DiscreteConvergenceReport rep;
    rep.t = t;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double delta = deltas[i];
        DiscreteConvergenceRow row;
        row.delta = delta;
        row.q = 4.0 * delta * delta;
        if (!(delta > 0) || !(row.q < 1)) throw std::invalid_argument("discrete_to_continuum_check: need 0 < 4 delta^2 < 1");
        row.tau = static_cast<int>(std::floor(t / delta + 1e-9));
        const double tc = row.tau * delta;

        std::vector<double> disc(static_cast<std::size_t>(replicas)), cont(static_cast<std::size_t>(reference_replicas));
        const std::uint64_t base = seed + 0x9e3779b97f4a7c15ULL * (2 * i + 1);
        for (int r = 0; r < replicas; ++r) {
            Rng rng = Rng::for_replica(base, static_cast<std::uint64_t>(r));
            disc[static_cast<std::size_t>(r)] = discrete_evolve(row.tau, delta, row.q, rng).height(0, 0);
        }
        for (int r = 0; r < reference_replicas; ++r) {
            if (tc <= 0) continue;
            Rng rng = Rng::for_replica(base + 1, static_cast<std::uint64_t>(r));
            cont[static_cast<std::size_t>(r)] = height_at(simulate_droplet(sample_poisson_triangle(tc, rng)), 0.0);
        }
        row.ks_distance = stats::ks_two_sample(disc, cont);
        rep.rows.push_back(row);
    }
    rep.monotone = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        rep.monotone = rep.monotone && rep.rows[i].ks_distance <= rep.rows[i - 1].ks_distance;
    return rep;
}

}  // namespace pngd
