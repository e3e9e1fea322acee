#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pngd/rng.hpp"

namespace pngd {

// A nucleation event in light-cone coordinates relative to the horizon t:
// y+ = x' - (t - t'), y- = x' + (t - t').
struct LightConePoint {
    double yp = 0.0;
    double ym = 0.0;

    double x() const { return 0.5 * (yp + ym); }
    double remaining() const { return 0.5 * (ym - yp); }  // t - t'
    friend bool operator==(const LightConePoint&, const LightConePoint&) = default;
};

struct PointSet {
    std::vector<LightConePoint> points;  // sorted by y+ ascending
    double horizon = 0.0;
    double intensity = 2.0;

    void validate() const;  // throws std::invalid_argument
    // Build from space-time coordinates (x', t') with |x'| < t' <= t.
    static PointSet from_spacetime(double t, std::span<const std::pair<double, double>> xt);
};

struct HeightLine {
    int base_level = 0;
    std::vector<double> up_steps;    // sorted
    std::vector<double> down_steps;  // sorted
    double horizon = 0.0;

    bool flat() const { return up_steps.empty() && down_steps.empty(); }
    void validate() const;
    friend bool operator==(const HeightLine&, const HeightLine&) = default;
};

PointSet sample_poisson_triangle(double t, Rng& rng);
PointSet sample_poisson_triangle(double t, std::uint64_t seed);

HeightLine simulate_droplet(const PointSet& points);
std::int64_t lis_length(const PointSet& points);
// Longest chain through the backward light cone of (x, t); equals h(x, t) pathwise.
std::int64_t lis_length_at(const PointSet& points, double x);
int height_at(const HeightLine& h, double x);
double scaled_height(const HeightLine& h, double y);

// Single-line PNG engine shared with the multi-layer dynamics. Steps are
// labelled by their final light-cone coordinate: an up-step born at event p
// sits at p.yp + r at remaining time r, a down-step at p.ym - r.
struct StepTrack {
    double label = 0.0;
    bool up = true;
    double born = 0.0;   // remaining time at nucleation
    double died = -1.0;  // remaining time at annihilation, -1 if alive at t
};

struct LineRun {
    HeightLine line;
    std::vector<LightConePoint> annihilations;  // in time order
    std::vector<StepTrack> tracks;
    std::int64_t accepted = 0;

    // h(x) at remaining time r, from the recorded trajectories.
    int height_at_remaining(double x, double r) const;
};

// accept(event, own height at the event just before it) decides a nucleation.
using AcceptFn = std::function<bool(const LightConePoint&, int)>;

// Events must be sorted in time order (remaining time decreasing).
LineRun evolve_line(int base_level, double horizon, std::span<const LightConePoint> events,
                    const AcceptFn& accept = {}, bool record_tracks = false);

// Sort by time of occurrence, ties by (y+, y-).
void sort_by_time(std::vector<LightConePoint>& events);

}  // namespace pngd
