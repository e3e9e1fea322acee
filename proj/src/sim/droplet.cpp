#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pngd/sim.hpp"

namespace pngd {

void PointSet::validate() const {
    if (!(horizon >= 0)) throw std::invalid_argument("PointSet: horizon must be nonnegative");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!(p.yp > -horizon && p.yp < horizon) || !(p.yp < p.ym) || !(p.ym < horizon))
            throw std::invalid_argument("PointSet: point " + std::to_string(i) + " outside the light-cone triangle");
        if (i > 0 && points[i - 1].yp > p.yp) throw std::invalid_argument("PointSet: points not sorted by y+");
    }
}

PointSet PointSet::from_spacetime(double t, std::span<const std::pair<double, double>> xt) {
    PointSet ps;
    ps.horizon = t;
    ps.points.reserve(xt.size());
    for (auto [x, tp] : xt) {
        if (!(std::fabs(x) < tp && tp <= t)) throw std::invalid_argument("PointSet: (x', t') outside |x'| < t' <= t");
        ps.points.push_back({x - (t - tp), x + (t - tp)});
    }
    std::sort(ps.points.begin(), ps.points.end(), [](const auto& a, const auto& b) {
        return a.yp < b.yp || (a.yp == b.yp && a.ym < b.ym);
    });
    return ps;
}

void HeightLine::validate() const {
    if (up_steps.size() != down_steps.size())
        throw std::logic_error("HeightLine: up/down step counts differ");
    if (!std::is_sorted(up_steps.begin(), up_steps.end()) || !std::is_sorted(down_steps.begin(), down_steps.end()))
        throw std::logic_error("HeightLine: steps not sorted");
    for (double v : up_steps)
        if (!(std::fabs(v) < horizon)) throw std::logic_error("HeightLine: up-step outside (-t, t)");
    for (double v : down_steps)
        if (!(std::fabs(v) < horizon)) throw std::logic_error("HeightLine: down-step outside (-t, t)");
    // never below base: the k-th down-step must come after the k-th up-step
    for (std::size_t k = 0; k < up_steps.size(); ++k)
        if (down_steps[k] < up_steps[k]) throw std::logic_error("HeightLine: profile dips below base level");
}

PointSet sample_poisson_triangle(double t, Rng& rng) {
    if (!(t > 0)) throw std::invalid_argument("sample_poisson_triangle: t must be positive");
    PointSet ps;
    ps.horizon = t;
    const std::int64_t n = rng.poisson(2.0 * t * t);
    ps.points.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        // density of t' proportional to t' on (0, t]; x' uniform on (-t', t')
        const double tp = t * std::sqrt(rng.uniform_open());
        const double x = tp * (2.0 * rng.uniform_open() - 1.0);
        ps.points.push_back({x - (t - tp), x + (t - tp)});
    }
    std::sort(ps.points.begin(), ps.points.end(), [](const auto& a, const auto& b) {
        return a.yp < b.yp || (a.yp == b.yp && a.ym < b.ym);
    });
    return ps;
}

PointSet sample_poisson_triangle(double t, std::uint64_t seed) {
    Rng rng(seed);
    return sample_poisson_triangle(t, rng);
}

void sort_by_time(std::vector<LightConePoint>& events) {
    std::sort(events.begin(), events.end(), [](const LightConePoint& a, const LightConePoint& b) {
        const double ra = a.ym - a.yp, rb = b.ym - b.yp;
        if (ra != rb) return ra > rb;
        return a.yp < b.yp || (a.yp == b.yp && a.ym < b.ym);
    });
}

namespace {

struct Active {
    double label;
    bool up;
    int track;
    double pos(double r) const { return up ? label + r : label - r; }
};

}  // namespace

int LineRun::height_at_remaining(double x, double r) const {
    int h = line.base_level;
    for (const StepTrack& s : tracks) {
        if (!(s.born > r) || s.died > r) continue;
        if (s.up) h += (s.label + r <= x);
        else h -= (s.label - r < x);
    }
    return h;
}

LineRun evolve_line(int base_level, double horizon, std::span<const LightConePoint> events, const AcceptFn& accept,
                    bool record_tracks) {
    LineRun run;
    run.line.base_level = base_level;
    run.line.horizon = horizon;
    std::vector<Active> act;
    std::vector<char> kill;

    // Remove every adjacent (down, up) pair that meets at remaining time >= r_stop.
    auto resolve = [&](double r_stop) {
        for (;;) {
            bool any = false;
            kill.assign(act.size(), 0);
            for (std::size_t i = 0; i + 1 < act.size(); ++i) {
                if (act[i].up || !act[i + 1].up) continue;
                const double rs = 0.5 * (act[i].label - act[i + 1].label);
                if (rs < r_stop) continue;
                run.annihilations.push_back({act[i + 1].label, act[i].label});
                if (record_tracks) {
                    run.tracks[act[i].track].died = rs;
                    run.tracks[act[i + 1].track].died = rs;
                }
                kill[i] = kill[i + 1] = 1;
                any = true;
                ++i;
            }
            if (!any) return;
            std::size_t w = 0;
            for (std::size_t i = 0; i < act.size(); ++i)
                if (!kill[i]) act[w++] = act[i];
            act.resize(w);
        }
    };

    double last_r = horizon;
    for (const LightConePoint& p : events) {
        const double r = p.remaining();
        if (r > last_r) throw std::invalid_argument("evolve_line: events not in time order");
        last_r = r;
        resolve(r);
        const double x = p.x();
        if (accept) {
            int h = base_level;
            for (const Active& a : act) {
                if (a.up) h += (a.pos(r) <= x);
                else h -= (a.pos(r) < x);
            }
            if (!accept(p, h)) continue;
        }
        ++run.accepted;
        const auto at = std::find_if(act.begin(), act.end(), [&](const Active& a) { return a.pos(r) > x; });
        int tu = -1, td = -1;
        if (record_tracks) {
            tu = static_cast<int>(run.tracks.size());
            run.tracks.push_back({p.yp, true, r, -1.0});
            td = tu + 1;
            run.tracks.push_back({p.ym, false, r, -1.0});
        }
        const auto idx = at - act.begin();
        act.insert(act.begin() + idx, {{p.yp, true, tu}, {p.ym, false, td}});
    }
    resolve(0.0);
    sort_by_time(run.annihilations);
    for (const Active& a : act) (a.up ? run.line.up_steps : run.line.down_steps).push_back(a.label);
    std::sort(run.line.up_steps.begin(), run.line.up_steps.end());
    std::sort(run.line.down_steps.begin(), run.line.down_steps.end());
    return run;
}

HeightLine simulate_droplet(const PointSet& points) {
    std::vector<LightConePoint> ev = points.points;
    sort_by_time(ev);
    return evolve_line(0, points.horizon, ev).line;
}

std::int64_t lis_length_at(const PointSet& points, double x) {
    // Chains through the backward cone of (x, t): y+ increasing, y- decreasing.
    std::vector<LightConePoint> in;
    for (const auto& p : points.points)
        if (p.yp <= x && p.ym > x) in.push_back(p);
    std::sort(in.begin(), in.end(), [](const auto& a, const auto& b) {
        return a.yp < b.yp || (a.yp == b.yp && a.ym < b.ym);
    });
    std::vector<double> tails;  // tails of -y- for strictly increasing runs
    for (const auto& p : in) {
        const double v = -p.ym;
        auto it = std::lower_bound(tails.begin(), tails.end(), v);
        if (it == tails.end()) tails.push_back(v);
        else *it = v;
    }
    return static_cast<std::int64_t>(tails.size());
}

std::int64_t lis_length(const PointSet& points) { return lis_length_at(points, 0.0); }

int height_at(const HeightLine& h, double x) {
    const auto ups = std::upper_bound(h.up_steps.begin(), h.up_steps.end(), x) - h.up_steps.begin();
    const auto downs = std::lower_bound(h.down_steps.begin(), h.down_steps.end(), x) - h.down_steps.begin();
    return h.base_level + static_cast<int>(ups - downs);
}

double scaled_height(const HeightLine& h, double y) {
    const double t = h.horizon;
    const double x = y * std::cbrt(t * t);
    if (!(std::fabs(x) < t)) throw std::out_of_range("scaled_height: rescaled position outside (-t, t)");
    return (height_at(h, x) - 2.0 * t) / std::cbrt(t);
}

}  // namespace pngd
