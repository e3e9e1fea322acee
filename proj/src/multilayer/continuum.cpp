#include <algorithm>
#include <stdexcept>
#include <string>

#include "pngd/multilayer.hpp"

namespace pngd {

int LineEnsemble::height(int level, double x) const {
    const std::size_t k = static_cast<std::size_t>(-level);
    if (level > 0) throw std::invalid_argument("LineEnsemble::height: level must be <= 0");
    if (k >= lines.size()) return level;
    return height_at(lines[k], x);
}

std::int64_t LineEnsemble::total_up_steps() const {
    std::int64_t n = 0;
    for (const auto& l : lines) n += static_cast<std::int64_t>(l.up_steps.size());
    return n;
}

void LineEnsemble::validate() const {
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const HeightLine& l = lines[k];
        if (l.base_level != -static_cast<int>(k)) throw std::logic_error("LineEnsemble: base levels not consecutive");
        if (l.flat()) throw std::logic_error("LineEnsemble: stored line is flat");
        l.validate();
    }
    for (std::size_t k = 0; k + 1 < lines.size(); ++k) {
        const HeightLine& hi = lines[k];
        const HeightLine& lo = lines[k + 1];
        std::vector<double> pts;
        for (const auto* v : {&hi.up_steps, &hi.down_steps, &lo.up_steps, &lo.down_steps})
            pts.insert(pts.end(), v->begin(), v->end());
        std::sort(pts.begin(), pts.end());
        std::vector<double> probe = pts;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) probe.push_back(0.5 * (pts[i] + pts[i + 1]));
        for (double x : probe)
            if (height_at(lo, x) >= height_at(hi, x))
                throw std::logic_error("LineEnsemble: ordering violated between levels " + std::to_string(-static_cast<int>(k)) +
                                       " and " + std::to_string(-static_cast<int>(k) - 1) + " at x=" + std::to_string(x));
    }
}

LineEnsemble rsk_evolve(const PointSet& points) {
    LineEnsemble e;
    e.horizon = points.horizon;
    std::vector<LightConePoint> events = points.points;
    sort_by_time(events);
    int level = 0;
    while (!events.empty()) {
        LineRun run = evolve_line(level, points.horizon, events);
        e.lines.push_back(std::move(run.line));
        events = std::move(run.annihilations);
        --level;
    }
    e.validate();
    return e;
}

LineEnsemble gw_evolve(double t, Rng& rng) {
    if (!(t > 0)) throw std::invalid_argument("gw_evolve: t must be positive");
    LineEnsemble e;
    e.horizon = t;
    LineRun above;
    for (int level = 0;; --level) {
        PointSet ps = sample_poisson_triangle(t, rng);
        std::vector<LightConePoint> ev = std::move(ps.points);
        sort_by_time(ev);
        LineRun run;
        if (level == 0) {
            run = evolve_line(0, t, ev, {}, true);
        } else {
            // thinning: keep a proposal only where the gap to the line above is >= 2
            const LineRun& up = above;
            run = evolve_line(level, t, ev,
                              [&up](const LightConePoint& p, int own) {
                                  return up.height_at_remaining(p.x(), p.remaining()) - own >= 2;
                              },
                              true);
        }
        if (run.accepted == 0) break;
        e.lines.push_back(run.line);
        above = std::move(run);
    }
    e.validate();
    return e;
}

LineEnsemble gw_evolve(double t, std::uint64_t seed) {
    Rng rng(seed);
    return gw_evolve(t, rng);
}

StepCoordinates step_map(const LineEnsemble& e) {
    StepCoordinates s;
    s.horizon = e.horizon;
    for (const HeightLine& l : e.lines) {
        auto& out = s.lines.emplace_back();
        for (std::size_t j = 0; j < l.up_steps.size(); ++j) out.emplace_back(l.up_steps[j], l.down_steps[j]);
    }
    return s;
}

LineEnsemble step_map_inverse(const StepCoordinates& s) {
    LineEnsemble e;
    e.horizon = s.horizon;
    int level = 0;
    for (const auto& coords : s.lines) {
        HeightLine l;
        l.base_level = level--;
        l.horizon = s.horizon;
        for (auto [u, d] : coords) {
            l.up_steps.push_back(u);
            l.down_steps.push_back(d);
        }
        e.lines.push_back(std::move(l));
    }
    e.validate();
    return e;
}

}  // namespace pngd
