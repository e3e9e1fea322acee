#include "pngd/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace pngd {

namespace {

GaussRule compute_rule(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton on P_n in long double.
        long double z = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
        long double pp = 0;
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                long double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (z * p1 - p0) / (z * z - 1);
            long double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-19L) break;
        }
        long double p0 = 1, p1 = z;
        for (int k = 2; k <= n; ++k) {
            long double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        pp = n * (z * p1 - p0) / (z * z - 1);
        const long double w = 2 / ((1 - z * z) * pp * pp);
        r.x[i] = static_cast<double>(-z);
        r.x[n - 1 - i] = static_cast<double>(z);
        r.w[i] = r.w[n - 1 - i] = static_cast<double>(w);
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return r;
}

}  // namespace

const GaussRule& gauss_legendre_rule(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre_rule: n must be positive");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussRule>(compute_rule(n));
    return *slot;
}

QuadratureGrid QuadratureGrid::gauss_legendre(double lower, double upper, int nodes_per_panel, int panels) {
    if (!(upper > lower) || panels < 1)
        throw std::invalid_argument("QuadratureGrid: need upper > lower and panels >= 1");
    std::vector<double> br(panels + 1);
    for (int p = 0; p <= panels; ++p) br[p] = lower + (upper - lower) * p / panels;
    br.back() = upper;
    return from_breakpoints(std::move(br), nodes_per_panel);
}

QuadratureGrid QuadratureGrid::from_breakpoints(std::vector<double> breakpoints, int nodes_per_panel) {
    if (breakpoints.size() < 2) throw std::invalid_argument("QuadratureGrid: need at least two breakpoints");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1]))
            throw std::invalid_argument("QuadratureGrid: breakpoints must increase strictly");
    const GaussRule& rule = gauss_legendre_rule(nodes_per_panel);
    QuadratureGrid g;
    g.nodes_per_panel = nodes_per_panel;
    g.nodes.reserve((breakpoints.size() - 1) * nodes_per_panel);
    g.weights.reserve(g.nodes.capacity());
    for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
        const double c = 0.5 * (breakpoints[p] + breakpoints[p + 1]);
        const double h = 0.5 * (breakpoints[p + 1] - breakpoints[p]);
        for (int k = 0; k < nodes_per_panel; ++k) {
            g.nodes.push_back(c + h * rule.x[k]);
            g.weights.push_back(h * rule.w[k]);
        }
    }
    g.breakpoints = std::move(breakpoints);
    return g;
}

QuadratureGrid QuadratureGrid::doubled() const { return from_breakpoints(breakpoints, 2 * nodes_per_panel); }

}  // namespace pngd
