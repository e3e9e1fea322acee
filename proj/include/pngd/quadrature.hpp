#pragma once

#include <cstddef>
#include <vector>

namespace pngd {

// Gauss-Legendre rule on [-1, 1]. Cached per order; the returned reference stays valid.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};
const GaussRule& gauss_legendre_rule(int n);

// Composite Gauss-Legendre rule on (lower, upper].
struct QuadratureGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> breakpoints;
    int nodes_per_panel = 0;

    static QuadratureGrid gauss_legendre(double lower, double upper, int nodes_per_panel, int panels = 1);
    static QuadratureGrid from_breakpoints(std::vector<double> breakpoints, int nodes_per_panel);

    std::size_t size() const { return nodes.size(); }
    double lower() const { return breakpoints.front(); }
    double upper() const { return breakpoints.back(); }
    double length() const { return upper() - lower(); }
    // Same panels, twice the nodes per panel.
    QuadratureGrid doubled() const;
};

}  // namespace pngd
