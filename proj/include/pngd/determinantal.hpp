#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pngd/quadrature.hpp"

namespace pngd {

// A numerical value could not be certified to the requested tolerance.
class CertificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Discrete Bessel kernel B_t(i,j) = sum_{l<=0} J_{i-l}(2t) J_{j-l}(2t).

// Bound on sum_{m>=0} |J_{a+m}(2t) J_{b+m}(2t)| from |J_n(2t)| <= t^n/n!;
// +inf when a or b is below t + 1 (bound not applicable yet).
double bessel_product_tail_bound(double t, int a, int b);

class DiscreteBesselKernel {
public:
    explicit DiscreteBesselKernel(double t);

    double t() const { return t_; }
    // Closed form off the diagonal, order-derivative form on it. Entries near
    // the diagonal fall back to the series when the closed form loses digits.
    double operator()(int i, int j) const;
    // Series (c.d) truncated once the tail bound drops below tol.
    double series(int i, int j, double tol = 1e-16) const;
    double diagonal_order_derivative(int i, double* error_estimate = nullptr) const;
    double j_value(int n) const;  // J_n(2t), cached

private:
    void ensure(int lo, int hi) const;
    double t_;
    mutable int lo_ = 0, hi_ = -1;
    mutable std::vector<double> jv_;
};

double discrete_bessel(double t, int i, int j);

struct KernelMatrix {
    Eigen::MatrixXd entries;
    int index_lo = 0;           // lattice window [index_lo, index_lo + rows)
    QuadratureGrid grid;        // continuum case
};
KernelMatrix discrete_bessel_matrix(const DiscreteBesselKernel& b, int lo, int hi);

struct HeightCdf {
    double value = 0.0;  // P(h(0,t) < n)
    int window = 0;      // determinant on [n, n + window)
    double tail_bound = 0.0;
};
// det(1 - P_n B_t) on a window wide enough that the neglected diagonal mass is < tol.
HeightCdf height_cdf_exact(double t, int n, double tol = 1e-12, int max_window = 20000);
// P(h(0,t) < n) for n = n_lo .. n_hi.
std::vector<double> height_cdf_table(double t, int n_lo, int n_hi, double tol = 1e-12);

// Space-time extended kernel B_t(j,x;j',x'); |x|,|x'| < t.
double extended_bessel(double t, int j, double x, int j2, double x2, double tol = 1e-15);

// ---------------------------------------------------------------------------
// Airy kernel and Tracy-Widom.

double airy_kernel(double u, double v);
double airy_density(double u);
// Extended Airy kernel K(u,y;u',y'); equals airy_kernel at y = y'.
double extended_airy_kernel(double u, double y, double u2, double y2);

struct FredholmResult {
    double value = 0.0;
    double refined = 0.0;  // same determinant with doubled nodes
    double error_estimate = 0.0;
    std::size_t nodes = 0;
};

// det(1 - W^{1/2} K W^{1/2}) on a grid covering (a, a+L].
double tracy_widom_f2(double a, const QuadratureGrid& grid);
// L = 16, `nodes` Gauss-Legendre points, certified against 2*nodes.
FredholmResult tracy_widom_f2_certified(double a, double tol = 1e-10, int nodes = 40);
double tracy_widom_f2(double a);

struct F2Moments {
    double mean = 0.0;
    double second = 0.0;
    double variance = 0.0;
};
F2Moments tracy_widom_moments();

// Hastings-McLeod solution from x0 = 8 with Ai data; F2 = exp(-int (x-a) q^2).
struct PainleveValue {
    double q = 0.0;
    double qp = 0.0;
    double f2 = 0.0;
};
PainleveValue painleve_ii(double a);
double painleve_f2(double a);

// ---------------------------------------------------------------------------
// Two-time Airy law.

struct TwoPointConfig {
    double upper = 8.0;            // kernels truncated at u = upper
    double lower = -8.0;           // lowest threshold
    int nodes_per_panel = 8;
    double panel_scale = 1.6;      // panel width ~ panel_scale * sqrt(y), clamped to [0.2, 1]
    double heat_route_below = 0.5; // K_ab via e^{-yH}K - e^{-yH} for y below this
    double lambda_cutoff = 39.0;   // spectral K_ab: lambda up to lambda_cutoff / y
    int lambda_nodes_per_unit = 24;
    int refine = 1;                // multiplies nodes_per_panel (node doubling)
};

// Blocks [[P_a K P_a, P_a K_ab P_b], [P_b K_ba P_a, P_b K P_b]] in symmetrised weighting.
struct ExtendedAiryBlocks {
    Eigen::MatrixXd kaa, kab, kba, kbb;
    QuadratureGrid grid_a, grid_b;
};

class TwoPointEngine {
public:
    TwoPointEngine(double y, TwoPointConfig cfg = {});
    ~TwoPointEngine();
    TwoPointEngine(TwoPointEngine&&) noexcept;

    double y() const { return y_; }
    const TwoPointConfig& config() const { return cfg_; }
    bool heat_route() const { return y_ < cfg_.heat_route_below; }

    ExtendedAiryBlocks blocks(double a, double b) const;
    double joint_cdf(double a, double b) const;  // P(A(0) <= a, A(y) <= b)

private:
    struct Impl;
    double y_;
    TwoPointConfig cfg_;
    std::unique_ptr<Impl> impl_;
};

// Pointwise K_ab = e^{-yH}(K-1) and K_ba = e^{yH}K for y > 0.
double airy_k_ab(double u, double v, double y);
double airy_k_ba(double u, double v, double y);

double joint_cdf(double a, double b, double y, const TwoPointConfig& cfg = {});

struct TwoPointG {
    double g = 0.0;
    double a2 = 0.0;
    double covariance = 0.0;
    std::string method;
    double certification_delta = 0.0;  // change of a spot-checked determinant under refinement
};
struct TwoPointGConfig {
    TwoPointConfig engine;
    double box_lo = -8.0, box_hi = 6.0;
    int outer_nodes = 6;        // per unit length of the outer quadrature
    double increment_route_below = 1.0;
    double certify_tol = 1e-6;
};
TwoPointG two_point_g(double y, const TwoPointGConfig& cfg = {});

struct TailCoefficient {
    double value = 0.0;
    double value_doubled_cutoff = 0.0;
};
// Coefficient c of y^{-2} in cov(A(0), A(y)).
TailCoefficient covariance_tail_coefficient(double lambda_cutoff = 20.0, int a_nodes = 120);

// ---------------------------------------------------------------------------
// Edge scaling.

// K_t(u,y;u',y') built from the extended discrete Bessel kernel.
double edge_scaled_kernel(double t, double u, double y, double u2, double y2);
// Lattice points u_j = (j - 2t)/t^{1/3} + y^2 inside [lo, hi].
std::vector<double> edge_lattice(double t, double y, double lo, double hi);

struct ConvergenceRow {
    double t = 0.0;
    double sup_lattice = 0.0;  // max over lattice points of the box
    double sup_box = 0.0;      // max over a fine grid of the box (includes the cell step)
    std::size_t points = 0;
};
struct ConvergenceReport {
    double y = 0.0, y2 = 0.0, lo = -4.0, hi = 4.0;
    std::vector<ConvergenceRow> rows;
    bool monotone = false;
};
ConvergenceReport convergence_report(std::span<const double> t_list, double y = 0.0, double y2 = 0.0,
                                     double lo = -4.0, double hi = 4.0);

}  // namespace pngd
