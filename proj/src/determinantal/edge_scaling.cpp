#include <algorithm>
#include <cmath>

#include "airy_internal.hpp"
#include "pngd/determinantal.hpp"

namespace pngd {

namespace {

// Lattice index of u at time y; the small nudge keeps u_j from rounding down to j-1.
int lattice_index(double t, double u, double y) {
    return static_cast<int>(std::floor(2 * t + std::cbrt(t) * (u - y * y) + 1e-9));
}

}  // namespace

double edge_scaled_kernel(double t, double u, double y, double u2, double y2) {
    if (!(t > 0)) throw std::invalid_argument("edge_scaled_kernel: t must be positive");
    const double c = std::cbrt(t);
    const int j = lattice_index(t, u, y), j2 = lattice_index(t, u2, y2);
    if (y == 0.0 && y2 == 0.0) return c * DiscreteBesselKernel(t)(j, j2);
    return c * detail::extended_bessel_conjugated(t, j, c * c * y, j2, c * c * y2);
}

std::vector<double> edge_lattice(double t, double y, double lo, double hi) {
    const double c = std::cbrt(t);
    std::vector<double> out;
    const int j0 = static_cast<int>(std::ceil(2 * t + c * (lo - y * y) - 1e-9));
    const int j1 = static_cast<int>(std::floor(2 * t + c * (hi - y * y) + 1e-9));
    for (int j = j0; j <= j1; ++j) out.push_back((j - 2 * t) / c + y * y);
    return out;
}

namespace {

// sup |K_t - K| over the tensor set u x v.
double sup_difference(double t, const std::vector<double>& u, double y, const std::vector<double>& v, double y2) {
    const Eigen::MatrixXd ref = detail::extended_airy_matrix(u, y, v, y2);
    const double c = std::cbrt(t);
    std::vector<int> ju, jv;
    for (double x : u) ju.push_back(lattice_index(t, x, y));
    for (double x : v) jv.push_back(lattice_index(t, x, y2));
    double sup = 0.0;
    if (y == y2) {
        const double s = std::sqrt(t * t - c * c * y * c * c * y);
        const DiscreteBesselKernel b(s);
        for (std::size_t i = 0; i < u.size(); ++i)
            for (std::size_t k = 0; k < v.size(); ++k)
                sup = std::max(sup, std::fabs(c * b(ju[i], jv[k]) - ref(static_cast<int>(i), static_cast<int>(k))));
        return sup;
    }
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t k = 0; k < v.size(); ++k) {
            const double kt = c * detail::extended_bessel_conjugated(t, ju[i], c * c * y, jv[k], c * c * y2);
            sup = std::max(sup, std::fabs(kt - ref(static_cast<int>(i), static_cast<int>(k))));
        }
    return sup;
}

}  // namespace

ConvergenceReport convergence_report(std::span<const double> t_list, double y, double y2, double lo, double hi) {
    ConvergenceReport rep;
    rep.y = y;
    rep.y2 = y2;
    rep.lo = lo;
    rep.hi = hi;
    constexpr int kFine = 121;
    std::vector<double> fine(kFine);
    for (int i = 0; i < kFine; ++i) fine[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (kFine - 1.0);
    for (double t : t_list) {
        ConvergenceRow row;
        row.t = t;
        const auto u = edge_lattice(t, y, lo, hi), v = edge_lattice(t, y2, lo, hi);
        row.points = u.size() * v.size();
        row.sup_lattice = sup_difference(t, u, y, v, y2);
        row.sup_box = sup_difference(t, fine, y, fine, y2);
        rep.rows.push_back(row);
    }
    rep.monotone = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (rep.rows[i].sup_lattice > rep.rows[i - 1].sup_lattice) rep.monotone = false;
    return rep;
}

}  // namespace pngd
