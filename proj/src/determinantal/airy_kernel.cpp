#include <algorithm>
#include <cmath>

#include "airy_internal.hpp"
#include "pngd/determinantal.hpp"
#include "pngd/special_fn.hpp"

namespace pngd {

namespace detail {

double airy_kernel_from_values(double u, double v, const special::AiryValue& au, const special::AiryValue& av) {
    const double d = v - u;
    if (std::fabs(d) < 1e-3) {
        // expand around the midpoint m: K = D(m) + e^2 [2m(A'^2 - m A^2)/3 + A A'/3], e = (v-u)/2
        const double m = 0.5 * (u + v), e = 0.5 * d;
        const auto am = special::airy(m);
        const double D = am.aip * am.aip - m * am.ai * am.ai;
        return D + e * e * (2.0 * m * (am.aip * am.aip - m * am.ai * am.ai) / 3.0 + am.ai * am.aip / 3.0);
    }
    return (au.ai * av.aip - au.aip * av.ai) / (u - v);
}

Eigen::MatrixXd airy_nystrom(const QuadratureGrid& g) {
    const std::size_t n = g.size();
    std::vector<special::AiryValue> av(n);
    std::vector<double> sw(n);
    for (std::size_t i = 0; i < n; ++i) {
        av[i] = special::airy(g.nodes[i]);
        sw[i] = std::sqrt(g.weights[i]);
    }
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double k = airy_kernel_from_values(g.nodes[i], g.nodes[j], av[i], av[j]);
            m(i, j) = m(j, i) = sw[i] * k * sw[j];
        }
    return m;
}

}  // namespace detail

double airy_kernel(double u, double v) {
    return detail::airy_kernel_from_values(u, v, special::airy(u), special::airy(v));
}

double airy_density(double u) {
    const auto a = special::airy(u);
    return a.aip * a.aip - u * a.ai * a.ai;
}

double tracy_widom_f2(double a, const QuadratureGrid& grid) {
    if (grid.size() == 0) throw std::invalid_argument("tracy_widom_f2: empty grid");
    if (a > 40.0) return 1.0;  // 1 - F2(40) ~ exp(-4/3 40^{3/2}) underflows
    Eigen::MatrixXd m = -detail::airy_nystrom(grid);
    m.diagonal().array() += 1.0;
    return std::clamp(m.partialPivLu().determinant(), 0.0, 1.0);
}

FredholmResult tracy_widom_f2_certified(double a, double tol, int nodes) {
    if (nodes < 40) throw std::invalid_argument("tracy_widom_f2: at least 40 nodes required");
    FredholmResult r;
    const QuadratureGrid g = QuadratureGrid::gauss_legendre(a, a + 16.0, nodes);
    r.value = tracy_widom_f2(a, g);
    r.refined = tracy_widom_f2(a, g.doubled());
    r.error_estimate = std::fabs(r.refined - r.value);
    r.nodes = g.size();
    if (r.error_estimate > tol)
        throw CertificationError("tracy_widom_f2: node doubling changed F2(" + std::to_string(a) + ") by " +
                                 std::to_string(r.error_estimate));
    return r;
}

double tracy_widom_f2(double a) { return tracy_widom_f2_certified(a).refined; }

F2Moments tracy_widom_moments() {
    // E X = int_0^inf (1-F) - int_{-inf}^0 F, E X^2 = 2 int_0^inf a(1-F) + 2 int_{-inf}^0 |a| F
    const QuadratureGrid outer = QuadratureGrid::gauss_legendre(-10.0, 8.0, 12, 36);
    F2Moments m;
    for (std::size_t i = 0; i < outer.size(); ++i) {
        const double a = outer.nodes[i], w = outer.weights[i];
        const double f = tracy_widom_f2(a, QuadratureGrid::gauss_legendre(a, a + 16.0, 48));
        if (a >= 0) {
            m.mean += w * (1 - f);
            m.second += 2 * w * a * (1 - f);
        } else {
            m.mean -= w * f;
            m.second += 2 * w * (-a) * f;
        }
    }
    m.variance = m.second - m.mean * m.mean;
    return m;
}

}  // namespace pngd
