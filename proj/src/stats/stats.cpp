#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "pngd/stats.hpp"

namespace pngd::stats {

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() || j < y.size()) {
        const double v = (j == y.size() || (i < x.size() && x[i] <= y[j])) ? x[i] : y[j];
        while (i < x.size() && x[i] <= v) ++i;
        while (j < y.size() && y[j] <= v) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    return d;
}

double ks_pvalue(double d, std::size_t n, std::size_t m) {
    const double ne = m == 0 ? static_cast<double>(n)
                             : static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m);
    const double se = std::sqrt(ne);
    const double lam = (se + 0.12 + 0.11 / se) * d;
    if (lam < 0.2) return 1.0;
    double sum = 0.0, sign = 1.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * lam * lam);
        sum += sign * term;
        if (term < 1e-17) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_lattice(std::span<const std::int64_t> samples, std::int64_t k_min, std::span<const double> cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_lattice: empty sample");
    const std::vector<double> pmf = empirical_pmf(samples, k_min, cdf.size());
    double acc = 0.0, d = 0.0;
    std::size_t below = 0;
    for (auto s : samples) below += s < k_min;
    acc = static_cast<double>(below) / static_cast<double>(samples.size());
    d = acc;
    for (std::size_t k = 0; k < cdf.size(); ++k) {
        acc += pmf[k];
        d = std::max(d, std::fabs(acc - cdf[k]));
    }
    return d;
}

std::vector<double> empirical_pmf(std::span<const std::int64_t> samples, std::int64_t k_min, std::size_t size) {
    std::vector<double> p(size, 0.0);
    if (samples.empty()) return p;
    const double w = 1.0 / static_cast<double>(samples.size());
    for (auto s : samples) {
        const std::int64_t k = s - k_min;
        if (k >= 0 && static_cast<std::size_t>(k) < size) p[static_cast<std::size_t>(k)] += w;
    }
    return p;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    const std::size_t n = std::max(p.size(), q.size());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = i < p.size() ? p[i] : 0.0, b = i < q.size() ? q[i] : 0.0;
        s += std::fabs(a - b);
    }
    return 0.5 * s;
}

ChiSquare chi_square_two_sample(std::span<const std::int64_t> a, std::span<const std::int64_t> b, double min_expected) {
    if (a.size() != b.size()) throw std::invalid_argument("chi_square_two_sample: bin count mismatch");
    double na = 0, nb = 0;
    for (auto v : a) na += static_cast<double>(v);
    for (auto v : b) nb += static_cast<double>(v);
    if (na == 0 || nb == 0) throw std::invalid_argument("chi_square_two_sample: empty sample");
    const double fa = na / (na + nb), fb = nb / (na + nb);

    // pool left to right; a short last cell is merged into its neighbour
    std::vector<std::pair<double, double>> cells;
    double ca = 0, cb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ca += static_cast<double>(a[i]);
        cb += static_cast<double>(b[i]);
        if ((ca + cb) * std::min(fa, fb) >= min_expected) {
            cells.push_back({ca, cb});
            ca = cb = 0;
        }
    }
    if (ca + cb > 0) {
        if (cells.empty()) cells.push_back({ca, cb});
        else {
            cells.back().first += ca;
            cells.back().second += cb;
        }
    }
    ChiSquare r;
    for (auto [x, y] : cells) {
        const double tot = x + y;
        const double ea = tot * fa, eb = tot * fb;
        r.statistic += (x - ea) * (x - ea) / ea + (y - eb) * (y - eb) / eb;
    }
    r.dof = static_cast<int>(cells.size()) - 1;
    r.p_value = r.dof > 0 ? boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic) : 1.0;
    return r;
}

}  // namespace pngd::stats
