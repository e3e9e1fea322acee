#include <algorithm>
#include <cmath>
#include <limits>

#include "airy_internal.hpp"
#include "pngd/determinantal.hpp"
#include "pngd/special_fn.hpp"

namespace pngd {

namespace {

// log of the bound t^n/n! on |J_n(2t)|, n >= 0
double log_jbound(double t, int n) { return n * std::log(t) - std::lgamma(n + 1.0); }

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double bessel_product_tail_bound(double t, int a, int b) {
    if (!(t > 0)) return 0.0;
    if (a < t + 1 || b < t + 1) return kInf;
    const double r = t * t / ((a + 1.0) * (b + 1.0));
    return std::exp(log_jbound(t, a) + log_jbound(t, b)) / (1.0 - r);
}

DiscreteBesselKernel::DiscreteBesselKernel(double t) : t_(t) {
    if (!(t > 0)) throw std::invalid_argument("DiscreteBesselKernel: t must be positive");
    const int edge = static_cast<int>(std::ceil(2 * t));
    ensure(-8, edge + 40);
}

void DiscreteBesselKernel::ensure(int lo, int hi) const {
    if (lo >= lo_ && hi <= hi_) return;
    int nlo = lo, nhi = hi;
    if (hi_ >= lo_) {
        nlo = std::min(lo, lo_);
        nhi = std::max(hi, hi_);
    }
    nlo -= 16;
    nhi += 16;
    jv_ = special::bessel_j_integer_range(nlo, nhi, 2 * t_);
    lo_ = nlo;
    hi_ = nhi;
}

double DiscreteBesselKernel::j_value(int n) const {
    ensure(n, n);
    return jv_[static_cast<std::size_t>(n - lo_)];
}

double DiscreteBesselKernel::series(int i, int j, double tol) const {
    double s = 0.0;
    for (int m = 0;; ++m) {
        if (bessel_product_tail_bound(t_, i + m, j + m) < tol) return s;
        if (m > 4'000'000) throw CertificationError("discrete Bessel series: tail bound not reached");
        s += j_value(i + m) * j_value(j + m);
    }
}

double DiscreteBesselKernel::diagonal_order_derivative(int i, double* error_estimate) const {
    const auto li1 = special::bessel_j_dorder_checked(i - 1, 2 * t_);
    const auto li = special::bessel_j_dorder_checked(i, 2 * t_);
    const double ji = j_value(i), ji1 = j_value(i - 1);
    if (error_estimate)
        *error_estimate = t_ * (li1.error_estimate * std::fabs(ji) + li.error_estimate * std::fabs(ji1)) +
                          ((li1.accuracy_loss || li.accuracy_loss) ? kInf : 0.0);
    return t_ * (li1.value * ji - li.value * ji1);
}

double DiscreteBesselKernel::operator()(int i, int j) const {
    if (i == j) {
        // far above the edge both terms underflow and the series is exact anyway
        if (i > 2 * t_ + 10 * std::cbrt(t_) + 20) return series(i, i);
        double err = 0.0;
        const double v = diagonal_order_derivative(i, &err);
        if (err > 1e-11) return series(i, i);
        return v;
    }
    const double a = j_value(i - 1) * j_value(j), b = j_value(i) * j_value(j - 1);
    const double v = t_ / (i - j) * (a - b);
    const double scale = t_ / std::abs(i - j) * (std::fabs(a) + std::fabs(b));
    if (std::fabs(v) < 1e-6 * scale && scale > 1e-200) return series(i, j);
    return v;
}

double discrete_bessel(double t, int i, int j) { return DiscreteBesselKernel(t)(i, j); }

KernelMatrix discrete_bessel_matrix(const DiscreteBesselKernel& b, int lo, int hi) {
    KernelMatrix m;
    m.index_lo = lo;
    const int n = hi - lo;
    m.entries.resize(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) m.entries(r, c) = m.entries(c, r) = b(lo + r, lo + c);
    return m;
}

namespace {

// Sum_{k >= K} B(k,k) <= sum_{n >= K} (n - K + 1) J_n(2t)^2, with the crude
// t^n/n! bound for the part beyond the computed orders.
double diagonal_tail(const DiscreteBesselKernel& b, int K) {
    const double t = b.t();
    const int far = std::max(K, static_cast<int>(std::ceil(std::exp(1.0) * t)) + 60);
    double s = 0.0;
    for (int n = K; n < far; ++n) {
        const double jn = b.j_value(n);
        s += (n - K + 1.0) * jn * jn;
    }
    // sum_{n>=far} (n-K+1) (t^n/n!)^2, ratio <= t^2/(far+1)^2 * (far-K+2)/(far-K+1)
    const double first = (far - K + 1.0) * std::exp(2 * log_jbound(t, far));
    const double r = t * t / ((far + 1.0) * (far + 1.0)) * (far - K + 2.0) / (far - K + 1.0);
    return s + first / (1.0 - r);
}

}  // namespace

HeightCdf height_cdf_exact(double t, int n, double tol, int max_window) {
    if (!(t > 0)) throw std::invalid_argument("height_cdf_exact: t must be positive");
    if (!(tol > 0)) throw std::invalid_argument("height_cdf_exact: tol must be positive");
    const DiscreteBesselKernel b(t);
    HeightCdf out;
    int K = std::max(n, static_cast<int>(std::floor(2 * t)));
    // grow the window until the neglected diagonal mass is below tol
    while ((out.tail_bound = diagonal_tail(b, K)) >= tol) {
        ++K;
        if (K - n > max_window)
            throw CertificationError("height_cdf_exact: window exceeds " + std::to_string(max_window) +
                                     " for t=" + std::to_string(t) + ", n=" + std::to_string(n));
    }
    out.window = K - n;
    if (out.window <= 0) {
        out.value = 1.0;
        return out;
    }
    Eigen::MatrixXd m = -discrete_bessel_matrix(b, n, K).entries;
    m.diagonal().array() += 1.0;
    out.value = std::clamp(m.partialPivLu().determinant(), 0.0, 1.0);
    return out;
}

std::vector<double> height_cdf_table(double t, int n_lo, int n_hi, double tol) {
    std::vector<double> out;
    for (int n = n_lo; n <= n_hi; ++n) out.push_back(height_cdf_exact(t, n, tol).value);
    return out;
}

namespace {

// Sum over l of sgn * theta * J_{j-l}(2s) J_{j2-l}(2s2) exp(0.5((j-l)L1 + (j2-l)L2) - shift)
double extended_sum(double t, int j, double x, int j2, double x2, double tol, bool conjugate) {
    if (!(t > 0)) throw std::invalid_argument("extended_bessel: t must be positive");
    if (!(std::fabs(x) < t && std::fabs(x2) < t)) throw std::invalid_argument("extended_bessel: need |x|, |x'| < t");
    const double s = std::sqrt(t * t - x * x), s2 = std::sqrt(t * t - x2 * x2);
    const double L1 = std::log((t + x) / (t - x)), L2 = std::log((t - x2) / (t + x2));
    const double shift = conjugate ? 0.5 * (j * L1 + j2 * L2) : 0.0;
    if (x == x2) return std::exp(0.5 * (j - j2) * L1 - shift) * DiscreteBesselKernel(s)(j, j2);

    const DiscreteBesselKernel b1(s), b2(s2);
    auto expo = [&](int l) { return 0.5 * ((j - l) * L1 + (j2 - l) * L2) - shift; };
    auto term = [&](int l) {
        const double jj = b1.j_value(j - l) * b2.j_value(j2 - l);
        return jj == 0.0 ? 0.0 : std::exp(expo(l)) * jj;
    };
    // log of a bound on |term(l)| from |J_n(2s)| <= s^|n| / |n|!
    auto log_bound = [&](int l) { return expo(l) + log_jbound(s, std::abs(j - l)) + log_jbound(s2, std::abs(j2 - l)); };
    // the l-sum runs over l <= 0 for x < x' and over l >= 1 with a minus sign otherwise
    const bool forward = x < x2;
    const int dir = forward ? -1 : 1;
    double sum = 0.0;
    int l = forward ? 0 : 1;
    for (int it = 0;; ++it, l += dir) {
        const int n1 = std::abs(j - l), n2 = std::abs(j2 - l);
        const bool past = forward ? (j - l > 0 && j2 - l > 0) : (j - l < 0 && j2 - l < 0);
        if (past && n1 > s + 1 && n2 > s2 + 1) {
            // successive term bounds shrink at least by this ratio from here on
            const double lr = -0.5 * dir * (L1 + L2) + std::log(s * s2 / ((n1 + 1.0) * (n2 + 1.0)));
            if (lr < std::log(0.5) && std::exp(log_bound(l)) / (1.0 - std::exp(lr)) < tol * std::max(1.0, std::fabs(sum)))
                break;
        }
        if (it > 4'000'000) throw CertificationError("extended_bessel: truncation not certified");
        sum += term(l);
    }
    return forward ? sum : -sum;
}

}  // namespace

double extended_bessel(double t, int j, double x, int j2, double x2, double tol) {
    return extended_sum(t, j, x, j2, x2, tol, false);
}

namespace detail {
double extended_bessel_conjugated(double t, int j, double x, int j2, double x2, double tol) {
    return extended_sum(t, j, x, j2, x2, tol, true);
}
}  // namespace detail

}  // namespace pngd
