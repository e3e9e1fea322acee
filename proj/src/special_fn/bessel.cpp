#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pngd/quadrature.hpp"
#include "pngd/special_fn.hpp"

namespace pngd::special {

namespace {

using ld = long double;
constexpr ld kPiL = std::numbers::pi_v<long double>;

bool is_integer(double v) { return std::isfinite(v) && std::nearbyint(v) == v; }

// Ascending series. ok=false when cancellation would cost more than ~7 digits.
ld series_j(ld nu, ld x, int max_terms, bool& ok) {
    ok = true;
    const ld half = x / 2;
    // (x/2)^nu / Gamma(nu+1) with the sign of Gamma for negative non-integer nu.
    const ld z = nu + 1;
    ld sign = 1;
    if (z < 0) sign = (static_cast<long long>(std::ceil(-z)) % 2 == 1) ? -1 : 1;
    const ld logp = nu * std::log(half) - std::lgamma(z);
    if (logp < -11000) return 0;
    ld term = sign * std::exp(logp);
    ld sum = term;
    ld big = std::fabs(term);
    const ld q = -half * half;
    int k = 0;
    for (; k < max_terms; ++k) {
        term *= q / ((k + 1) * (k + 1 + nu));
        sum += term;
        big = std::max(big, std::fabs(term));
        if (k > half && std::fabs(term) <= 1e-21L * std::fabs(sum)) break;
    }
    if (k == max_terms) ok = false;
    if (big > 1e7L * std::fabs(sum) && std::fabs(sum) > 0) ok = false;
    return sum;
}

int miller_start(double order_hi, double x) {
    const double lead = std::max(order_hi, std::ceil(x));
    return static_cast<int>(lead) + 30 + static_cast<int>(std::ceil(25.0 * std::cbrt(x + 1.0)));
}

// J_{f+k}(x) for k in [k_lo, k_hi], 0 <= f < 1, x > 0, by backward recurrence
// normalized with (x/2)^f = sum_j (f+2j) Gamma(f+j)/j! J_{f+2j}(x).
std::vector<ld> miller(ld f, ld x, int k_lo, int k_hi) {
    const int n = miller_start(k_hi, static_cast<double>(x));
    const int jmax = n / 2 + 1;
    std::vector<ld> a(jmax + 1);
    a[0] = std::tgamma(f + 1);
    ld c = a[0];  // Gamma(f+j)/j!
    for (int j = 1; j <= jmax; ++j) {
        if (j > 1) c *= (f + j - 1) / j;
        a[j] = (f + 2 * j) * c;
    }
    std::vector<ld> out(k_hi - k_lo + 1, 0.0L);
    ld p_next = 0, p = 1e-300L, norm = 0;
    if (n % 2 == 0) norm += a[n / 2] * p;
    if (n >= k_lo && n <= k_hi) out[n - k_lo] = p;
    for (int k = n; k >= 1; --k) {
        ld p_prev = 2 * (f + k) / x * p - p_next;
        p_next = p;
        p = p_prev;
        const int idx = k - 1;
        if (idx >= k_lo && idx <= k_hi) out[idx - k_lo] = p;
        if (idx % 2 == 0) norm += a[idx / 2] * p;
        if (std::fabs(p) > 1e300L) {
            constexpr ld s = 1e-300L;
            p *= s;
            p_next *= s;
            norm *= s;
            for (int i = idx; i <= k_hi; ++i)
                if (i >= k_lo) out[i - k_lo] *= s;
        }
    }
    const ld scale = std::pow(x / 2, f) / norm;
    for (auto& v : out) v *= scale;
    return out;
}

// Schlaefli integral, valid for all real nu and x > 0; used for nu < 0.
ld schlaefli(ld nu, ld x) {
    const GaussRule& g = gauss_legendre_rule(16);
    const ld span = std::fabs(nu) + x;
    const int panels = std::max(16, static_cast<int>(std::ceil(span * kPiL / 3)));
    ld i1 = 0;
    const ld h = kPiL / panels;
    for (int p = 0; p < panels; ++p) {
        const ld c = (p + 0.5L) * h;
        ld acc = 0;
        for (int k = 0; k < 16; ++k) {
            const ld th = c + 0.5L * h * g.x[k];
            acc += g.w[k] * std::cos(nu * th - x * std::sin(th));
        }
        i1 += acc * 0.5L * h;
    }
    const ld s_nu = std::sin(nu * kPiL);
    if (s_nu == 0) return i1 / kPiL;
    // int_0^inf exp(phi(s)) ds with phi(s) = -nu s - x sinh s.
    const ld mu = -nu;
    auto phi = [&](ld s) { return mu * s - x * std::sinh(s); };
    const ld s_star = mu > x ? std::acosh(mu / x) : 0.0L;
    const ld peak = phi(s_star);
    ld hi = s_star + 1;
    while (phi(hi) > peak - 60) hi = s_star + 2 * (hi - s_star);
    ld lo_b = s_star, hi_b = hi;
    for (int it = 0; it < 200; ++it) {
        ld mid = 0.5L * (lo_b + hi_b);
        (phi(mid) > peak - 60 ? lo_b : hi_b) = mid;
    }
    hi = hi_b;
    const int panels2 = 128;
    const ld h2 = hi / panels2;
    ld i2 = 0;
    for (int p = 0; p < panels2; ++p) {
        const ld c = (p + 0.5L) * h2;
        ld acc = 0;
        for (int k = 0; k < 16; ++k) acc += g.w[k] * std::exp(phi(c + 0.5L * h2 * g.x[k]) - peak);
        i2 += acc * 0.5L * h2;
    }
    return i1 / kPiL - s_nu / kPiL * std::exp(peak) * i2;
}

}  // namespace

void BesselEvalConfig::validate() const {
    if (series_cutoff_terms < 20) throw std::invalid_argument("BesselEvalConfig: series_cutoff_terms must be >= 20");
    if (!(asymptotic_switch_argument > 0)) throw std::invalid_argument("BesselEvalConfig: switch argument must be positive");
    if (!(order_derivative_step > 0 && order_derivative_step <= 1e-2))
        throw std::invalid_argument("BesselEvalConfig: order_derivative_step must lie in (0, 1e-2]");
}

bool bessel_validated(double order, double x) {
    return x <= kBesselMaxArgument && std::fabs(order) <= x + 50.0 * std::cbrt(x) + 50.0;
}

BesselValue bessel_j_checked(double nu, double x, const BesselEvalConfig& cfg) {
    if (!(x >= 0)) throw std::domain_error("bessel_j: argument must be nonnegative, got " + std::to_string(x));
    if (!std::isfinite(nu) || !std::isfinite(x)) throw std::domain_error("bessel_j: non-finite input");
    BesselValue out;
    out.accuracy_loss = !bessel_validated(nu, x);
    if (is_integer(nu) && nu < 0) {
        const double v = bessel_j(-nu, x, cfg);
        const bool odd = std::fmod(-nu, 2.0) != 0.0;
        out.value = odd ? -v : v;
        return out;
    }
    if (x == 0) {
        if (nu == 0) out.value = 1.0;
        else if (nu > 0) out.value = 0.0;
        else throw std::domain_error("bessel_j: J_nu(0) is singular for negative non-integer order");
        return out;
    }
    if (x <= cfg.asymptotic_switch_argument) {
        bool ok = false;
        const ld v = series_j(nu, x, cfg.series_cutoff_terms, ok);
        if (ok) {
            out.value = static_cast<double>(v);
            return out;
        }
    }
    if (nu >= 0) {
        const double fl = std::floor(nu);
        if (fl > 2e9) throw std::domain_error("bessel_j: order too large");
        const int m = static_cast<int>(fl);
        out.value = static_cast<double>(miller(static_cast<ld>(nu) - m, x, m, m)[0]);
    } else {
        out.value = static_cast<double>(schlaefli(nu, x));
        if (!std::isfinite(out.value)) out.accuracy_loss = true;
    }
    return out;
}

double bessel_j(double order, double x, const BesselEvalConfig& cfg) {
    return bessel_j_checked(order, x, cfg).value;
}

OrderDerivative bessel_j_dorder_checked(int n, double x, const BesselEvalConfig& cfg) {
    if (!(x >= 0)) throw std::domain_error("bessel_j_dorder: argument must be nonnegative");
    OrderDerivative out;
    if (x == 0) {
        if (n >= 1) return out;
        throw std::domain_error("bessel_j_dorder: J_nu(0) is not differentiable in nu at n <= 0");
    }
    const double h = cfg.order_derivative_step;
    auto diff = [&](double step, double& noise) {
        const BesselValue p = bessel_j_checked(n + step, x, cfg);
        const BesselValue m = bessel_j_checked(n - step, x, cfg);
        out.accuracy_loss = out.accuracy_loss || p.accuracy_loss || m.accuracy_loss;
        noise = std::max(noise, 1e-14 * (std::fabs(p.value) + std::fabs(m.value)) / step);
        return (p.value - m.value) / (2 * step);
    };
    double noise = 0;
    const double d1 = diff(h, noise);
    const double d2 = diff(h / 2, noise);
    out.value = (4 * d2 - d1) / 3;
    out.error_estimate = std::fabs(out.value - d2) + noise;
    return out;
}

double bessel_j_dorder(int order, double x, const BesselEvalConfig& cfg) {
    return bessel_j_dorder_checked(order, x, cfg).value;
}

std::vector<double> bessel_j_integer_range(int n_min, int n_max, double x) {
    if (!(x >= 0)) throw std::domain_error("bessel_j_integer_range: argument must be nonnegative");
    if (n_max < n_min) throw std::invalid_argument("bessel_j_integer_range: empty range");
    std::vector<double> out(n_max - n_min + 1, 0.0);
    if (x == 0) {
        if (n_min <= 0 && n_max >= 0) out[-n_min] = 1.0;
        return out;
    }
    const int k_hi = std::max(std::abs(n_min), std::abs(n_max));
    const int k_lo = (n_min <= 0 && n_max >= 0) ? 0 : std::min(std::abs(n_min), std::abs(n_max));
    const std::vector<ld> v = miller(0.0L, x, k_lo, k_hi);
    for (int n = n_min; n <= n_max; ++n) {
        const int k = std::abs(n);
        ld val = v[k - k_lo];
        if (n < 0 && (k % 2 == 1)) val = -val;
        out[n - n_min] = static_cast<double>(val);
    }
    return out;
}

}  // namespace pngd::special
