#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pngd/special_fn.hpp"

namespace pngd::special {

namespace {

using ld = long double;
constexpr ld kPiL = std::numbers::pi_v<long double>;
constexpr ld kAi0 = 0.355028053887817239260063186004183176L;
constexpr ld kAip0 = -0.258819403792806798405183560189203963L;

AiryValueLD maclaurin(ld z) {
    // Ai = c1 f - c2 g with f = sum alpha_k z^{3k}, g = sum beta_k z^{3k+1};
    // the derivative series are carried term by term alongside.
    const ld z3 = z * z * z;
    ld f = 1, g = z, fp = 0, gp = 1;
    ld fk = 1, gk = z, fpk = 0, gpk = 1;
    for (int k = 0; k < 300; ++k) {
        fk *= z3 / ((3 * k + 2) * (3 * k + 3));
        gk *= z3 / ((3 * k + 3) * (3 * k + 4));
        fpk = (k == 0) ? z * z / 2 : fpk * z3 / ((3 * k + 2) * (3 * k));
        gpk *= z3 / ((3 * k + 1) * (3 * k + 3));
        f += fk;
        g += gk;
        fp += fpk;
        gp += gpk;
        const ld tail = std::fabs(fk) + std::fabs(gk) + std::fabs(fpk) + std::fabs(gpk);
        if (k > 3 && tail < 1e-24L * (std::fabs(f) + std::fabs(g) + std::fabs(fp) + std::fabs(gp))) break;
    }
    return {kAi0 * f + kAip0 * g, kAi0 * fp + kAip0 * gp};
}

// K_nu(zeta) e^{zeta} for nu = 1/3, 2/3 by the trapezoid rule on
// int_0^inf exp(-zeta (cosh s - 1)) cosh(nu s) ds.
void scaled_k(ld zeta, ld& k13, ld& k23) {
    const ld h = std::min(0.1L, 0.5L / std::sqrt(zeta));
    k13 = 0.5L;
    k23 = 0.5L;
    for (int j = 1;; ++j) {
        const ld s = j * h;
        const ld e = std::exp(-zeta * (std::cosh(s) - 1));
        k13 += e * std::cosh(s / 3);
        k23 += e * std::cosh(2 * s / 3);
        if (e < 1e-24L) break;
    }
    k13 *= h;
    k23 *= h;
}

AiryValueLD positive_side(ld x) {
    const ld zeta = 2 * x * std::sqrt(x) / 3;
    ld k13, k23;
    scaled_k(zeta, k13, k23);
    const ld e = std::exp(-zeta);
    return {std::sqrt(x / 3) / kPiL * k13 * e, -x / (kPiL * std::sqrt(3.0L)) * k23 * e};
}

AiryValueLD negative_side(ld x) {
    // Ai(-x), Ai'(-x) for x > 8 via the standard oscillatory expansions.
    const ld zeta = 2 * x * std::sqrt(x) / 3;
    ld p = 0, q = 0, r = 0, s = 0;
    ld uk = 1;
    ld zpow = 1;
    ld last = 1e300L;
    for (int k = 0; k < 200; ++k) {
        if (k > 0) {
            uk *= static_cast<ld>(6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0L * k);
            zpow /= zeta;
        }
        const ld vk = (k == 0) ? 1.0L : -static_cast<ld>(6 * k + 1) / (6 * k - 1) * uk;
        const ld tu = uk * zpow;
        const ld tv = std::fabs(vk * zpow);
        const ld mag = std::max(std::fabs(tu), tv);
        if (mag > last) break;
        last = mag;
        const int m = k / 2;
        const ld sgn = (m % 2 == 0) ? 1 : -1;
        if (k % 2 == 0) {
            p += sgn * tu;
            r += sgn * vk * zpow;
        } else {
            q += sgn * tu;
            s += sgn * vk * zpow;
        }
        if (mag < 1e-22L) break;
    }
    const ld phase = zeta - kPiL / 4;
    const ld c = std::cos(phase), sn = std::sin(phase);
    const ld x4 = std::sqrt(std::sqrt(x));
    const ld rp = 1 / std::sqrt(kPiL);
    return {rp / x4 * (c * p + sn * q), rp * x4 * (sn * r - c * s)};
}

}  // namespace

AiryValueLD airy_ld(long double u) {
    if (!(u >= kAiryMinArgument && u <= kAiryMaxArgument))
        throw std::out_of_range("airy: argument outside validated range [-2000, 200]: " +
                                std::to_string(static_cast<double>(u)));
    if (u < -8) return negative_side(-u);
    if (u <= 1.5L) return maclaurin(u);
    return positive_side(u);
}

AiryValue airy(double u) {
    const AiryValueLD v = airy_ld(u);
    return {static_cast<double>(v.ai), static_cast<double>(v.aip)};
}

double airy_ai(double u) { return airy(u).ai; }
double airy_ai_prime(double u) { return airy(u).aip; }

}  // namespace pngd::special
