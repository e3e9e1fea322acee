#include <array>
#include <cmath>
#include <string>

#include "pngd/determinantal.hpp"
#include "pngd/special_fn.hpp"

namespace pngd {

namespace {

using ld = long double;
using State = std::array<ld, 4>;  // q, q', E = int_x^inf q^2, G = int_x^inf (s-x) q^2 ds

State rhs(ld x, const State& y) {
    return {y[1], 2 * y[0] * y[0] * y[0] + x * y[0], -y[0] * y[0], -y[2]};
}

// Dormand-Prince 5(4) step; err gets the embedded error estimate.
State dp_step(ld x, const State& y, ld h, State& err) {
    static constexpr ld c2 = 1.0L / 5, c3 = 3.0L / 10, c4 = 4.0L / 5, c5 = 8.0L / 9;
    static constexpr ld a21 = 1.0L / 5;
    static constexpr ld a31 = 3.0L / 40, a32 = 9.0L / 40;
    static constexpr ld a41 = 44.0L / 45, a42 = -56.0L / 15, a43 = 32.0L / 9;
    static constexpr ld a51 = 19372.0L / 6561, a52 = -25360.0L / 2187, a53 = 64448.0L / 6561, a54 = -212.0L / 729;
    static constexpr ld a61 = 9017.0L / 3168, a62 = -355.0L / 33, a63 = 46732.0L / 5247, a64 = 49.0L / 176,
                        a65 = -5103.0L / 18656;
    static constexpr ld b1 = 35.0L / 384, b3 = 500.0L / 1113, b4 = 125.0L / 192, b5 = -2187.0L / 6784, b6 = 11.0L / 84;
    static constexpr ld e1 = 71.0L / 57600, e3 = -71.0L / 16695, e4 = 71.0L / 1920, e5 = -17253.0L / 339200,
                        e6 = 22.0L / 525, e7 = -1.0L / 40;
    auto comb = [&](std::initializer_list<std::pair<ld, const State*>> terms) {
        State r = y;
        for (auto [c, k] : terms)
            for (int i = 0; i < 4; ++i) r[i] += h * c * (*k)[i];
        return r;
    };
    const State k1 = rhs(x, y);
    const State k2 = rhs(x + c2 * h, comb({{a21, &k1}}));
    const State k3 = rhs(x + c3 * h, comb({{a31, &k1}, {a32, &k2}}));
    const State k4 = rhs(x + c4 * h, comb({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = rhs(x + c5 * h, comb({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 = rhs(x + h, comb({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y5 = comb({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = rhs(x + h, y5);
    for (int i = 0; i < 4; ++i)
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    return y5;
}

}  // namespace

PainleveValue painleve_ii(double a) {
    if (!(a >= -8.0)) throw std::invalid_argument("painleve_ii: validated for a >= -8");
    constexpr ld x0 = 8.0L;
    if (a >= x0) {
        const auto ai = special::airy(a);
        return {ai.ai, ai.aip, 1.0};
    }
    const auto A = special::airy_ld(x0);
    const ld E0 = A.aip * A.aip - x0 * A.ai * A.ai;
    const ld G0 = -(x0 * x0 * A.ai * A.ai - x0 * A.aip * A.aip + A.ai * A.aip) / 3 - x0 * E0;
    State y{A.ai, A.aip, E0, G0};
    ld x = x0, h = -1e-3L;
    const ld rtol = 1e-15L, atol = 1e-30L, target = a;
    int steps = 0;
    while (x > target) {
        if (x + h < target) h = target - x;
        State err;
        const State yn = dp_step(x, y, h, err);
        ld en = 0;
        for (int i = 0; i < 4; ++i) {
            const ld sc = atol + rtol * std::max(std::fabs(y[i]), std::fabs(yn[i]));
            en = std::max(en, std::fabs(err[i]) / sc);
        }
        if (en <= 1) {
            x += h;
            y = yn;
            if (x < -4) {
                const ld env = std::sqrt(-x / 2);
                if (!(std::fabs(y[0] / env - 1) < 0.2L))
                    throw CertificationError("painleve_ii: left the Hastings-McLeod separatrix at x=" +
                                             std::to_string(static_cast<double>(x)));
            }
        }
        const ld fac = en == 0 ? 5.0L : std::clamp(0.9L * std::pow(en, -0.2L), 0.2L, 5.0L);
        h *= fac;
        if (++steps > 2'000'000) throw CertificationError("painleve_ii: step budget exhausted");
    }
    return {static_cast<double>(y[0]), static_cast<double>(y[1]), static_cast<double>(std::exp(-y[3]))};
}

double painleve_f2(double a) { return painleve_ii(a).f2; }

}  // namespace pngd
