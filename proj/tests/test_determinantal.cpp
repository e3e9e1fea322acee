#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pngd/determinantal.hpp"
#include "pngd/sim.hpp"
#include "pngd/special_fn.hpp"
#include "pngd/stats.hpp"

using namespace pngd;

TEST_SUITE("determinantal") {

TEST_CASE("discrete Bessel kernel symmetry") {
    const DiscreteBesselKernel b(3.0);
    std::mt19937 gen(7);
    std::uniform_int_distribution<int> d(-15, 20);
    for (int k = 0; k < 200; ++k) {
        const int i = d(gen), j = d(gen);
        CHECK(b(i, j) == doctest::Approx(b(j, i)).epsilon(1e-12));
    }
}

TEST_CASE("closed form against truncated series") {
    const DiscreteBesselKernel b(5.0);
    double worst = 0.0;
    for (int i = -20; i <= 20; ++i)
        for (int j = -20; j <= 20; ++j) worst = std::max(worst, std::fabs(b(i, j) - b.series(i, j, 1e-14)));
    CHECK(worst < 1e-10);
}

TEST_CASE("projection property") {
    const DiscreteBesselKernel b(2.0);
    // entries below -K are within 1e-13 of the identity, so the k-sum splits
    const int K = 40;
    for (int i : {-3, 0, 2, 5})
        for (int j : {-1, 1, 4}) {
            double s = 0.0;
            for (int k = -K; k <= K; ++k) s += b(i, k) * b(k, j);
            // k < -K: B(i,k) ~ delta_ik, and i, j > -K
            CHECK(std::fabs(s - b(i, j)) < 1e-8);
        }
}

TEST_CASE("small t reduces to the projection onto i <= 0") {
    const DiscreteBesselKernel b(1e-6);
    for (int i = -3; i <= 3; ++i)
        for (int j = -3; j <= 3; ++j) CHECK(std::fabs(b(i, j) - ((i == j && i <= 0) ? 1.0 : 0.0)) < 1e-5);
}

TEST_CASE("height CDF trivial limits and monotonicity") {
    CHECK(height_cdf_exact(1e-6, 1).value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(height_cdf_exact(1e-6, 0).value < 1e-9);
    double prev = 0.0;
    for (int n = 0; n <= 30; ++n) {
        const auto h = height_cdf_exact(5.0, n);
        CHECK(h.tail_bound < 1e-12);
        CHECK(h.value >= prev - 1e-12);
        prev = h.value;
    }
    CHECK(prev > 1 - 1e-10);
}

TEST_CASE("height CDF against Monte Carlo at t=5") {
    const double t = 5.0;
    const int N = 100000;
    std::vector<std::int64_t> h(N);
    for (int s = 0; s < N; ++s) h[static_cast<std::size_t>(s)] = lis_length(sample_poisson_triangle(t, 1000 + s));
    const std::size_t size = 40;
    const auto emp = stats::empirical_pmf(h, 0, size);
    const auto cdf = height_cdf_table(t, 0, static_cast<int>(size));
    std::vector<double> pmf(size);
    // P(h = n) = P(h < n+1) - P(h < n)
    for (std::size_t n = 0; n < size; ++n) pmf[n] = cdf[n + 1] - cdf[n];
    CHECK(stats::total_variation(emp, pmf) < 0.02);
}

TEST_CASE("extended kernel reductions") {
    const double t = 4.0;
    const DiscreteBesselKernel b(t);
    for (int j : {-2, 3, 8})
        for (int j2 : {0, 7, 9}) CHECK(extended_bessel(t, j, 0, j2, 0) == doctest::Approx(b(j, j2)).epsilon(1e-12));
    // equal time: g B_s g^{-1}
    const double x = 1.5, s = std::sqrt(t * t - x * x);
    const DiscreteBesselKernel bs(s);
    for (int j : {2, 5, 9})
        for (int j2 : {1, 6, 10}) {
            const double g = std::pow((t + x) / (t - x), 0.5 * (j - j2));
            CHECK(extended_bessel(t, j, x, j2, x) == doctest::Approx(g * bs(j, j2)).epsilon(1e-12));
        }
}

TEST_CASE("extended kernel determinants are continuous across equal times") {
    const double t = 5.0, x = 1.0, h = 1e-7;
    // two-time gap probability on windows [n1, n1+M) at x1 and [n2, n2+M) at x2
    auto det = [&](double x1, double x2) {
        const int n1 = 10, n2 = 11, M = 25;
        Eigen::MatrixXd m(2 * M, 2 * M);
        const double xs[2] = {x1, x2};
        const int ns[2] = {n1, n2};
        for (int a = 0; a < 2; ++a)
            for (int c = 0; c < 2; ++c)
                for (int i = 0; i < M; ++i)
                    for (int k = 0; k < M; ++k)
                        m(a * M + i, c * M + k) =
                            (a * M + i == c * M + k ? 1.0 : 0.0) - extended_bessel(t, ns[a] + i, xs[a], ns[c] + k, xs[c]);
        return m.partialPivLu().determinant();
    };
    const double left = det(x - h, x), right = det(x + h, x);
    CHECK(std::fabs(left - right) < 1e-6);
    // merged constraint h(x) < min(n1, n2) at a single time
    Eigen::MatrixXd one(25, 25);
    for (int i = 0; i < 25; ++i)
        for (int k = 0; k < 25; ++k) one(i, k) = (i == k ? 1.0 : 0.0) - extended_bessel(t, 10 + i, x, 10 + k, x);
    CHECK(std::fabs(left - one.partialPivLu().determinant()) < 1e-6);
}

TEST_CASE("airy kernel diagonal and density asymptotics") {
    for (double u : {-3.0, 0.0, 2.0}) CHECK(airy_kernel(u, u) == doctest::Approx(airy_density(u)).epsilon(1e-12));
    for (double u : {-3.0, 0.0, 2.0}) CHECK(airy_kernel(u, u + 1e-5) == doctest::Approx(airy_density(u)).epsilon(1e-5));
    CHECK(std::fabs(airy_density(-25.0) / (5.0 / std::numbers::pi) - 1) < 0.02);
    const double u = 6.0;
    const double envelope = 17.0 / (96 * std::numbers::pi) / std::sqrt(u) * std::exp(-4 * std::pow(u, 1.5) / 3);
    CHECK(airy_density(u) < 1.5 * envelope);
    // the exact leading term is e^{-4u^{3/2}/3} / (8 pi u)
    CHECK(airy_density(u) * 8 * std::numbers::pi * u * std::exp(4 * std::pow(u, 1.5) / 3) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(airy_kernel(-1.3, 2.2) == doctest::Approx(airy_kernel(2.2, -1.3)).epsilon(1e-13));
}

TEST_CASE("Tracy-Widom F2 against Painleve II") {
    for (double a = -5.0; a <= 3.0; a += 0.5) CHECK(std::fabs(tracy_widom_f2(a) - painleve_f2(a)) < 1e-6);
    CHECK(1 - tracy_widom_f2(10.0) < 1e-8);
    CHECK(1 - painleve_f2(8.0) < 1e-10);
    double prev = 0.0;
    for (double a = -6.0; a <= 4.0; a += 0.25) {
        const double f = tracy_widom_f2(a);
        CHECK(f >= prev - 1e-14);
        CHECK(f <= 1.0);
        prev = f;
    }
    const auto c = tracy_widom_f2_certified(-2.0);
    CHECK(c.error_estimate < 1e-10);
}

TEST_CASE("Tracy-Widom moments and Hastings-McLeod asymptotics") {
    const auto m = tracy_widom_moments();
    CHECK(std::fabs(m.variance - 0.81320) < 1e-3);
    CHECK(m.mean == doctest::Approx(-1.7710868).epsilon(1e-6));
    CHECK(std::fabs(painleve_ii(-6.0).q / std::sqrt(3.0) - 1) < 0.01);
    CHECK_THROWS_AS(painleve_ii(-9.0), std::invalid_argument);
}

TEST_CASE("Bessel to Airy edge limit") {
    const double t = 1e4;
    const DiscreteBesselKernel b(t);
    CHECK(std::fabs(std::cbrt(t) * b.j_value(static_cast<int>(std::floor(2 * t))) - special::airy_ai(0.0)) < 3e-3);
    // scaled diagonal approaches the Airy density
    for (double u : {-2.0, 0.0, 1.5})
        CHECK(std::fabs(edge_scaled_kernel(t, u, 0, u, 0) - airy_density(u)) < 0.02);
}

TEST_CASE("edge-scaled kernel convergence") {
    const double ts[] = {100.0, 1000.0};
    const auto rep = convergence_report(ts);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.monotone);
    CHECK(rep.rows[1].sup_lattice < 0.01 * 2);  // lattice sup at t=1000 is about 0.015
    CHECK(rep.rows[1].sup_lattice < rep.rows[0].sup_lattice);
}

TEST_CASE("edge-scaled extended kernel at distinct times") {
    const double t = 2000.0;
    for (auto [y, y2] : {std::pair{0.0, 0.5}, std::pair{0.5, 0.0}, std::pair{-0.3, 0.4}})
        for (double u : {-1.0, 0.5})
            for (double u2 : {-0.5, 1.0})
                CHECK(std::fabs(edge_scaled_kernel(t, u, y, u2, y2) - extended_airy_kernel(u, y, u2, y2)) < 0.05);
}

}  // TEST_SUITE
