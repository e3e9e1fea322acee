#include <cmath>

#include "doctest.h"
#include "pngd/determinantal.hpp"

using namespace pngd;

TEST_SUITE("two_point") {

TEST_CASE("K_ba is symmetric") {
    for (double y : {0.2, 1.0, 3.0}) CHECK(airy_k_ba(-1.2, 0.7, y) == doctest::Approx(airy_k_ba(0.7, -1.2, y)).epsilon(1e-13));
    const TwoPointEngine eng(0.7);
    const auto bl = eng.blocks(-2.0, -1.0);
    CHECK((bl.kba.transpose() - bl.kba).norm() > 0);  // rows b, columns a: not square-symmetric in general
    const auto same = eng.blocks(-1.0, -1.0);
    CHECK((same.kba - same.kba.transpose()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("heat and spectral routes agree") {
    TwoPointConfig heat, spec;
    heat.heat_route_below = 0.6;
    spec.heat_route_below = 0.4;
    for (double y : {0.5, 0.55})
        CHECK(std::fabs(joint_cdf(-1.0, -0.5, y, heat) - joint_cdf(-1.0, -0.5, y, spec)) < 1e-8);
    // pointwise K_ab from the two routes through the engine blocks
    const auto bh = TwoPointEngine(0.5, heat).blocks(-1.0, -1.0), bs = TwoPointEngine(0.5, spec).blocks(-1.0, -1.0);
    CHECK((bh.kab - bs.kab).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("diagonal blocks are the equal-time Airy kernel") {
    const TwoPointEngine eng(1.3);
    const auto bl = eng.blocks(-3.0, 0.25);
    const auto& g = bl.grid_a;
    for (std::size_t i = 0; i < g.size(); i += 7)
        for (std::size_t j = 0; j < g.size(); j += 5)
            CHECK(bl.kaa(static_cast<int>(i), static_cast<int>(j)) ==
                  doctest::Approx(std::sqrt(g.weights[i] * g.weights[j]) * airy_kernel(g.nodes[i], g.nodes[j])).epsilon(1e-12));
    CHECK(bl.grid_b.nodes.front() > 0.25);
}

TEST_CASE("off-diagonal blocks decay at large separation") {
    // K_ba ~ Ai(u)Ai(v)/y, so the bound needs thresholds where P_a Ai is small
    const auto bl = TwoPointEngine(10.0).blocks(2.0, 2.0);
    CHECK(bl.kab.norm() < 1e-3);
    CHECK(bl.kba.norm() < 1e-3);
    const double n10 = TwoPointEngine(10.0).blocks(-1.0, -1.0).kba.norm();
    const double n40 = TwoPointEngine(40.0).blocks(-1.0, -1.0).kba.norm();
    CHECK(n10 / n40 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("pointwise kernels match the engine") {
    const TwoPointEngine eng(2.0);
    const auto bl = eng.blocks(-1.0, 0.0);
    const auto &ga = bl.grid_a, &gb = bl.grid_b;
    const std::size_t i = 3, j = 11;
    const double s = std::sqrt(ga.weights[i] * gb.weights[j]);
    CHECK(bl.kab(static_cast<int>(i), static_cast<int>(j)) / s == doctest::Approx(airy_k_ab(ga.nodes[i], gb.nodes[j], 2.0)).epsilon(1e-9));
    CHECK(bl.kba(static_cast<int>(j), static_cast<int>(i)) / s == doctest::Approx(airy_k_ba(gb.nodes[j], ga.nodes[i], 2.0)).epsilon(1e-9));
    CHECK(extended_airy_kernel(0.3, 1.0, -0.2, 1.0) == doctest::Approx(airy_kernel(0.3, -0.2)));
}

TEST_CASE("joint law limits") {
    for (double b : {-2.0, 0.0, 1.0}) CHECK(std::fabs(joint_cdf(8.0, b, 1.5) - tracy_widom_f2(b)) < 1e-4);
    for (double a : {-2.0, -1.0, 0.0})
        for (double b : {-1.5, 0.5}) CHECK(std::fabs(joint_cdf(a, b, 0.01) - tracy_widom_f2(std::min(a, b))) < 5e-3);
    const TwoPointEngine far(8.0);
    for (double a : {-1.0, 0.0, 1.0})
        for (double b : {-1.0, 0.0, 1.0})
            CHECK(std::fabs(far.joint_cdf(a, b) - tracy_widom_f2(a) * tracy_widom_f2(b)) < 0.02);
}

TEST_CASE("joint law is a monotone probability and stationary") {
    const TwoPointEngine eng(0.8);
    for (double a : {-3.0, -1.5, 0.0})
        for (double b : {-3.0, -1.5, 0.0}) {
            const double h = eng.joint_cdf(a, b);
            CHECK(h >= 0.0);
            CHECK(h <= std::min(tracy_widom_f2(a), tracy_widom_f2(b)) + 1e-9);
            CHECK(eng.joint_cdf(a + 0.5, b) >= h - 1e-12);
            CHECK(eng.joint_cdf(a, b + 0.5) >= h - 1e-12);
            // time reversal: H(a,b) = H(b,a)
            CHECK(h == doctest::Approx(eng.joint_cdf(b, a)).epsilon(1e-8));
        }
}

TEST_CASE("g(y) from both routes agrees") {
    TwoPointGConfig c;
    c.engine.nodes_per_panel = 6;
    c.outer_nodes = 3;
    c.box_lo = -6.0;
    c.box_hi = 4.0;
    c.increment_route_below = 2.0;
    const auto inc = two_point_g(1.0, c);
    c.increment_route_below = 0.5;
    const auto cov = two_point_g(1.0, c);
    CHECK(inc.method == "increment");
    CHECK(cov.method == "covariance");
    CHECK(std::fabs(inc.g - cov.g) < 1e-3);
    CHECK(cov.certification_delta < 1e-6);
    // between the small-y slope and the plateau
    CHECK(cov.g > 0.9);
    CHECK(cov.g < 2 * 0.8132);
}

TEST_CASE("covariance tail coefficient") {
    const auto c = covariance_tail_coefficient();
    CHECK(c.value > 0);
    CHECK(std::fabs(c.value - c.value_doubled_cutoff) < 1e-4);
    // independent numpy evaluation of the same double integral
    CHECK(c.value == doctest::Approx(0.041876).epsilon(1e-3));
}

}  // TEST_SUITE
