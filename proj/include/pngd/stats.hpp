#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace pngd::stats {

// sup |F_a - F_b| over the pooled sample, right-continuous empirical CDFs.
double ks_two_sample(std::span<const double> a, std::span<const double> b);
// Asymptotic Kolmogorov tail P(D > d) for sample sizes n, m (m = 0: one-sample).
double ks_pvalue(double d, std::size_t n, std::size_t m = 0);
// One-sample distance for integer data against an integer-supported CDF:
// max_k |F_n(k) - F(k)|, which is the sup over the real line for lattice laws.
double ks_lattice(std::span<const std::int64_t> samples, std::int64_t k_min, std::span<const double> cdf);
// One-sample distance against a continuous CDF.
template <class F>
double ks_continuous(std::vector<double> x, F&& cdf);

// Empirical pmf of integer samples on [k_min, k_min + size).
std::vector<double> empirical_pmf(std::span<const std::int64_t> samples, std::int64_t k_min, std::size_t size);
double total_variation(std::span<const double> p, std::span<const double> q);

struct ChiSquare {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};
// Homogeneity test of two count vectors; adjacent bins are pooled until the
// expected count in every cell is at least min_expected.
ChiSquare chi_square_two_sample(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                double min_expected = 5.0);

template <class F>
double ks_continuous(std::vector<double> x, F&& cdf) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

}  // namespace pngd::stats
