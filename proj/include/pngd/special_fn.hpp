#pragma once

#include <vector>

namespace pngd::special {

// Switch points of the Bessel evaluator. Defaults are the values the tests pin.
struct BesselEvalConfig {
    int series_cutoff_terms = 400;
    // Ascending series at or below this argument; backward recurrence
    // (order >= 0) or the Schlaefli integral (negative order) above it.
    double asymptotic_switch_argument = 12.0;
    double order_derivative_step = 1e-4;

    void validate() const;
};

// Validated regime: x <= kBesselMaxArgument and |nu| <= x + 50 x^{1/3} + 50.
inline constexpr double kBesselMaxArgument = 2.5e4;

struct BesselValue {
    double value = 0.0;
    bool accuracy_loss = false;
};

struct OrderDerivative {
    double value = 0.0;
    double error_estimate = 0.0;
    bool accuracy_loss = false;
};

bool bessel_validated(double order, double x);

double bessel_j(double order, double x, const BesselEvalConfig& cfg = {});
BesselValue bessel_j_checked(double order, double x, const BesselEvalConfig& cfg = {});

// dJ_nu(x)/dnu at nu = n: central differences h and h/2 plus one Richardson step.
double bessel_j_dorder(int order, double x, const BesselEvalConfig& cfg = {});
OrderDerivative bessel_j_dorder_checked(int order, double x, const BesselEvalConfig& cfg = {});

// J_n(x) for every integer n in [n_min, n_max], Miller backward recurrence.
std::vector<double> bessel_j_integer_range(int n_min, int n_max, double x);

// Airy function. Maclaurin series on [-8, 1.5], K-Bessel integral above,
// Hankel-type asymptotics below.
inline constexpr double kAiryMinArgument = -2000.0;
inline constexpr double kAiryMaxArgument = 200.0;

struct AiryValue {
    double ai = 0.0;
    double aip = 0.0;
};

AiryValue airy(double u);
double airy_ai(double u);
double airy_ai_prime(double u);

struct AiryValueLD {
    long double ai = 0.0L;
    long double aip = 0.0L;
};
AiryValueLD airy_ld(long double u);

}  // namespace pngd::special
