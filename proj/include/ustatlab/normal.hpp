#ifndef USTATLAB_NORMAL_HPP
#define USTATLAB_NORMAL_HPP

#include <cmath>

namespace ustatlab {

/// Standard normal distribution function via the complementary error
/// function; absolute error well below 1e-12 on |z| <= 8 and monotone.
inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z * 0.7071067811865475244);
}

/// Scaled complementary error function e^{x^2} erfc(x) for x >= -27.
/// Direct product up to 12 (both factors representable), asymptotic series
/// beyond, reflection 2 e^{x^2} - erfcx(-x) for negative arguments.
inline double erfcx(double x) {
    if (x < 0.0) {
        // reflection; e^{x^2} overflows only past |x| ~ 26.6
        return 2.0 * std::exp(x * x) - erfcx(-x);
    }
    if (x <= 12.0) {
        return std::exp(x * x) * std::erfc(x);
    }
    // erfcx(x) ~ (1/(x sqrt(pi))) sum (-1)^m (2m-1)!! / (2x^2)^m
    double q = 1.0 / (2.0 * x * x);
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m <= 12; ++m) {
        term *= -q * (2 * m - 1);
        sum += term;
        if (std::abs(term) < 1e-18) break;
    }
    return sum / (x * 1.7724538509055160273);
}

}  // namespace ustatlab

#endif
