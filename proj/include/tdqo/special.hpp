#pragma once

#include <cmath>

#include "tdqo/grid.hpp"

namespace tdqo {

// Dawson integral F(x) = e^{-x^2} integral_0^x e^{u^2} du.
// Taylor series near zero, Rybicki's sampling expansion elsewhere
// (h = 0.25 keeps the sampling error below ~1e-17).
inline double dawson(double x) {
    const double ax = std::abs(x);
    if (ax < 0.2) {
        const double y = x * x;
        // F(x) = x (1 - 2y/3 + 4y^2/15 - 8y^3/105 + 16y^4/945 - ...)
        return x * (1.0 + y * (-2.0 / 3.0 +
                    y * (4.0 / 15.0 +
                    y * (-8.0 / 105.0 +
                    y * (16.0 / 945.0 +
                    y * (-32.0 / 10395.0 +
                    y * (64.0 / 135135.0)))))));
    }
    const double h = 0.25;
    const double reach = 7.0;  // e^{-49} ~ 5e-22
    const long n_lo = static_cast<long>(std::floor((ax - reach) / h));
    const long n_hi = static_cast<long>(std::ceil((ax + reach) / h));
    double sum = 0.0;
    for (long n = n_lo | 1L; n <= n_hi; n += 2) {
        const double d = ax - n * h;
        sum += std::exp(-d * d) / static_cast<double>(n);
    }
    const double val = sum / std::sqrt(pi);
    return x < 0.0 ? -val : val;
}

// Scaled complementary error function e^{x^2} erfc(x) for x >= 0.
inline double erfcx(double x) {
    if (x < 0.0) throw error("erfcx: negative argument unsupported");
    if (x <= 20.0) return std::exp(x * x) * std::erfc(x);
    // Asymptotic series, error below the last kept term.
    const double y = 1.0 / (2.0 * x * x);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 6; ++k) {
        term *= -(2.0 * k - 1.0) * y;
        sum += term;
    }
    return sum / (x * std::sqrt(pi));
}

}  // namespace tdqo
