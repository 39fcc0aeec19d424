// Test-side quadrature oracle: tanh-sinh rule, independent of the adaptive
// Simpson used inside the library. Handles endpoint power singularities, which
// the stable triple-law integrals have.
#pragma once

#include <cmath>
#include <functional>

namespace oracle {

// \int_a^b f, tanh-sinh at fixed level (129 nodes per unit level ~ 6).
template <class F>
double tanh_sinh(F&& f, double a, double b, int level = 7) {
    const double c = 0.5 * (b - a), mid = 0.5 * (a + b);
    const double h = 1.0 / static_cast<double>(1 << (level - 2));
    const double tmax = 3.4;
    double sum = 0.0;
    const int kmax = static_cast<int>(tmax / h);
    for (int k = -kmax; k <= kmax; ++k) {
        const double t = k * h;
        const double sh = 0.5 * M_PI * std::sinh(t);
        const double x = std::tanh(sh);
        const double w = 0.5 * M_PI * std::cosh(t) / std::pow(std::cosh(sh), 2);
        const double xx = mid + c * x;
        if (xx <= a || xx >= b) continue;
        const double v = f(xx);
        if (std::isfinite(v)) sum += w * v;
    }
    return sum * c * h;
}

// \int_a^inf f via x = a + t/(1-t).
template <class F>
double tanh_sinh_0inf(F&& f, double a, int level = 7) {
    return tanh_sinh(
        [&](double t) {
            const double om = 1.0 - t;
            return f(a + t / om) / (om * om);
        },
        0.0, 1.0, level);
}

}  // namespace oracle
