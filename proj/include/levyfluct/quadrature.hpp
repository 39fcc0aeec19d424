#pragma once

#include <cmath>
#include <limits>
#include <utility>

namespace levyfluct {

struct QuadResult {
    double value = 0.0;
    bool converged = true;
};

namespace detail {

// Adaptive Simpson with the usual 15x Richardson acceptance test. At depth
// exhaustion a small relative floor distinguishes rounding noise from a
// genuinely unresolved panel.
template <class F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth, bool& ok) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double h6 = (b - a) / 12.0;
    const double left = h6 * (fa + 4.0 * flm + fm);
    const double right = h6 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (!std::isfinite(delta)) {
        ok = false;
        return whole;
    }
    if (std::fabs(delta) <= 15.0 * tol ||
        std::fabs(delta) <= 1e-12 * (std::fabs(left) + std::fabs(right)))
        return left + right + delta / 15.0;
    if (depth <= 0) {
        ok = false;
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, ok) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, ok);
}

}  // namespace detail

/// Adaptive Simpson on a finite interval; `tol` is an absolute target.
template <class F>
QuadResult integrate(F&& f, double a, double b, double tol = 1e-12) {
    if (!(b > a)) return {0.0, true};
    bool ok = true;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm)) return {0.0, false};
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double v = detail::simpson_step(f, a, fa, b, fb, m, fm, whole, tol, 48, ok);
    if (!std::isfinite(v)) ok = false;
    return {v, ok};
}

/// \int_a^\infty f. The near part [a, a+1] is integrated directly; the far
/// part through x = a + 1/s, which keeps x fully accurate as s -> 0 (the
/// t/(1-t) map loses the tail to cancellation). Non-integrable tails (the
/// mapped integrand growing as s -> 0) are reported as converged = false.
template <class F>
QuadResult integrate_to_inf(F&& f, double a, double tol = 1e-12) {
    auto g = [&](double s) {
        const double x = a + 1.0 / s;
        return f(x) / (s * s);
    };
    // Tail probe: |g| must not keep growing as s -> 0.
    double prev = std::fabs(g(1e-4));
    bool growing = true;
    for (double s : {1e-6, 1e-8, 1e-10}) {
        const double cur = std::fabs(g(s));
        if (!std::isfinite(cur)) return {0.0, false};
        if (cur <= prev * 1.5 + 1e-300) growing = false;
        prev = cur;
    }
    if (growing && prev > 1e6) return {0.0, false};

    QuadResult near = integrate(f, a, a + 1.0, 0.5 * tol);
    const double s_min = 1e-13;
    QuadResult far = integrate(g, s_min, 1.0, 0.5 * tol);
    far.value += g(s_min) * s_min;  // remaining strip, rectangle rule
    QuadResult r{near.value + far.value, near.converged && far.converged};
    if (!std::isfinite(r.value) || std::fabs(r.value) > 1e290) r.converged = false;
    return r;
}

}  // namespace levyfluct
