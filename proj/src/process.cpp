#include "levyfluct/process.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "levyfluct/errors.hpp"
#include "levyfluct/quadrature.hpp"

namespace levyfluct {

void validate_sp_bv(const SpectrallyPositiveBV& p) {
    if (!(p.drift_down > 0.0))
        throw config_error("spectrally positive model: downward drift rate c must be positive "
                           "(zero drift would make X a compound Poisson process, which is not "
                           "admitted)");
    if (p.jumps.rate < 0.0)
        throw config_error("spectrally positive model: jump rate must be nonnegative");
}

void validate_two_sided(const TwoSidedCPP& p) {
    if (p.up_jumps.rate <= 0.0 && p.down_jumps.rate <= 0.0)
        throw config_error("two-sided model: at least one jump component must have positive rate");
}

void validate_stable(const StableSpec& s) {
    if (!(s.index > 0.0 && s.index < 2.0))
        throw config_error("stable model: index must lie in (0, 2)");
    if (!(s.rho > 0.0 && s.rho < 1.0))
        throw config_error("stable model: positivity parameter rho must lie in (0, 1)");
    if (!(s.cplus > 0.0))
        throw config_error("stable model: c+ must be positive");
    const double a = s.index * s.rho, b = s.index * (1.0 - s.rho);
    if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0))
        throw config_error("stable model: index*rho and index*(1-rho) must lie in (0, 1)");
}

namespace {

// \int (1 - e^{-beta x}) Pi(dx), density form; the tilted part goes through
// the log-robust evaluator so deep tails neither overflow nor vanish.
QuadResult tilt_integral(const SpectrallyPositiveBV& p, double beta) {
    if (p.jumps.rate == 0.0) return {0.0, true};
    return integrate_to_inf(
        [&](double x) { return p.jumps.density(x) - tilted_density(p.jumps, -beta, x); }, 0.0,
        1e-12);
}

}  // namespace

double laplace_exponent(const SpectrallyPositiveBV& p, double beta) {
    auto ti = tilt_integral(p, beta);
    if (!ti.converged) {
        // bisect for the approximate convergence boundary so the error is useful
        double bad = beta, good = 0.0;
        for (int k = 0; k < 30; ++k) {
            const double mid = 0.5 * (bad + good);
            if (tilt_integral(p, mid).converged)
                good = mid;
            else
                bad = mid;
        }
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "laplace_exponent: tilt integral diverges at beta = %.6g; "
                      "maximal admissible beta is approximately %.6g",
                      beta, good);
        throw std::domain_error(buf);
    }
    return p.drift_down * beta - ti.value;
}

double mean_x1(const SpectrallyPositiveBV& p) {
    return p.jumps.rate * p.jumps.mean_jump - p.drift_down;
}

double phi_inverse(const SpectrallyPositiveBV& p, double a) {
    if (a < 0.0) throw std::domain_error("phi_inverse: argument must be nonnegative");
    const double mean = mean_x1(p);
    if (a == 0.0 && mean < 0.0) return 0.0;
    if (a == 0.0 && mean >= 0.0)
        throw std::domain_error("phi_inverse: a = 0 requires E X_1 < 0");
    // psi is convex with psi(0) = 0; find the largest root of psi = a by
    // bracketing to the right of the minimum.
    double hi = 1.0;
    for (int k = 0; k < 200 && laplace_exponent(p, hi) <= a; ++k) hi *= 2.0;
    if (laplace_exponent(p, hi) <= a) throw std::domain_error("phi_inverse: no bracket found");
    double lo = 0.0;
    if (mean >= 0.0) {
        // move lo right of the convex minimum: halve down from hi while psi > a
        lo = hi;
        while (lo > 1e-300 && laplace_exponent(p, lo) > a) lo *= 0.5;
        if (!(lo > 0.0)) throw std::domain_error("phi_inverse: no bracket found");
    }
    for (int k = 0; k < 200 && hi - lo > 1e-12 * (1.0 + hi); ++k) {
        const double mid = 0.5 * (lo + hi);
        if (laplace_exponent(p, mid) < a)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace levyfluct
