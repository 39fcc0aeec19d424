#pragma once

#include "levyfluct/measures.hpp"

namespace levyfluct {

/// Spectrally positive process of bounded variation:
/// X_t = (compound Poisson jumps with measure `jumps`) - drift_down * t.
struct SpectrallyPositiveBV {
    double drift_down = 0.0;  ///< c > 0
    JumpMeasure jumps;
};

/// Compound Poisson jumps both ways plus drift; feeds the simulator only.
struct TwoSidedCPP {
    double drift = 0.0;
    JumpMeasure up_jumps;
    JumpMeasure down_jumps;
};

/// Strictly stable process parameterized by (index, positivity parameter).
struct StableSpec {
    double index = 0.0;   ///< gamma in (0, 2)
    double rho = 0.0;     ///< P(X_1 >= 0) in (0, 1)
    double cplus = 1.0;
    double cminus = 0.0;
};

/// Semi-heavy-tail regime: a spectrally positive model together with the
/// exponential index alpha of its jump tail class.
struct AsymptoticRegime {
    double alpha = 0.0;
    SpectrallyPositiveBV process;
};

void validate_sp_bv(const SpectrallyPositiveBV& p);
void validate_two_sided(const TwoSidedCPP& p);
void validate_stable(const StableSpec& s);

/// psi(beta) = log E e^{-beta X_1} = c beta - \int (1 - e^{-beta x}) Pi(dx),
/// computed from the jump density. Throws std::domain_error (reporting the
/// approximate maximal admissible beta) when the tilt integral diverges.
double laplace_exponent(const SpectrallyPositiveBV& p, double beta);

/// E X_1 = rate * mean_jump - c.
double mean_x1(const SpectrallyPositiveBV& p);

/// Largest root beta >= 0 of psi(beta) = a, to 1e-12. Requires a >= 0;
/// equals 0 at a = 0 whenever E X_1 < 0.
double phi_inverse(const SpectrallyPositiveBV& p, double a);

}  // namespace levyfluct
