#pragma once

#include <functional>
#include <string>
#include <utility>

#include "levyfluct/measures.hpp"
#include "levyfluct/process.hpp"

namespace levyfluct {

struct GridSpec {
    double step = 0.0;
    double length = 0.0;
};

/// Ladder-height data of a spectrally positive BV model drifting to -infinity,
/// in the fixed normalization where the descending ladder height is a unit
/// drift (so Uhat(dx) = dx) and q = |E X_1|.
struct LadderData {
    double q = 0.0;        ///< killing rate of the ascending ladder
    double drift_H = 0.0;  ///< drift of the ascending ladder height (0 here: no creeping)
    GridMeasure U;         ///< ascending renewal measure on [0, L]
    GridMeasure Uhat;      ///< descending renewal measure: unit density on the grid
    std::function<double(double)> xi;        ///< beta -> xi(beta)
    std::function<double(double)> piH_tail;  ///< y -> PiH(y, inf)
    /// (a, y) -> e^{a y} PiH(y, inf), meaningful far beyond tail underflow
    /// (needed wherever the ladder tail is integrated against e^{alpha y}).
    std::function<double(double, double)> tilted_piH;
};

/// Ascending-ladder Laplace exponent of the BV class:
/// xi(beta) = \int_0^inf (1 - e^{-beta y}) Pi(y, inf) dy (tail form).
/// Throws std::domain_error when the integral diverges.
double xi_bv(const SpectrallyPositiveBV& p, double beta);

/// Ladder jump tail from the jump measure and the Lebesgue descending renewal
/// measure: PiH(y, inf) = \int_y^inf Pi(z, inf) dz, by quadrature.
std::function<double(double)> piH_via_vigon(const SpectrallyPositiveBV& p);

/// (a, y) -> e^{a y} PiH(y, inf) through the family tilted forms.
std::function<double(double, double)> tilted_piH_via_vigon(const SpectrallyPositiveBV& p);

/// General form of the same identity against an explicit descending renewal
/// measure: PiH(y, inf) = \int Pi(y + theta, inf) Uhat(d theta).
double piH_tail_against(const SpectrallyPositiveBV& p, const GridMeasure& uhat, double y);

/// Builds the ladder data. U is the series (1/c) sum_n nu^{*n} with
/// nu(dx) = Pi(x, inf)/c dx, truncated once the geometric tail bound
/// r^{N+1}/(1-r) drops below 1e-12 of the accumulated mass.
/// Requires E X_1 < 0 (equivalently r = mass(nu) < 1).
LadderData build_ladder(const SpectrallyPositiveBV& p, const GridSpec& grid);

/// Consistency gate: (int e^{-beta x} U(dx), beta / psi(beta)).
std::pair<double, double> laplace_U_check(const SpectrallyPositiveBV& p, const LadderData& lad,
                                          double beta);

/// Exponential moment of the renewal measure at +alpha. Implemented as the
/// Stieltjes transform int e^{alpha x} U(dx), which equals 1/(q + xi(-alpha));
/// tilting the cumulative function U([0, x]) instead would diverge. Checks the
/// grid value against the closed form within `check_tol` relative and throws
/// verify_error on disagreement; throws assumption_error when
/// q + xi(-alpha) <= 0.
double mgf_U_alpha(const SpectrallyPositiveBV& p, const LadderData& lad, double alpha,
                   double check_tol = 0.02);

/// Closed-form renewal densities of the strictly stable class:
/// U has density x^{g r - 1} / Gamma(g r), Uhat the same with r -> 1 - r
/// (fixed multiplicative convention).
struct StableRenewal {
    std::function<double(double)> U_density;
    std::function<double(double)> Uhat_density;
};
StableRenewal stable_renewal(const StableSpec& s);

/// CSV export: x, cumulative U[0, x], PiH(x, inf).
void ladder_to_csv(const LadderData& lad, const std::string& path);

/// Standing-assumption report for an asymptotic regime.
struct AssumptionReport {
    bool drift_ok = false;       ///< (i) E X_1 < 0 and positive jump activity
    bool tail_class_ok = false;  ///< (ii) normalized jump law passes the S-class diagnostic
    bool moment_ok = false;      ///< (iii) q + xi(-alpha) > 0
    double q_plus_xi_neg_alpha = 0.0;
    TailDiagnostic diagnostic;
    std::string message;  ///< names the first violated clause, empty if all hold
    bool ok() const { return drift_ok && tail_class_ok && moment_ok; }
};

AssumptionReport check_assumptions(const AsymptoticRegime& r, bool run_tail_diagnostic = true);

/// Throws assumption_error naming the violated clause.
void require_assumptions(const AsymptoticRegime& r, bool run_tail_diagnostic = true);

}  // namespace levyfluct
