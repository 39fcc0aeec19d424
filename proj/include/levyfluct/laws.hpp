#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "levyfluct/ladder.hpp"
#include "levyfluct/measures.hpp"
#include "levyfluct/process.hpp"

namespace levyfluct {

/// An evaluable density whose total mass may be below 1; the mass is carried
/// explicitly. `density` consumes the coordinates in the order of
/// `coordinates`.
struct DefectiveLaw {
    std::vector<std::string> coordinates;
    double mass = 1.0;
    std::function<double(std::span<const double>)> density;
};

/// A validated asymptotic regime with its ladder data and cached constants.
struct RegimeData {
    double alpha = 0.0;
    SpectrallyPositiveBV process;
    LadderData ladder;
    double q = 0.0;
    double q_plus_xi_neg_alpha = 0.0;
};

/// Builds the ladder and validates the standing assumptions (the tail-class
/// diagnostic can be skipped for synthetic regimes in tests).
RegimeData make_regime(const SpectrallyPositiveBV& p, double alpha, const GridSpec& grid,
                       bool check_tail_class = true);

// ---------------------------------------------------------------------------
// finite-barrier triple law (spectrally positive class)
// ---------------------------------------------------------------------------

/// Joint law of (overshoot u, undershoot v, last-maximum undershoot y) at
/// first passage over a finite barrier x, in the fixed normalization:
/// density u_U(x - y) pi(u + v) on {0 <= y <= x, v >= y, u > 0}, plus a
/// singular part at y = x carried by the atom of U at 0. The conditional
/// version divides by the passage probability q U(x, inf).
class FiniteTripleLaw {
  public:
    FiniteTripleLaw(const SpectrallyPositiveBV& p, const LadderData& lad, double x);

    double barrier() const { return x_; }
    /// q U(x, inf)
    double passage_probability() const { return passage_; }

    /// Absolutely continuous part; 0 outside the support.
    double density(double u, double v, double y, bool conditional = true) const;
    /// Density in (u, v) of the singular sheet at y = x (mass of U at 0).
    double barrier_sheet_density(double u, double v, bool conditional = true) const;

    /// Conditional marginal distribution functions (for comparisons with
    /// simulated quintuples).
    double overshoot_cdf(double t) const;
    double undershoot_cdf(double t) const;
    double lastmax_cdf(double t) const;  ///< includes the atom at y = x

    /// Conditional overshoot survival P(u > t | passage).
    double overshoot_survival(double t) const;

    /// Conditional marginal density of the overshoot.
    double overshoot_density(double u) const;

  private:
    double piH_lookup(double t) const;

    SpectrallyPositiveBV process_;
    GridMeasure U_;
    std::function<double(double)> piH_tail_;
    std::vector<double> piH_nodes_;  // PiH(y, inf) at grid nodes
    double q_ = 0.0, x_ = 0.0, passage_ = 0.0;
};

/// Unconditional triple density in the fixed normalization (thin wrapper).
double triple_law_sp(const SpectrallyPositiveBV& p, const LadderData& lad, double x, double u,
                     double v, double y);

// ---------------------------------------------------------------------------
// stable triple law
// ---------------------------------------------------------------------------

/// Normalizing constant sin(g r pi)/pi * Gamma(g + 1)/(Gamma(g r) Gamma(g(1-r)))
/// of the stable triple law, the index substituted into the tilt slot; the
/// normalization integral of the density is the validating check.
double stable_norm_const(double gamma, double rho);

/// Triple density const * (x-y)^{g r - 1} (v-y)^{g(1-r) - 1} / (v+u)^{1+g}
/// on {0 <= y <= x, v >= y, u > 0}; 0 outside.
double triple_law_stable(const StableSpec& s, double x, double u, double v, double y);

// ---------------------------------------------------------------------------
// asymptotic (x -> infinity) laws
// ---------------------------------------------------------------------------

/// Limiting conditional overshoot survival function.
double gbar(const RegimeData& r, double u);

/// Barrier-frame limit law: undershoots measured backward from the barrier.
/// Density (alpha/q) e^{alpha y} pi(u + v) on {y >= 0, v >= y, u > 0}.
double limit_barrier_law(const RegimeData& r, double u, double v, double y);

/// Its overshoot marginal (alpha/q) \int e^{alpha y} pi_H(u + y) dy.
double limit_barrier_overshoot_density(const RegimeData& r, double u);

/// Origin-frame limit law: last maximum theta and pre-passage position phi
/// measured from the origin. Density
/// u_U(theta) alpha^2 (q + xi(-alpha))^2 / q * e^{-alpha(u - phi)} on
/// {theta >= 0, phi <= theta, u > 0} (phi may be negative).
double limit_origin_law(const RegimeData& r, double u, double phi, double theta);

/// Its overshoot marginal alpha e^{-alpha u} (q + xi(-alpha))/q: a defective
/// exponential.
double limit_origin_overshoot_density(const RegimeData& r, double u);

/// The two components of the limiting overshoot survival: passage by an
/// arbitrarily large jump (comp_jump) and passage by a finite jump close to
/// the barrier after a long time (comp_drift_in). Their sum must reproduce
/// gbar; |sum - gbar| > tol throws verify_error.
struct DecompositionCheck {
    double comp_jump = 0.0;
    double comp_drift_in = 0.0;
    double sum = 0.0;
    double gbar_value = 0.0;
};
DecompositionCheck decomposition_check(const RegimeData& r, double u, double tol = 1e-8);

/// Limiting conditional probability of creeping: alpha * drift_H / q.
double creeping_atom(const RegimeData& r);

/// Limiting (defective) distribution function of the last maximum measured
/// from the origin: ((q + xi(-alpha))^2 / q) \int_{[0,z]} e^{alpha t} U(dt).
double last_max_asymptotic(const RegimeData& r, double z);

/// Masses of the three asymptotic passage mechanisms; total must be 1.
struct MassAccounting {
    double jump_component = 0.0;   ///< mass of the barrier-frame overshoot marginal
    double drift_component = 0.0;  ///< mass of the origin-frame overshoot marginal
    double creep_atom = 0.0;
    double total = 0.0;
};
MassAccounting mass_accounting(const RegimeData& r, double tol = 1e-6);

/// Passage probability q U(x, inf) from the grid tail.
/// Throws std::out_of_range beyond the grid (no extrapolation).
double pollaczek_khintchine(const LadderData& lad, double x);

/// Insurance-form specializations: the same limit laws written through the
/// Laplace exponent (psi route) instead of the ladder quantities; they must
/// agree pointwise with the laws above.
double insurance_barrier_law(const RegimeData& r, double u, double v, double y);
double insurance_origin_law(const RegimeData& r, double u, double phi, double theta);

}  // namespace levyfluct
