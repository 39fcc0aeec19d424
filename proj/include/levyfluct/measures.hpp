#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace levyfluct {

/// One-sided jump intensity on (0, inf): total rate, density and tail of the
/// jump measure, and the per-jump mean. `tail(y)` is the mass of (y, inf);
/// it is nonincreasing with tail(0+) = rate.
struct JumpMeasure {
    double rate = 0.0;
    std::function<double(double)> density;
    std::function<double(double)> tail;
    double mean_jump = 0.0;
    /// Optional family-analytic tilted forms (a, y) -> e^{a y} * tail(y) and
    /// e^{a y} * density(y). Tilted integrands must go through these when the
    /// family provides them: the exponents cancel algebraically, so the
    /// product stays accurate far beyond where tail(y) underflows (it can
    /// still carry mass there) and carries no eps * a * y rounding noise.
    std::function<double(double, double)> tilted_tail_fn;
    std::function<double(double, double)> tilted_density_fn;
};

/// e^{a y} * tail(y), via the family form when available.
double tilted_tail(const JumpMeasure& m, double a, double y);
/// e^{a y} * density(y), likewise.
double tilted_density(const JumpMeasure& m, double a, double y);

/// Checks the JumpMeasure invariants by quadrature; throws config_error
/// naming the first violated one.
void validate_jump_measure(const JumpMeasure& m, double tol = 1e-6);

/// Finite measure on [0, L] discretized on a uniform grid: an exact atom at 0
/// plus density samples at cell midpoints (cell i covers [i*h, (i+1)*h)).
/// Cell values are read as a piecewise-constant density.
struct GridMeasure {
    double step = 0.0;
    double atom0 = 0.0;
    std::vector<double> values;

    double length() const { return step * static_cast<double>(values.size()); }
    std::size_t cells() const { return values.size(); }
    /// atom0 + h * sum(values)
    double mass() const;
    /// Measure of (x, L]; summed far-to-near so deep tails keep relative accuracy.
    double tail_mass(double x) const;
    /// Measure of [0, x] (atom included).
    double cumulative(double x) const;
    /// Piecewise-constant density lookup; 0 outside [0, L).
    double density_at(double x) const;

    static GridMeasure dirac(double step);
    static GridMeasure zero(double step, std::size_t cells);
};

/// Builds a GridMeasure by Simpson cell averages of a density, so each cell
/// carries the correct mass to fourth order.
GridMeasure grid_from_density(double step, std::size_t cells,
                              const std::function<double(double)>& density,
                              double atom0 = 0.0);

/// Discrete convolution of two grid measures with matching steps, including
/// the atom cross terms. Piecewise-constant cell densities convolve to a hat
/// supported on two cells; splitting that hat half/half keeps the operation
/// exactly mass-preserving, commutative and associative. The result has
/// a.cells() + b.cells() cells, so no mass is lost to truncation.
GridMeasure convolve(const GridMeasure& a, const GridMeasure& b);

/// Restriction to the first `cells` cells (exact for series on [0, L]).
GridMeasure truncated(GridMeasure m, std::size_t cells);

/// atom0 + \int e^{s x} m(dx) by midpoint evaluation.
/// Throws std::overflow_error naming s if the accumulation is not finite.
double exp_moment(const GridMeasure& m, double s);

/// Convolution-equivalence diagnostic of a normalized jump law.
struct TailDiagnostic {
    double alpha = 0.0;
    double probe_x = 1.0;
    /// (u, Fbar(u - probe_x)/Fbar(u)); limit e^{alpha * probe_x} in class.
    std::vector<std::pair<double, double>> ratio_curve;
    /// (u, Fbar^{*2}(u)/Fbar(u)); limit 2M in class.
    std::vector<std::pair<double, double>> conv_ratio_curve;
    double M_estimate = 0.0;  ///< \int e^{alpha x} F(dx)
    bool M_finite = false;
    bool consistent = false;  ///< both curves inside the band over the top window
    bool truncated = false;   ///< tail underflowed before the end of u_grid
};

/// Evaluates both ratio curves of the law F = jm / rate over `u_grid` and the
/// exponential moment M. The law is flagged consistent when, over the top
/// window of the grid (u >= window_frac * max u), both curves sit within
/// `band` (relative) of their class limits.
TailDiagnostic tail_ratio_diagnostic(const JumpMeasure& jm, double alpha,
                                     std::span<const double> u_grid, double probe_x = 1.0,
                                     double band = 0.15, double window_frac = 2.0 / 3.0);

}  // namespace levyfluct
