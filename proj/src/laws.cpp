#include "levyfluct/laws.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "levyfluct/errors.hpp"
#include "levyfluct/quadrature.hpp"

namespace levyfluct {

RegimeData make_regime(const SpectrallyPositiveBV& p, double alpha, const GridSpec& grid,
                       bool check_tail_class) {
    AsymptoticRegime reg{alpha, p};
    require_assumptions(reg, check_tail_class);
    RegimeData r;
    r.alpha = alpha;
    r.process = p;
    r.ladder = build_ladder(p, grid);
    r.q = r.ladder.q;
    r.q_plus_xi_neg_alpha = r.q + r.ladder.xi(-alpha);
    return r;
}

// ---------------------------------------------------------------------------
// finite-barrier triple law
// ---------------------------------------------------------------------------

FiniteTripleLaw::FiniteTripleLaw(const SpectrallyPositiveBV& p, const LadderData& lad, double x)
    : process_(p), U_(lad.U), piH_tail_(lad.piH_tail), q_(lad.q), x_(x) {
    if (!(x >= 0.0)) throw std::domain_error("FiniteTripleLaw: barrier must be nonnegative");
    if (x >= U_.length())
        throw std::out_of_range("FiniteTripleLaw: barrier beyond the renewal grid");
    passage_ = q_ * U_.tail_mass(x);
    // Tabulate PiH(y, inf) on the grid nodes by backward per-cell Simpson so
    // the marginal evaluators stay O(cells) instead of one quadrature per cell.
    const double h = U_.step;
    const std::size_t n = U_.cells();
    piH_nodes_.assign(n + 1, 0.0);
    piH_nodes_[n] = piH_tail_(U_.length());
    const auto& tail = process_.jumps.tail;
    for (std::size_t i = n; i-- > 0;) {
        const double a = static_cast<double>(i) * h;
        piH_nodes_[i] =
            piH_nodes_[i + 1] + h / 6.0 * (tail(a) + 4.0 * tail(a + 0.5 * h) + tail(a + h));
    }
}

double FiniteTripleLaw::piH_lookup(double t) const {
    if (t <= 0.0) return piH_nodes_.front();
    const double h = U_.step;
    const double pos = t / h;
    const auto k = static_cast<std::size_t>(pos);
    if (k + 1 >= piH_nodes_.size()) return piH_tail_(t);
    const double frac = pos - static_cast<double>(k);
    return piH_nodes_[k] * (1.0 - frac) + piH_nodes_[k + 1] * frac;
}

double FiniteTripleLaw::density(double u, double v, double y, bool conditional) const {
    if (!(u > 0.0) || v < y || y < 0.0 || y > x_) return 0.0;
    const double val = U_.density_at(x_ - y) * process_.jumps.density(u + v);
    return conditional ? val / passage_ : val;
}

double FiniteTripleLaw::barrier_sheet_density(double u, double v, bool conditional) const {
    if (!(u > 0.0) || v < x_) return 0.0;
    const double val = U_.atom0 * process_.jumps.density(u + v);
    return conditional ? val / passage_ : val;
}

// int_{[0,x]} g(y) U(x - dy) = atom0 * g(x) + sum over cells z of U: g(x - z)
// (evaluated at cell midpoints; exact for the piecewise-constant U).
namespace {
template <class G>
double against_U_shifted(const GridMeasure& U, double x, G&& g) {
    double acc = U.atom0 * g(x);
    const double h = U.step;
    const auto kx = static_cast<std::size_t>(std::llround(x / h));
    for (std::size_t i = 0; i < kx && i < U.cells(); ++i)
        acc += h * U.values[i] * g(x - (static_cast<double>(i) + 0.5) * h);
    return acc;
}
}  // namespace

double FiniteTripleLaw::overshoot_survival(double t) const {
    if (t <= 0.0) return 1.0;
    const double s =
        against_U_shifted(U_, x_, [&](double y) { return piH_lookup(t + y); });
    return s / passage_;
}

double FiniteTripleLaw::overshoot_cdf(double t) const { return 1.0 - overshoot_survival(t); }

double FiniteTripleLaw::overshoot_density(double u) const {
    if (!(u > 0.0)) return 0.0;
    const double s =
        against_U_shifted(U_, x_, [&](double y) { return process_.jumps.tail(u + y); });
    return s / passage_;
}

double FiniteTripleLaw::undershoot_cdf(double t) const {
    if (t <= 0.0) return 0.0;
    // P(v <= t) = int U(x - dy) 1_{y <= t} (piH_tail(y) - piH_tail(t)) / passage
    const double pt = piH_lookup(t);
    const double s = against_U_shifted(U_, x_, [&](double y) {
        if (y > t) return 0.0;
        return piH_lookup(y) - pt;
    });
    return s / passage_;
}

double FiniteTripleLaw::lastmax_cdf(double t) const {
    if (t < 0.0) return 0.0;
    // P(y <= t) = int U(x - dy) 1_{y <= t} piH_tail(y) / passage  (atom at y = x
    // enters once t >= x through the atom of U at 0)
    const double s = against_U_shifted(U_, x_, [&](double y) {
        if (y > t) return 0.0;
        return piH_lookup(y);
    });
    return s / passage_;
}

double triple_law_sp(const SpectrallyPositiveBV& p, const LadderData& lad, double x, double u,
                     double v, double y) {
    return FiniteTripleLaw(p, lad, x).density(u, v, y, /*conditional=*/false);
}

// ---------------------------------------------------------------------------
// stable triple law
// ---------------------------------------------------------------------------

double stable_norm_const(double gamma, double rho) {
    StableSpec s{gamma, rho, 1.0, 0.0};
    validate_stable(s);
    return std::sin(gamma * rho * M_PI) / M_PI * std::tgamma(gamma + 1.0) /
           (std::tgamma(gamma * rho) * std::tgamma(gamma * (1.0 - rho)));
}

double triple_law_stable(const StableSpec& s, double x, double u, double v, double y) {
    validate_stable(s);
    if (!(u > 0.0) || v < y || y < 0.0 || y > x) return 0.0;
    const double a = s.index * s.rho, b = s.index * (1.0 - s.rho);
    return stable_norm_const(s.index, s.rho) * std::pow(x - y, a - 1.0) *
           std::pow(v - y, b - 1.0) / std::pow(v + u, 1.0 + s.index);
}

// ---------------------------------------------------------------------------
// asymptotic laws
// ---------------------------------------------------------------------------

double gbar(const RegimeData& r, double u) {
    if (u < 0.0) throw std::domain_error("gbar: u must be nonnegative");
    const double a = r.alpha;
    // int_{(u,inf)} (e^{a y} - e^{a u}) PiH(dy); the ladder jump density is the
    // jump tail in this class
    const double eau = std::exp(a * u);
    auto J = integrate_to_inf(
        [&](double y) {
            return tilted_tail(r.process.jumps, a, y) - eau * r.process.jumps.tail(y);
        },
        u, 1e-12);
    if (!J.converged) throw assumption_error("gbar: tilted ladder tail integral diverges");
    return std::exp(-a * u) / r.q * (r.q_plus_xi_neg_alpha + J.value);
}

double limit_barrier_law(const RegimeData& r, double u, double v, double y) {
    if (!(u > 0.0) || y < 0.0 || v < y) return 0.0;
    return r.alpha / r.q * std::exp(r.alpha * y) * r.process.jumps.density(u + v);
}

double limit_barrier_overshoot_density(const RegimeData& r, double u) {
    if (!(u > 0.0)) return 0.0;
    const double a = r.alpha;
    auto I = integrate_to_inf(
        [&](double y) { return std::exp(-a * u) * tilted_tail(r.process.jumps, a, u + y); },
        0.0, 1e-12);
    if (!I.converged)
        throw assumption_error("limit_barrier_overshoot_density: tilted integral diverges");
    return a / r.q * I.value;
}

double limit_origin_law(const RegimeData& r, double u, double phi, double theta) {
    if (!(u > 0.0) || theta < 0.0 || phi > theta) return 0.0;
    const double a = r.alpha, k = r.q_plus_xi_neg_alpha;
    return r.ladder.U.density_at(theta) * a * a * k * k / r.q * std::exp(-a * (u - phi));
}

double limit_origin_overshoot_density(const RegimeData& r, double u) {
    if (!(u > 0.0)) return 0.0;
    return r.alpha * std::exp(-r.alpha * u) * r.q_plus_xi_neg_alpha / r.q;
}

DecompositionCheck decomposition_check(const RegimeData& r, double u, double tol) {
    if (u < 0.0) throw std::domain_error("decomposition_check: u must be nonnegative");
    DecompositionCheck c;
    const double a = r.alpha;
    // jump component through the ladder tail (iterated integral; independent of
    // the direct density form used by gbar):
    // e^{a w} PiH(u+w, inf) = e^{-a u} * [e^{a(u+w)} PiH(u+w, inf)]
    const auto& tilted_piH = r.ladder.tilted_piH;
    const double eau = std::exp(-a * u);
    auto I = integrate_to_inf([&](double w) { return eau * tilted_piH(a, u + w); }, 0.0, 1e-11);
    if (!I.converged) throw assumption_error("decomposition_check: tilted integral diverges");
    c.comp_jump = a / r.q * I.value;
    c.comp_drift_in = std::exp(-a * u) * r.q_plus_xi_neg_alpha / r.q;
    c.sum = c.comp_jump + c.comp_drift_in;
    c.gbar_value = gbar(r, u);
    if (std::fabs(c.sum - c.gbar_value) > tol) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "decomposition_check: components %.12g + %.12g = %.12g but gbar(%.6g) = "
                      "%.12g",
                      c.comp_jump, c.comp_drift_in, c.sum, u, c.gbar_value);
        throw verify_error(buf);
    }
    return c;
}

double creeping_atom(const RegimeData& r) { return r.alpha * r.ladder.drift_H / r.q; }

double last_max_asymptotic(const RegimeData& r, double z) {
    if (z < 0.0) throw std::domain_error("last_max_asymptotic: z must be nonnegative");
    const double a = r.alpha, k = r.q_plus_xi_neg_alpha;
    const GridMeasure& U = r.ladder.U;
    double acc = U.atom0;
    const double h = U.step;
    const double zc = std::min(z, U.length());
    const auto kz = static_cast<std::size_t>(zc / h);
    for (std::size_t i = 0; i < kz && i < U.cells(); ++i)
        acc += h * U.values[i] * std::exp(a * (static_cast<double>(i) + 0.5) * h);
    return k * k / r.q * acc;
}

MassAccounting mass_accounting(const RegimeData& r, double tol) {
    MassAccounting m;
    const double a = r.alpha;
    const auto& tilted_piH = r.ladder.tilted_piH;
    auto I = integrate_to_inf([&](double y) { return tilted_piH(a, y); }, 0.0, 1e-11);
    if (!I.converged) throw assumption_error("mass_accounting: tilted ladder integral diverges");
    m.jump_component = a / r.q * I.value;
    m.drift_component = r.q_plus_xi_neg_alpha / r.q;
    m.creep_atom = creeping_atom(r);
    m.total = m.jump_component + m.drift_component + m.creep_atom;
    if (std::fabs(m.total - 1.0) > tol) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "mass_accounting: jump %.12g + drift-in %.12g + creep %.12g = %.12g != 1",
                      m.jump_component, m.drift_component, m.creep_atom, m.total);
        throw verify_error(buf);
    }
    return m;
}

double pollaczek_khintchine(const LadderData& lad, double x) {
    if (x < 0.0) throw std::domain_error("pollaczek_khintchine: x must be nonnegative");
    if (x > lad.U.length())
        throw std::out_of_range(
            "pollaczek_khintchine: x beyond the renewal grid; extrapolation refused");
    return lad.q * lad.U.tail_mass(x);
}

double insurance_barrier_law(const RegimeData& r, double u, double v, double y) {
    if (!(u > 0.0) || y < 0.0 || v < y) return 0.0;
    const double abs_mean = -mean_x1(r.process);
    return r.alpha / abs_mean * std::exp(r.alpha * y) * r.process.jumps.density(u + v);
}

double insurance_origin_law(const RegimeData& r, double u, double phi, double theta) {
    if (!(u > 0.0) || theta < 0.0 || phi > theta) return 0.0;
    const double abs_mean = -mean_x1(r.process);
    const double psi = laplace_exponent(r.process, -r.alpha);
    return psi * psi / abs_mean * std::exp(-r.alpha * (u - phi)) *
           r.ladder.U.density_at(theta);
}

}  // namespace levyfluct
