#include "levyfluct/ladder.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "levyfluct/errors.hpp"
#include "levyfluct/quadrature.hpp"

namespace levyfluct {

double xi_bv(const SpectrallyPositiveBV& p, double beta) {
    if (p.jumps.rate == 0.0) return 0.0;
    auto r = integrate_to_inf(
        [&](double y) { return p.jumps.tail(y) - tilted_tail(p.jumps, -beta, y); }, 0.0, 1e-12);
    if (!r.converged) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "xi: tilt integral diverges at beta = %.6g", beta);
        throw std::domain_error(buf);
    }
    return r.value;
}

std::function<double(double)> piH_via_vigon(const SpectrallyPositiveBV& p) {
    JumpMeasure jm = p.jumps;
    return [jm](double y) {
        if (jm.rate == 0.0) return 0.0;
        if (y < 0.0) y = 0.0;
        auto r = integrate_to_inf([&](double z) { return jm.tail(z); }, y, 1e-13);
        return r.converged ? r.value : 0.0;
    };
}

std::function<double(double, double)> tilted_piH_via_vigon(const SpectrallyPositiveBV& p) {
    // e^{a y} PiH(y, inf) = \int_0^inf e^{-a t} [e^{a(y+t)} tail(y+t)] dt: the
    // bracket goes through the family tilted form, so the value stays
    // meaningful where the plain tail underflows.
    JumpMeasure jm = p.jumps;
    return [jm](double a, double y) {
        if (jm.rate == 0.0) return 0.0;
        if (y < 0.0) y = 0.0;
        // factor out the local scale so the quadrature is relative-accurate at
        // any depth (the raw value spans hundreds of orders of magnitude)
        const double scale = tilted_tail(jm, a, y);
        if (scale <= 0.0) return 0.0;
        auto r = integrate_to_inf(
            [&](double t) { return std::exp(-a * t) * tilted_tail(jm, a, y + t) / scale; },
            0.0, 1e-13);
        return r.converged ? scale * r.value : std::numeric_limits<double>::quiet_NaN();
    };
}

double piH_tail_against(const SpectrallyPositiveBV& p, const GridMeasure& uhat, double y) {
    // sum over uhat cells of Pi(y + theta, inf) * cell mass (+ atom at 0)
    double acc = uhat.atom0 * p.jumps.tail(y);
    const double h = uhat.step;
    for (std::size_t i = 0; i < uhat.cells(); ++i)
        acc += h * uhat.values[i] * p.jumps.tail(y + (static_cast<double>(i) + 0.5) * h);
    return acc;
}

LadderData build_ladder(const SpectrallyPositiveBV& p, const GridSpec& grid) {
    validate_sp_bv(p);
    if (!(grid.step > 0.0) || !(grid.length > grid.step))
        throw config_error("build_ladder: grid step/length invalid");
    const double mean = mean_x1(p);
    if (!(mean < 0.0))
        throw config_error(
            "build_ladder: E X_1 must be negative (drift to -infinity); equivalently the "
            "series ratio r = mass(nu) must be below 1");

    const double c = p.drift_down;
    const auto n = static_cast<std::size_t>(std::llround(grid.length / grid.step));

    LadderData lad;
    lad.q = -mean;
    lad.drift_H = 0.0;
    lad.Uhat = GridMeasure{grid.step, 0.0, std::vector<double>(n, 1.0)};

    // nu(dx) = Pi(x, inf)/c dx; cell masses by Simpson averages
    GridMeasure nu =
        p.jumps.rate > 0.0
            ? grid_from_density(grid.step, n, [&](double x) { return p.jumps.tail(x) / c; }, 0.0)
            : GridMeasure::zero(grid.step, n);
    const double r = nu.mass();
    if (r >= 1.0)
        throw config_error("build_ladder: series ratio r >= 1; model does not drift to -infinity");

    GridMeasure acc = GridMeasure::zero(grid.step, n);
    if (p.jumps.rate > 0.0 && r > 0.0) {
        // Truncation index: the geometric tail bound r^{N+1}/(1-r) must drop
        // below 1e-12 of the accumulated mass ~ 1/(1-r), i.e. r^{N+1} <= 1e-12.
        const auto N = static_cast<unsigned long>(
            std::ceil(-12.0 * std::log(10.0) / std::log(r)));
        // S_N = sum_{k=1..N} nu^{*k} by binary splitting: per doubling
        // S_{2m} = S_m + P_m * S_m with P_m = nu^{*m}; restriction to [0, L]
        // is exact because all supports live on [0, inf).
        GridMeasure S = nu, P = nu;
        unsigned long top = 1;
        while (top * 2 <= N) top *= 2;
        for (unsigned long bit = top >> 1; bit >= 1; bit >>= 1) {
            GridMeasure PS = truncated(convolve(P, S), n);
            for (std::size_t i = 0; i < n; ++i) S.values[i] += PS.values[i];
            P = truncated(convolve(P, P), n);
            if (N & bit) {
                GridMeasure nuS = truncated(convolve(nu, S), n);
                for (std::size_t i = 0; i < n; ++i) S.values[i] = nu.values[i] + nuS.values[i];
                P = truncated(convolve(P, nu), n);
            }
        }
        acc = std::move(S);
    }
    lad.U = GridMeasure{grid.step, 1.0 / c, std::move(acc.values)};
    for (double& v : lad.U.values) v /= c;

    SpectrallyPositiveBV copy = p;
    lad.xi = [copy](double beta) { return xi_bv(copy, beta); };
    lad.piH_tail = piH_via_vigon(p);
    lad.tilted_piH = tilted_piH_via_vigon(p);
    return lad;
}

std::pair<double, double> laplace_U_check(const SpectrallyPositiveBV& p, const LadderData& lad,
                                          double beta) {
    if (!(beta > 0.0)) throw std::domain_error("laplace_U_check: beta must be positive");
    return {exp_moment(lad.U, -beta), beta / laplace_exponent(p, beta)};
}

double mgf_U_alpha(const SpectrallyPositiveBV& p, const LadderData& lad, double alpha,
                   double check_tol) {
    double qpxi;
    try {
        qpxi = lad.q + lad.xi(-alpha);
    } catch (const std::domain_error&) {
        throw assumption_error(
            "mgf_U_alpha: xi(-alpha) diverges; alpha exceeds the jump moment radius "
            "(assumption (iii) q + xi(-alpha) > 0 cannot hold)");
    }
    if (!(qpxi > 0.0))
        throw assumption_error("mgf_U_alpha: q + xi(-alpha) <= 0 violates assumption (iii)");
    const double grid_value = exp_moment(lad.U, alpha);
    const double closed = 1.0 / qpxi;
    if (std::fabs(grid_value / closed - 1.0) > check_tol) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "mgf_U_alpha: grid transform %.10g disagrees with 1/(q+xi(-alpha)) = %.10g "
                      "beyond %.2g relative",
                      grid_value, closed, check_tol);
        throw verify_error(buf);
    }
    return grid_value;
}

StableRenewal stable_renewal(const StableSpec& s) {
    validate_stable(s);
    const double a = s.index * s.rho;
    const double b = s.index * (1.0 - s.rho);
    const double ga = std::tgamma(a), gb = std::tgamma(b);
    return StableRenewal{
        [a, ga](double x) { return x <= 0.0 ? 0.0 : std::pow(x, a - 1.0) / ga; },
        [b, gb](double x) { return x <= 0.0 ? 0.0 : std::pow(x, b - 1.0) / gb; },
    };
}

void ladder_to_csv(const LadderData& lad, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("ladder_to_csv: cannot open " + path);
    out << "x,U_cumulative,piH_tail\n";
    char buf[128];
    const double h = lad.U.step;
    double cum = lad.U.atom0;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", 0.0, cum, lad.piH_tail(0.0));
    out << buf;
    for (std::size_t i = 0; i < lad.U.cells(); ++i) {
        const double x = (static_cast<double>(i) + 1.0) * h;
        cum += h * lad.U.values[i];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x, cum, lad.piH_tail(x));
        out << buf;
    }
}

AssumptionReport check_assumptions(const AsymptoticRegime& r, bool run_tail_diagnostic) {
    AssumptionReport rep;
    if (!(r.alpha > 0.0)) {
        rep.message = "alpha must be positive";
        return rep;
    }
    const double mean = mean_x1(r.process);
    rep.drift_ok = mean < 0.0 && r.process.jumps.rate > 0.0;
    if (!rep.drift_ok) {
        rep.message = "assumption (i): X must drift to -infinity (E X_1 < 0) and have "
                      "positive upward jump activity";
        return rep;
    }
    try {
        rep.q_plus_xi_neg_alpha = -mean + xi_bv(r.process, -r.alpha);
        rep.moment_ok = rep.q_plus_xi_neg_alpha > 0.0;
    } catch (const std::domain_error&) {
        rep.moment_ok = false;
    }
    if (!rep.moment_ok) {
        rep.message = "assumption (iii): q + xi(-alpha) must be positive and finite";
        return rep;
    }
    if (run_tail_diagnostic) {
        std::vector<double> ugrid;
        for (double u = 1.0; u <= 30.0; u += 0.5) ugrid.push_back(u);
        rep.diagnostic = tail_ratio_diagnostic(r.process.jumps, r.alpha, ugrid);
        rep.tail_class_ok = rep.diagnostic.consistent;
        if (!rep.tail_class_ok) {
            rep.message = "assumption (ii): the normalized jump law failed the "
                          "convolution-equivalence tail diagnostic at this alpha "
                          "(ratio curves not within band of e^{alpha x} and 2M)";
            return rep;
        }
    } else {
        rep.tail_class_ok = true;
    }
    return rep;
}

void require_assumptions(const AsymptoticRegime& r, bool run_tail_diagnostic) {
    const auto rep = check_assumptions(r, run_tail_diagnostic);
    if (!rep.ok()) throw assumption_error(rep.message);
}

}  // namespace levyfluct
