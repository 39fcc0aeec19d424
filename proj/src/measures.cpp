#include "levyfluct/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "levyfluct/errors.hpp"
#include "levyfluct/parallel.hpp"
#include "levyfluct/quadrature.hpp"

namespace levyfluct {

double tilted_tail(const JumpMeasure& m, double a, double y) {
    if (m.tilted_tail_fn) return m.tilted_tail_fn(a, y);
    const double t = m.tail(y);
    return t <= 0.0 ? 0.0 : std::exp(a * y) * t;
}

double tilted_density(const JumpMeasure& m, double a, double y) {
    if (m.tilted_density_fn) return m.tilted_density_fn(a, y);
    const double d = m.density(y);
    return d <= 0.0 ? 0.0 : std::exp(a * y) * d;
}

void validate_jump_measure(const JumpMeasure& m, double tol) {
    if (!(m.rate >= 0.0) || !std::isfinite(m.rate))
        throw config_error("jump measure: rate must be a finite nonnegative real");
    if (m.rate == 0.0) return;
    const double t0 = m.tail(1e-12);
    if (std::fabs(t0 - m.rate) > tol * m.rate)
        throw config_error("jump measure: tail(0+) must equal the total rate");
    auto dens = integrate_to_inf([&](double y) { return m.density(y); }, 0.0, tol * 1e-3);
    if (!dens.converged || std::fabs(dens.value - m.rate) > tol * m.rate)
        throw config_error("jump measure: density must integrate to the total rate");
    double prev = t0;
    for (double y : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double ty = m.tail(y);
        if (ty > prev * (1.0 + 1e-12))
            throw config_error("jump measure: tail must be nonincreasing");
        prev = ty;
        auto part = integrate_to_inf([&](double z) { return m.density(z); }, y, tol * 1e-3);
        if (part.converged && std::fabs(part.value - ty) > tol * std::max(1.0, m.rate))
            throw config_error("jump measure: tail(y) must match the integral of the density");
    }
    auto mean = integrate_to_inf([&](double y) { return m.tail(y); }, 0.0, tol * 1e-3);
    if (!mean.converged || std::fabs(mean.value - m.rate * m.mean_jump) >
                               tol * std::max(1.0, m.rate * m.mean_jump))
        throw config_error("jump measure: mean_jump must match \\int tail / rate");
}

double GridMeasure::mass() const {
    double s = 0.0;
    for (double v : values) s += v;
    return atom0 + step * s;
}

double GridMeasure::tail_mass(double x) const {
    if (x < 0.0) return mass();
    const std::size_t n = values.size();
    if (x >= length()) return 0.0;
    const auto k = static_cast<std::size_t>(x / step);
    double s = 0.0;
    for (std::size_t i = n; i-- > k + 1;) s += values[i];
    s *= step;
    if (k < n) s += values[k] * (static_cast<double>(k + 1) * step - x);
    return s;
}

double GridMeasure::cumulative(double x) const {
    if (x < 0.0) return 0.0;
    return mass() - tail_mass(x);
}

double GridMeasure::density_at(double x) const {
    if (x < 0.0 || x >= length()) return 0.0;
    return values[static_cast<std::size_t>(x / step)];
}

GridMeasure GridMeasure::dirac(double step) { return GridMeasure{step, 1.0, {}}; }

GridMeasure GridMeasure::zero(double step, std::size_t cells) {
    return GridMeasure{step, 0.0, std::vector<double>(cells, 0.0)};
}

GridMeasure grid_from_density(double step, std::size_t cells,
                              const std::function<double(double)>& density, double atom0) {
    if (!(step > 0.0)) throw config_error("grid measure: step must be positive");
    GridMeasure m{step, atom0, std::vector<double>(cells)};
    for (std::size_t i = 0; i < cells; ++i) {
        const double a = static_cast<double>(i) * step;
        const double cellmass =
            step / 6.0 * (density(a) + 4.0 * density(a + 0.5 * step) + density(a + step));
        m.values[i] = cellmass / step;
    }
    return m;
}

GridMeasure convolve(const GridMeasure& a, const GridMeasure& b) {
    if (a.step != b.step)
        throw config_error("convolve: grid steps differ; measures are not convolvable");
    const double h = a.step;
    const std::size_t na = a.cells(), nb = b.cells();
    const std::size_t m = na + nb;
    GridMeasure out{h, a.atom0 * b.atom0, std::vector<double>(m, 0.0)};
    if (na > 0 && nb > 0) {
        // p_k = sum_{i+j=k} a_i b_j; cell k receives h*(p_k + p_{k-1})/2.
        // b is pre-reversed so both factors stream with unit stride.
        std::vector<double> brev(b.values.rbegin(), b.values.rend());
        std::vector<double> p(na + nb - 1, 0.0);
        parallel_blocks(p.size(), 2048, [&](std::size_t k0, std::size_t k1) {
            const double* av = a.values.data();
            const double* bv = brev.data();
            for (std::size_t k = k0; k < k1; ++k) {
                const std::size_t ilo = k >= nb ? k - nb + 1 : 0;
                const std::size_t ihi = std::min(k + 1, na);
                const std::ptrdiff_t off =
                    static_cast<std::ptrdiff_t>(nb - 1) - static_cast<std::ptrdiff_t>(k);
                // four independent partial sums keep the FMA pipeline full
                // (fixed summation order: results stay bit-stable)
                double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
                std::size_t i = ilo;
                for (; i + 4 <= ihi; i += 4) {
                    const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + off;
                    s0 += av[i] * bv[j];
                    s1 += av[i + 1] * bv[j + 1];
                    s2 += av[i + 2] * bv[j + 2];
                    s3 += av[i + 3] * bv[j + 3];
                }
                for (; i < ihi; ++i) s0 += av[i] * bv[static_cast<std::ptrdiff_t>(i) + off];
                p[k] = (s0 + s1) + (s2 + s3);
            }
        });
        out.values[0] = 0.5 * h * p[0];
        for (std::size_t k = 1; k < m; ++k) {
            double s = k < p.size() ? p[k] : 0.0;
            s += p[k - 1];
            out.values[k] = 0.5 * h * s;
        }
    }
    // atom cross terms: a.atom0 * b and b.atom0 * a land on the same cells
    for (std::size_t k = 0; k < nb; ++k) out.values[k] += a.atom0 * b.values[k];
    for (std::size_t k = 0; k < na; ++k) out.values[k] += b.atom0 * a.values[k];
    return out;
}

GridMeasure truncated(GridMeasure m, std::size_t cells) {
    if (m.values.size() > cells) m.values.resize(cells);
    return m;
}

double exp_moment(const GridMeasure& m, double s) {
    const double bound = s * m.length();  // only positive tilts can overflow
    if (bound > 690.0) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "exp_moment: |s| * L = %.3g overflows double range at s = %.17g", bound, s);
        throw std::overflow_error(buf);
    }
    double acc = m.atom0;
    const double h = m.step;
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        acc += h * m.values[i] * std::exp(s * (static_cast<double>(i) + 0.5) * h);
    }
    if (!std::isfinite(acc)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "exp_moment: accumulation not finite at s = %.17g", s);
        throw std::overflow_error(buf);
    }
    return acc;
}

TailDiagnostic tail_ratio_diagnostic(const JumpMeasure& jm, double alpha,
                                     std::span<const double> u_grid, double probe_x,
                                     double band, double window_frac) {
    if (jm.rate <= 0.0) throw config_error("tail diagnostic: jump measure has zero rate");
    TailDiagnostic d;
    d.alpha = alpha;
    d.probe_x = probe_x;
    auto Fbar = [&](double u) { return u <= 0.0 ? 1.0 : jm.tail(u) / jm.rate; };
    auto f = [&](double u) { return jm.density(u) / jm.rate; };

    auto M = integrate_to_inf([&](double x) { return tilted_density(jm, alpha, x) / jm.rate; },
                              0.0, 1e-10);
    d.M_finite = M.converged;
    d.M_estimate = M.converged ? M.value : std::numeric_limits<double>::infinity();

    double u_max = 0.0;
    for (double u : u_grid) {
        const double t = Fbar(u);
        if (t < 1e-290) {  // tail underflow: stop reporting
            d.truncated = true;
            break;
        }
        d.ratio_curve.emplace_back(u, Fbar(u - probe_x) / t);
        // Fbar2(u) = 2 \int_0^{u/2} Fbar(u-z) f(z) dz + Fbar(u/2)^2, exact for
        // continuous laws; every term is positive so deep tails keep relative
        // accuracy.
        auto part = integrate([&](double z) { return Fbar(u - z) * f(z); }, 0.0, 0.5 * u,
                              1e-6 * t);
        const double conv_tail = 2.0 * part.value + Fbar(0.5 * u) * Fbar(0.5 * u);
        d.conv_ratio_curve.emplace_back(u, conv_tail / t);
        u_max = std::max(u_max, u);
    }

    if (d.M_finite && !d.ratio_curve.empty()) {
        const double lo = window_frac * u_max;
        const double ratio_target = std::exp(alpha * probe_x);
        const double conv_target = 2.0 * d.M_estimate;
        bool ok = false, any = false;
        for (std::size_t k = 0; k < d.ratio_curve.size(); ++k) {
            if (d.ratio_curve[k].first < lo) continue;
            any = true;
            ok = std::fabs(d.ratio_curve[k].second / ratio_target - 1.0) <= band &&
                 std::fabs(d.conv_ratio_curve[k].second / conv_target - 1.0) <= band;
            if (!ok) break;
        }
        d.consistent = any && ok;
    }
    return d;
}

}  // namespace levyfluct
