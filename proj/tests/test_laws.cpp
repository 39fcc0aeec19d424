#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "fixtures.hpp"
#include "levyfluct/errors.hpp"
#include "levyfluct/laws.hpp"
#include "oracle.hpp"

using namespace levyfluct;
using fixtures::tp_q;
using fixtures::tp_qpxi;

namespace {

// synthetic regime with a creeping ladder: drift_H > 0 folded consistently
// into q + xi(-alpha)
RegimeData synthetic_creeping_regime(double drift_H) {
    RegimeData r = fixtures::tp_regime_coarse();
    r.ladder.drift_H = drift_H;
    r.q_plus_xi_neg_alpha -= drift_H * r.alpha;
    return r;
}

}  // namespace

TEST_CASE("make_regime validates the standing assumptions") {
    CHECK_THROWS_AS(make_regime(fixtures::exp_model(), 0.4, GridSpec{0.125, 16.0}),
                    assumption_error);
    CHECK_NOTHROW(make_regime(fixtures::tp_model(), 1.0, GridSpec{0.125, 16.0}));
}

// ---------------------------------------------------------------------------
// finite-barrier triple law
// ---------------------------------------------------------------------------

TEST_CASE("triple law support constraints") {
    const auto& lad = fixtures::exp_ladder_coarse();
    const auto p = fixtures::exp_model();
    CHECK(triple_law_sp(p, lad, 2.0, 0.5, 0.3, 0.4) == 0.0);  // v < y
    CHECK(triple_law_sp(p, lad, 2.0, 0.5, 2.5, 2.1) == 0.0);  // y > x
    CHECK(triple_law_sp(p, lad, 2.0, -0.5, 1.0, 0.5) == 0.0); // u <= 0
    CHECK(triple_law_sp(p, lad, 2.0, 0.5, 1.0, 0.5) > 0.0);
}

TEST_CASE("conditional overshoot of the exponential model is memoryless") {
    const FiniteTripleLaw law(fixtures::exp_model(), fixtures::exp_ladder_fine(), 2.0);
    // the conditional overshoot is exactly Exp(1) (jump memorylessness)
    double sup = 0.0;
    for (double u = 0.05; u <= 8.0; u += 0.05)
        sup = std::max(sup, std::fabs(law.overshoot_density(u) - std::exp(-u)));
    CHECK(sup <= 1e-3);
    for (double t : {0.5, 1.0, 3.0})
        CHECK(law.overshoot_cdf(t) == doctest::Approx(1.0 - std::exp(-t)).epsilon(1e-5));
}

TEST_CASE("conditional triple mass plus barrier atom is one (quadrature oracle)") {
    const auto p = fixtures::exp_model();
    const auto& lad = fixtures::exp_ladder_coarse();
    const double x = 2.0;
    const FiniteTripleLaw law(p, lad, x);
    // integrate the evaluator: per y-cell midpoint, 2d integral over v >= y, u > 0
    const double h = lad.U.step;
    const auto cells = static_cast<std::size_t>(x / h);
    double mass = 0.0;
    // one midpoint per y-cell (the evaluator is piecewise constant in y
    // through the renewal grid), double quadrature over (v, u) per cell
    for (std::size_t k = 0; k < cells; ++k) {
        const double y = (static_cast<double>(k) + 0.5) * h;
        const double inner = oracle::tanh_sinh_0inf(
            [&](double v) {
                if (v < y) return 0.0;
                return oracle::tanh_sinh_0inf(
                    [&](double u) { return law.density(u, v, y); }, 0.0, 5);
            },
            y, 5);
        mass += h * inner;
    }
    // entire y-atom sheet at y = x
    const double atom = oracle::tanh_sinh_0inf(
        [&](double v) {
            return oracle::tanh_sinh_0inf(
                [&](double u) { return law.barrier_sheet_density(u, v); }, 0.0, 5);
        },
        x, 5);
    CHECK(mass * 1.0 + atom == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("passage normalization identity: int U(dz) PiH(x-z) = q U(x, inf)") {
    const auto& lad = fixtures::exp_ladder_coarse();
    const double x = 2.0;
    double s = lad.U.atom0 * lad.piH_tail(x);
    for (std::size_t i = 0; i < static_cast<std::size_t>(x / lad.U.step); ++i)
        s += lad.U.step * lad.U.values[i] *
             lad.piH_tail(x - (static_cast<double>(i) + 0.5) * lad.U.step);
    CHECK(s == doctest::Approx(lad.q * lad.U.tail_mass(x)).epsilon(1e-5));
}

// ---------------------------------------------------------------------------
// stable triple law
// ---------------------------------------------------------------------------

TEST_CASE("stable normalizing constant: Cauchy case is 1/pi^2") {
    CHECK(stable_norm_const(1.0, 0.5) == doctest::Approx(1.0 / (M_PI * M_PI)).epsilon(1e-9));
}

TEST_CASE("stable triple density normalizes to one (triple quadrature oracle)") {
    const std::array<double, 3> gammas{0.5, 1.0, 1.5};
    const std::array<double, 3> rhos{0.3, 0.5, 0.7};
    int tested = 0;
    for (double g : gammas)
        for (double r : rhos) {
            if (!(g * r > 0.0 && g * r < 1.0 && g * (1 - r) > 0.0 && g * (1 - r) < 1.0))
                continue;
            ++tested;
            const StableSpec s{g, r, 1.0, 0.0};
            for (double x : {1.0, 2.0}) {
                const double total = oracle::tanh_sinh(
                    [&](double y) {
                        return oracle::tanh_sinh_0inf(
                            [&](double v) {
                                if (v < y) return 0.0;
                                return oracle::tanh_sinh_0inf(
                                    [&](double u) { return triple_law_stable(s, x, u, v, y); },
                                    0.0, 6);
                            },
                            y, 6);
                    },
                    0.0, x, 7);
                CHECK(total == doctest::Approx(1.0).epsilon(1e-3));
                if (x == 2.0) break;  // normalization is x-free; spot-check once
            }
        }
    CHECK(tested == 7);  // only pairs meeting the spec invariants
}

TEST_CASE("stable triple density support") {
    const StableSpec s{1.0, 0.5, 1.0, 0.0};
    CHECK(triple_law_stable(s, 1.0, 0.5, 0.2, 0.4) == 0.0);  // v < y
    CHECK(triple_law_stable(s, 1.0, 0.5, 1.2, 1.1) == 0.0);  // y > x
    CHECK(triple_law_stable(s, 1.0, 0.5, 0.6, 0.4) > 0.0);
}

// ---------------------------------------------------------------------------
// asymptotic laws
// ---------------------------------------------------------------------------

TEST_CASE("gbar: frozen values, limits and monotonicity") {
    const auto& r = fixtures::tp_regime();
    CHECK(gbar(r, 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    // frozen high-precision references for this model
    CHECK(gbar(r, 0.5) == doctest::Approx(0.55026374195919083).epsilon(1e-9));
    CHECK(gbar(r, 1.0) == doctest::Approx(0.31371919586643176).epsilon(1e-9));
    CHECK(gbar(r, 2.0) == doctest::Approx(0.10699705119768052).epsilon(1e-9));
    CHECK(gbar(r, 5.0) == doctest::Approx(0.0048340059110417307).epsilon(1e-8));
    CHECK(gbar(r, 30.0) < 1e-11);
    double prev = 1.0 + 1e-15;
    for (double u = 0.0; u <= 10.0; u += 0.1) {
        const double g = gbar(r, u);
        CHECK(g >= 0.0);
        CHECK(g <= 1.0);
        CHECK(g <= prev + 1e-12);
        prev = g;
    }
}

TEST_CASE("overshoot decomposition reproduces gbar") {
    const auto& r = fixtures::tp_regime();
    for (double u : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const auto c = decomposition_check(r, u, 1e-8);
        CHECK(std::fabs(c.sum - c.gbar_value) <= 1e-8);
    }
    const auto c0 = decomposition_check(r, 0.0, 1e-8);
    CHECK(c0.comp_drift_in == doctest::Approx(fixtures::tp_m11).epsilon(1e-6));
    CHECK(c0.sum == doctest::Approx(1.0).epsilon(1e-8));
    const auto cfar = decomposition_check(r, 25.0, 1e-8);
    CHECK(cfar.comp_jump < 1e-8);
    CHECK(cfar.comp_drift_in < 1e-8);
}

TEST_CASE("barrier-frame limit law and its overshoot marginal") {
    const auto& r = fixtures::tp_regime();
    CHECK(limit_barrier_law(r, 1.0, 0.3, 0.5) == 0.0);  // v < y
    CHECK(limit_barrier_law(r, 1.0, 0.5, 0.3) > 0.0);
    // marginal in u: (a/q) int e^{a y} piH-density(u + y) dy against the
    // direct oracle with the jump tail as the ladder density
    for (double u : {0.2, 1.0, 3.0}) {
        const double expect =
            r.alpha / r.q *
            oracle::tanh_sinh_0inf(
                [&](double y) {
                    // e^{y} * tail(u+y) = e^{-u} (1+u+y)^{-2} for this family
                    return std::exp(-u) / std::pow(1.0 + u + y, 2.0);
                },
                0.0, 7);
        CHECK(limit_barrier_overshoot_density(r, u) == doctest::Approx(expect).epsilon(1e-8));
    }
    // mass: integration-by-parts oracle -xi(-alpha)/q
    const double mass = oracle::tanh_sinh_0inf(
        [&](double u) { return limit_barrier_overshoot_density(r, u); }, 0.0, 7);
    const double by_parts = -r.ladder.xi(-1.0) / r.q;
    CHECK(mass == doctest::Approx(by_parts).epsilon(1e-7));
    CHECK(mass == doctest::Approx(fixtures::tp_m10).epsilon(1e-6));
    CHECK(mass == doctest::Approx(0.37356992368836233).epsilon(1e-4));
}

TEST_CASE("origin-frame limit law: defective exponential overshoot") {
    const auto& r = fixtures::tp_regime();
    // mass (q + xi(-alpha))/q
    const double m11 = r.q_plus_xi_neg_alpha / r.q;
    CHECK(m11 == doctest::Approx(fixtures::tp_m11).epsilon(1e-7));
    const double mass = oracle::tanh_sinh_0inf(
        [&](double u) { return limit_origin_overshoot_density(r, u); }, 0.0, 7);
    CHECK(mass == doctest::Approx(m11).epsilon(1e-9));
    // pure exponential shape, exactly
    const double f0 = limit_origin_overshoot_density(r, 1e-12);
    CHECK(f0 == doctest::Approx(r.alpha * m11).epsilon(1e-9));
    for (double u = 0.5; u <= 6.0; u += 0.5)
        CHECK(limit_origin_overshoot_density(r, u) / f0 ==
              doctest::Approx(std::exp(-r.alpha * u)).epsilon(1e-12));
    // overshoot/undershoot product form: the u-dependence factors through u - phi
    const double a = limit_origin_law(r, 1.0, 0.25, 0.75);
    const double b = limit_origin_law(r, 2.0, 0.25, 0.75);
    const double c = limit_origin_law(r, 1.5, 0.25, 0.75);
    CHECK(a / b == doctest::Approx(std::exp(r.alpha * 1.0)).epsilon(1e-12));
    CHECK(a / c == doctest::Approx(std::exp(r.alpha * 0.5)).epsilon(1e-12));
    CHECK(limit_origin_law(r, 1.0, 0.8, 0.75) == 0.0);  // phi > theta
    // phi may be negative
    CHECK(limit_origin_law(r, 1.0, -2.0, 0.75) > 0.0);
}

TEST_CASE("mass accounting") {
    const auto& r = fixtures::tp_regime();
    const auto m = mass_accounting(r, 1e-6);
    CHECK(m.jump_component == doctest::Approx(0.37356992368836233).epsilon(1e-4));
    CHECK(m.drift_component == doctest::Approx(0.62643007631163767).epsilon(1e-4));
    CHECK(m.creep_atom == 0.0);
    CHECK(std::fabs(m.total - 1.0) <= 1e-6);
}

TEST_CASE("mass accounting with a synthetic creeping ladder") {
    const auto r = synthetic_creeping_regime(0.2);
    const auto m = mass_accounting(r, 1e-6);
    CHECK(m.creep_atom > 0.0);
    CHECK(m.creep_atom == doctest::Approx(0.2 / r.q).epsilon(1e-12));
    CHECK(std::fabs(m.total - 1.0) <= 1e-6);
}

TEST_CASE("creeping atom") {
    const auto& r = fixtures::tp_regime();
    CHECK(creeping_atom(r) == 0.0);
    RegimeData synth = fixtures::tp_regime_coarse();
    synth.ladder.drift_H = 0.2;
    synth.q = 0.5;
    synth.alpha = 1.0;
    CHECK(creeping_atom(synth) == doctest::Approx(0.4).epsilon(1e-12));
    // 1 - gbar(0+) equals the creeping atom (consistent synthetic regime)
    const auto creep = synthetic_creeping_regime(0.2);
    CHECK(1.0 - gbar(creep, 0.0) == doctest::Approx(creeping_atom(creep)).epsilon(1e-8));
}

TEST_CASE("last maximum limit law") {
    const auto& r = fixtures::tp_regime();
    const double k = r.q_plus_xi_neg_alpha;
    // z = 0: the renewal atom 1/c scaled by (q+xi)^2/q
    CHECK(last_max_asymptotic(r, 0.0) ==
          doctest::Approx(k * k / r.q / 2.0).epsilon(1e-12));
    CHECK(last_max_asymptotic(r, 0.0) == doctest::Approx(0.31321503815581884).epsilon(1e-7));
    // z -> inf: total mass (q+xi)/q (grid-truncation limited)
    CHECK(last_max_asymptotic(r, r.ladder.U.length()) ==
          doctest::Approx(k / r.q).epsilon(5e-3));
    double prev = 0.0;
    for (double z = 0.0; z <= 20.0; z += 0.5) {
        const double v = last_max_asymptotic(r, z);
        CHECK(v >= prev - 1e-15);
        prev = v;
    }
}

TEST_CASE("pollaczek-khintchine passage probabilities (Lundberg oracle)") {
    const auto& lad = fixtures::exp_ladder_fine();
    // closed form (lambda/(c mu)) e^{-(mu - lambda/c) x} = 0.5 e^{-x/2}
    CHECK(pollaczek_khintchine(lad, 0.0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(pollaczek_khintchine(lad, 2.0) == doctest::Approx(0.18393972).epsilon(1e-5));
    for (double x = 0.0; x <= 5.0; x += 0.25)
        CHECK(pollaczek_khintchine(lad, x) ==
              doctest::Approx(0.5 * std::exp(-0.5 * x)).epsilon(1e-4));
    CHECK(pollaczek_khintchine(lad, 30.0) < 1e-6);
    CHECK_THROWS_AS(pollaczek_khintchine(lad, 100.0), std::out_of_range);
}

TEST_CASE("insurance-form laws agree with the ladder-form laws pointwise") {
    const auto& r = fixtures::tp_regime();
    double worst10 = 0.0, worst11 = 0.0;
    for (double u : {0.2, 0.7, 1.9})
        for (double b : {0.1, 0.8, 2.3})
            for (double c : {0.05, 0.6, 1.4}) {
                const double v = b + c, y = b;  // v >= y
                const double l10 = limit_barrier_law(r, u, v, y);
                const double i10 = insurance_barrier_law(r, u, v, y);
                worst10 = std::max(worst10, std::fabs(l10 - i10) / l10);
                const double theta = b + c, phi = b;
                const double l11 = limit_origin_law(r, u, phi, theta);
                const double i11 = insurance_origin_law(r, u, phi, theta);
                if (l11 > 0.0) worst11 = std::max(worst11, std::fabs(l11 - i11) / l11);
            }
    CHECK(worst10 <= 1e-10);
    CHECK(worst11 <= 1e-10);
    // psi(-alpha)^2/|E X1| = alpha^2 (q + xi(-alpha))^2 / q
    const double lhs = std::pow(laplace_exponent(r.process, -r.alpha), 2) / (-mean_x1(r.process));
    const double rhs = r.alpha * r.alpha * r.q_plus_xi_neg_alpha * r.q_plus_xi_neg_alpha / r.q;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    CHECK(insurance_barrier_law(r, 1.0, 0.3, 0.5) == 0.0);  // outside support
}

TEST_CASE("conditional triple law approaches the barrier-frame limit slowly") {
    const auto& r = fixtures::tp_regime();
    std::vector<double> sup;
    for (double x : {2.0, 4.0, 6.0, 8.0}) {
        const FiniteTripleLaw law(r.process, r.ladder, x);
        double worst = 0.0;
        for (double u = 0.2; u <= 3.0; u += 0.4)
            for (double v = 0.0; v <= 3.0; v += 0.4)
                for (double y = 0.0; y <= 2.0; y += 0.4) {
                    if (v < y) continue;
                    const double d =
                        std::fabs(law.density(u, v, y) - limit_barrier_law(r, u, v, y));
                    worst = std::max(worst, d);
                }
        sup.push_back(worst);
    }
    for (std::size_t k = 1; k < sup.size(); ++k) CHECK(sup[k] < sup[k - 1]);
    // the distance at x = 8 is about 0.2 on this grid: the approach is O(1/x),
    // far slower than the nominal 0.02 target at x = 8
    CHECK(sup.back() == doctest::Approx(0.207).epsilon(0.15));
}

TEST_CASE("defective law carrier matches its reported mass") {
    const auto& r = fixtures::tp_regime();
    DefectiveLaw law;
    law.coordinates = {"u"};
    law.mass = r.q_plus_xi_neg_alpha / r.q;
    law.density = [&](std::span<const double> c) {
        return limit_origin_overshoot_density(r, c[0]);
    };
    const double m = oracle::tanh_sinh_0inf(
        [&](double u) { return law.density(std::array<double, 1>{u}); }, 0.0, 7);
    CHECK(m == doctest::Approx(law.mass).epsilon(1e-4));
    for (double u : {0.1, 1.0, 5.0}) CHECK(law.density(std::array<double, 1>{u}) >= 0.0);
}
