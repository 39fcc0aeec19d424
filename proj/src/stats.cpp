#include "levyfluct/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "levyfluct/errors.hpp"

namespace levyfluct {

EmpiricalDist EmpiricalDist::from_samples(std::vector<double> values,
                                          std::vector<double> weights) {
    if (weights.empty()) weights.assign(values.size(), 1.0);
    if (weights.size() != values.size())
        throw config_error("empirical distribution: values and weights must match");
    for (double w : weights)
        if (!(w > 0.0)) throw config_error("empirical distribution: weights must be positive");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    EmpiricalDist e;
    e.values.reserve(values.size());
    e.weights.reserve(values.size());
    double sw = 0.0, sw2 = 0.0;
    for (std::size_t k : order) {
        e.values.push_back(values[k]);
        e.weights.push_back(weights[k]);
        sw += weights[k];
        sw2 += weights[k] * weights[k];
    }
    e.n_effective = sw2 > 0.0 ? sw * sw / sw2 : 0.0;
    return e;
}

double ks_critical(double n_eff, double level) {
    // K_level = sqrt(-ln(level/2)/2): 1.3581 at 0.05, 1.6276 at 0.01
    const double K = std::sqrt(-std::log(level / 2.0) / 2.0);
    return K / std::sqrt(n_eff);
}

KsResult ks_distance(const EmpiricalDist& e, const std::function<double(double)>& cdf) {
    if (e.n_effective < 10.0)
        throw config_error("ks_distance: n_effective below 10; refusing a statistical claim");
    const double total = std::accumulate(e.weights.begin(), e.weights.end(), 0.0);
    double acc = 0.0, stat = 0.0;
    for (std::size_t k = 0; k < e.values.size(); ++k) {
        const double F = cdf(e.values[k]);
        stat = std::max(stat, std::fabs(acc / total - F));  // left limit
        acc += e.weights[k];
        stat = std::max(stat, std::fabs(acc / total - F));
    }
    KsResult r;
    r.statistic = stat;
    r.crit_05 = ks_critical(e.n_effective, 0.05);
    r.crit_01 = ks_critical(e.n_effective, 0.01);
    r.pass_05 = stat <= r.crit_05;
    r.pass_01 = stat <= r.crit_01;
    return r;
}

WilsonInterval wilson_interval(double successes, double trials, double z) {
    if (!(trials > 0.0)) throw config_error("wilson_interval: trials must be positive");
    const double p = successes / trials;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / trials;
    const double center = (p + z2 / (2.0 * trials)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

double gamma_p_series(double a, double x) {
    double term = 1.0 / a, sum = term;
    for (int n = 1; n < 500; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    // Lentz continued fraction for Q(a, x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

ChiSquareResult binned_chi_square(const EmpiricalDist& e,
                                  const std::function<double(double)>& cdf,
                                  std::span<const double> edges, double law_mass) {
    if (edges.size() < 3) throw config_error("binned_chi_square: need at least two bins");
    if (!(law_mass > 0.0) || law_mass > 1.0 + 1e-12)
        throw config_error("binned_chi_square: law mass must lie in (0, 1]");
    const std::size_t nbins = edges.size() - 1;
    const double total = std::accumulate(e.weights.begin(), e.weights.end(), 0.0);

    std::vector<double> observed(nbins, 0.0), expected(nbins, 0.0);
    // mass renormalized so a defective density is compared conditionally
    double mass_sum = 0.0;
    for (std::size_t b = 0; b < nbins; ++b) {
        const double m = (cdf(edges[b + 1]) - cdf(edges[b])) / law_mass;
        expected[b] = m * total;
        mass_sum += m;
    }
    if (std::fabs(mass_sum - 1.0) > 0.02)
        throw config_error("binned_chi_square: bin edges do not cover the law "
                           "(bin masses must sum to about 1 after renormalization)");
    std::size_t b = 0;
    for (std::size_t k = 0; k < e.values.size(); ++k) {
        const double v = e.values[k];
        if (v < edges.front() || v > edges.back()) continue;
        while (b + 1 < nbins && v >= edges[b + 1]) ++b;
        while (b > 0 && v < edges[b]) --b;
        observed[b] += e.weights[k];
    }
    // merge sparse bins to the left neighbour
    ChiSquareResult r;
    std::vector<double> obs, exp;
    double co = 0.0, ce = 0.0;
    for (std::size_t k = 0; k < nbins; ++k) {
        co += observed[k];
        ce += expected[k];
        if (ce >= 5.0) {
            obs.push_back(co);
            exp.push_back(ce);
            co = ce = 0.0;
        } else if (k + 1 == nbins) {
            if (!obs.empty()) {
                obs.back() += co;
                exp.back() += ce;
            }
            ++r.merged_bins;
        }
    }
    r.merged_bins += static_cast<int>(nbins - obs.size());
    if (r.merged_bins > 0) r.note = "sparse bins merged to reach expected count >= 5";
    if (obs.size() < 2) throw config_error("binned_chi_square: fewer than two usable bins");
    double stat = 0.0;
    for (std::size_t k = 0; k < obs.size(); ++k) {
        const double d = obs[k] - exp[k];
        stat += d * d / exp[k];
    }
    r.statistic = stat;
    r.dof = static_cast<int>(obs.size()) - 1;
    r.p_value = gamma_q(0.5 * r.dof, 0.5 * stat);
    return r;
}

}  // namespace levyfluct
