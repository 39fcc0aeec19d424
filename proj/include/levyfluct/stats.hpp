#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace levyfluct {

/// Weighted empirical distribution, sorted ascending by value.
struct EmpiricalDist {
    std::vector<double> values;
    std::vector<double> weights;
    double n_effective = 0.0;  ///< (sum w)^2 / sum w^2

    static EmpiricalDist from_samples(std::vector<double> values,
                                      std::vector<double> weights = {});
};

struct KsResult {
    double statistic = 0.0;
    double crit_05 = 0.0;
    double crit_01 = 0.0;
    bool pass_05 = false;
    bool pass_01 = false;
};

/// Asymptotic Kolmogorov critical value K_level / sqrt(n_eff).
double ks_critical(double n_eff, double level);

/// Sup distance between the weighted ECDF and a distribution function,
/// with asymptotic critical values at levels 0.05 and 0.01 using n_effective.
/// Requires n_effective >= 10.
KsResult ks_distance(const EmpiricalDist& e, const std::function<double(double)>& cdf);

struct WilsonInterval {
    double lo = 0.0, hi = 1.0;
};
/// Wilson score interval for a binomial proportion at z standard deviations.
WilsonInterval wilson_interval(double successes, double trials, double z);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    int merged_bins = 0;
    std::string note;
};

/// Chi-square goodness of fit of the weighted sample against the bin masses
/// of `cdf` on `edges`. Bins with expected count below 5 are merged (noted).
/// For a defective law pass its total mass in `law_mass`: bin masses are then
/// renormalized so the comparison is conditional.
ChiSquareResult binned_chi_square(const EmpiricalDist& e,
                                  const std::function<double(double)>& cdf,
                                  std::span<const double> edges, double law_mass = 1.0);

/// Regularized upper incomplete gamma Q(a, x) (chi-square survival helper).
double gamma_q(double a, double x);

}  // namespace levyfluct
