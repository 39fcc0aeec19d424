#pragma once

#include <compare>
#include <map>
#include <vector>

namespace levyfluct {

/// Integer-lattice step law of a random walk.
struct LatticeStep {
    std::vector<int> support;
    std::vector<double> probs;
};
void validate_lattice(const LatticeStep& s);

/// Which time is reported as "the" time of the running maximum when several
/// epochs attain it. `last_attain` pairs with the weak-ascending /
/// strict-descending ladder factorization, `first_attain` with the
/// strict-ascending / weak-descending one; on the lattice ties carry positive
/// probability, so the two variants are genuinely different identities.
enum class MaxTieRule { last_attain, first_attain };

/// Quintuple of the walk at first strict passage sigma over the barrier:
/// i = sigma - 1 - theta, j = theta (theta = reported max epoch of the first
/// sigma-1 steps), u = overshoot, v = undershoot, y = last-max undershoot.
struct QuintupleKey {
    int i = 0, j = 0, u = 0, v = 0, y = 0;
    auto operator<=>(const QuintupleKey&) const = default;
};
using QuintuplePmf = std::map<QuintupleKey, double>;

/// Exact tuple probabilities by exhaustive path enumeration up to length
/// i_max + j_max + 1. Throws config_error when the enumeration budget
/// (|support|^length <= 2e7 paths) is exceeded.
QuintuplePmf enumerate_lhs(const LatticeStep& s, int x, int i_max, int j_max, MaxTieRule rule);

/// Ladder Green measures by direct dynamic programming over the defining
/// path constraints:
///   asc_weak[j][z]    = P(S_k <= z for k < j, S_j = z)
///   asc_strict[j][z]  = P(S_k <  z for k < j, S_j = z)
///   desc_strict[i][w] = P(S_m <  0 for 1 <= m <= i, S_i = -w)
///   desc_weak[i][w]   = P(S_m <= 0 for 1 <= m <  i, S_i = -w)
struct GreenTables {
    std::vector<std::vector<double>> asc_weak, asc_strict;    // [j][z], z in [0, x]
    std::vector<std::vector<double>> desc_strict, desc_weak;  // [i][w], w >= 0
};
GreenTables green_measures(const LatticeStep& s, int x, int i_max, int j_max);

struct IdentityRow {
    QuintupleKey k;
    double lhs = 0.0, rhs = 0.0, abs_err = 0.0;
};
struct IdentityReport {
    double max_abs_err = 0.0;
    std::vector<IdentityRow> rows;
    bool pass(double tol = 1e-12) const { return max_abs_err <= tol; }
};

/// Tuple-by-tuple comparison of the enumerated law against the Green-measure
/// product U(x - y, j) * Uhat(v - y, i) * F(u + v).
IdentityReport verify_identity(const LatticeStep& s, int x, int i_max, int j_max,
                               MaxTieRule rule);

/// Overshoot sub-probability P(sigma <= max_steps, S_sigma - x = u) by a
/// level-occupation sweep: an independent code path used to cross-check the
/// enumerated quintuple law.
std::map<int, double> overshoot_pmf_direct(const LatticeStep& s, int x, int max_steps);

}  // namespace levyfluct
