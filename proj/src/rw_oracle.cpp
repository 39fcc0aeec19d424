#include "levyfluct/rw_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "levyfluct/errors.hpp"

namespace levyfluct {

void validate_lattice(const LatticeStep& s) {
    if (s.support.empty() || s.support.size() != s.probs.size())
        throw config_error("lattice step: support and probs must be nonempty and match");
    double sum = 0.0;
    bool has_pos = false;
    for (std::size_t k = 0; k < s.probs.size(); ++k) {
        if (s.probs[k] < 0.0) throw config_error("lattice step: probabilities must be >= 0");
        sum += s.probs[k];
        if (s.support[k] > 0 && s.probs[k] > 0.0) has_pos = true;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw config_error("lattice step: probabilities must sum to 1");
    if (!has_pos)
        throw config_error("lattice step: at least one positive step must carry mass");
}

namespace {

void check_budget(const LatticeStep& s, int length) {
    double paths = 1.0;
    for (int k = 0; k < length; ++k) {
        paths *= static_cast<double>(s.support.size());
        if (paths > 2e7)
            throw config_error("rw oracle: enumeration budget exceeded "
                               "(|support|^(i_max+j_max+1) must stay within 2e7 paths)");
    }
}

struct DfsState {
    const LatticeStep* s;
    int x, n_max, i_max, j_max;
    QuintuplePmf* pmf_last;
    QuintuplePmf* pmf_first;
};

// Tracks S_n, the running max of (0, S_1, .., S_n) and both tie conventions.
void dfs(const DfsState& st, int n, int S, int maxv, int last_at, int first_at, double prob) {
    for (std::size_t k = 0; k < st.s->support.size(); ++k) {
        const double p = st.s->probs[k];
        if (p == 0.0) continue;
        const int S2 = S + st.s->support[k];
        const double pr = prob * p;
        const int n2 = n + 1;
        if (S2 > st.x) {  // strict passage at sigma = n2
            const QuintupleKey base{0, 0, S2 - st.x, st.x - S, st.x - maxv};
            {
                const int j = last_at, i = n2 - 1 - last_at;
                if (i <= st.i_max && j <= st.j_max) {
                    QuintupleKey key = base;
                    key.i = i;
                    key.j = j;
                    (*st.pmf_last)[key] += pr;
                }
            }
            {
                const int j = first_at, i = n2 - 1 - first_at;
                if (i <= st.i_max && j <= st.j_max) {
                    QuintupleKey key = base;
                    key.i = i;
                    key.j = j;
                    (*st.pmf_first)[key] += pr;
                }
            }
            continue;
        }
        if (n2 >= st.n_max) continue;
        int mx = maxv, la = last_at, fa = first_at;
        if (S2 > mx) {
            mx = S2;
            la = fa = n2;
        } else if (S2 == mx) {
            la = n2;
        }
        dfs(st, n2, S2, mx, la, fa, pr);
    }
}

void enumerate_both(const LatticeStep& s, int x, int i_max, int j_max, QuintuplePmf& last,
                    QuintuplePmf& first) {
    validate_lattice(s);
    if (x < 1) throw config_error("rw oracle: barrier must be a positive integer");
    const int n_max = i_max + j_max + 1;
    check_budget(s, n_max);
    DfsState st{&s, x, n_max, i_max, j_max, &last, &first};
    dfs(st, 0, 0, 0, 0, 0, 1.0);
}

}  // namespace

QuintuplePmf enumerate_lhs(const LatticeStep& s, int x, int i_max, int j_max, MaxTieRule rule) {
    QuintuplePmf last, first;
    enumerate_both(s, x, i_max, j_max, last, first);
    return rule == MaxTieRule::last_attain ? last : first;
}

GreenTables green_measures(const LatticeStep& s, int x, int i_max, int j_max) {
    validate_lattice(s);
    GreenTables g;
    const int min_step = *std::min_element(s.support.begin(), s.support.end());
    const int max_step = *std::max_element(s.support.begin(), s.support.end());
    const int w_max = std::max(1, i_max * std::max(1, -min_step)) + max_step;

    // ascending tables: for each target level z, DP over paths capped at z
    // (weak) or z-1 before the final epoch (strict).
    g.asc_weak.assign(static_cast<std::size_t>(j_max) + 1,
                      std::vector<double>(static_cast<std::size_t>(x) + 1, 0.0));
    g.asc_strict = g.asc_weak;
    for (int z = 0; z <= x; ++z) {
        // levels range within [z - j_max*|min_step|, z]
        const int lo = z + j_max * std::min(0, min_step) - std::max(0, max_step);
        const int width = z - lo + 1;
        std::vector<double> dpw(static_cast<std::size_t>(width), 0.0);
        std::vector<double> dps(dpw);
        dpw[static_cast<std::size_t>(-lo)] = 1.0;  // S_0 = 0 (z >= 0 so 0 <= z)
        dps[static_cast<std::size_t>(-lo)] = 1.0;
        if (0 == z) {
            g.asc_weak[0][static_cast<std::size_t>(z)] = 1.0;
            g.asc_strict[0][static_cast<std::size_t>(z)] = 1.0;
        }
        for (int n = 1; n <= j_max; ++n) {
            std::vector<double> nw(static_cast<std::size_t>(width), 0.0);
            std::vector<double> ns(nw);
            for (int lev = lo; lev <= z; ++lev) {
                const double pw = dpw[static_cast<std::size_t>(lev - lo)];
                const double ps = dps[static_cast<std::size_t>(lev - lo)];
                if (pw == 0.0 && ps == 0.0) continue;
                for (std::size_t k = 0; k < s.support.size(); ++k) {
                    const int l2 = lev + s.support[k];
                    if (l2 < lo || l2 > z) continue;
                    const double p = s.probs[k];
                    nw[static_cast<std::size_t>(l2 - lo)] += pw * p;
                    ns[static_cast<std::size_t>(l2 - lo)] += ps * p;
                }
            }
            g.asc_weak[static_cast<std::size_t>(n)][static_cast<std::size_t>(z)] =
                nw[static_cast<std::size_t>(z - lo)];
            g.asc_strict[static_cast<std::size_t>(n)][static_cast<std::size_t>(z)] =
                ns[static_cast<std::size_t>(z - lo)];
            dpw.swap(nw);
            // strict: the endpoint S_n = z is allowed, but continuing paths
            // must have stayed strictly below z
            dps.swap(ns);
            dps[static_cast<std::size_t>(z - lo)] = 0.0;
        }
    }

    // descending tables: DP over negative levels.
    g.desc_strict.assign(static_cast<std::size_t>(i_max) + 1,
                         std::vector<double>(static_cast<std::size_t>(w_max) + 1, 0.0));
    g.desc_weak = g.desc_strict;
    {
        const int lo = i_max * std::min(0, min_step) - std::max(0, max_step);
        const int hi = 0;
        const int width = hi - lo + 1;
        std::vector<double> dstrict(static_cast<std::size_t>(width), 0.0);
        std::vector<double> dweak(dstrict);
        dstrict[static_cast<std::size_t>(-lo)] = 1.0;  // S_0 = 0
        dweak[static_cast<std::size_t>(-lo)] = 1.0;
        g.desc_strict[0][0] = 1.0;
        g.desc_weak[0][0] = 1.0;
        for (int n = 1; n <= i_max; ++n) {
            std::vector<double> ns(static_cast<std::size_t>(width), 0.0);
            std::vector<double> nw(ns);
            for (int lev = lo; lev <= hi; ++lev) {
                const double ps = dstrict[static_cast<std::size_t>(lev - lo)];
                const double pw = dweak[static_cast<std::size_t>(lev - lo)];
                if (ps == 0.0 && pw == 0.0) continue;
                for (std::size_t k = 0; k < s.support.size(); ++k) {
                    const int l2 = lev + s.support[k];
                    if (l2 < lo || l2 > hi) continue;
                    const double p = s.probs[k];
                    // strict: every visited level through time i must be < 0
                    if (l2 <= -1) ns[static_cast<std::size_t>(l2 - lo)] += ps * p;
                    // weak: levels before time i must be <= 0 (endpoint free)
                    nw[static_cast<std::size_t>(l2 - lo)] += pw * p;
                }
            }
            for (int w = 0; w <= w_max; ++w) {
                const int lev = -w;
                if (lev < lo) break;
                if (w > 0)  // strict forbids S_i = 0 for i >= 1
                    g.desc_strict[static_cast<std::size_t>(n)][static_cast<std::size_t>(w)] =
                        ns[static_cast<std::size_t>(lev - lo)];
                g.desc_weak[static_cast<std::size_t>(n)][static_cast<std::size_t>(w)] =
                    nw[static_cast<std::size_t>(lev - lo)];
            }
            dstrict.swap(ns);
            // weak continuation: paths may sit at 0 only if they keep S_m <= 0,
            // which the cap already enforces
            dweak.swap(nw);
        }
    }
    return g;
}

IdentityReport verify_identity(const LatticeStep& s, int x, int i_max, int j_max,
                               MaxTieRule rule) {
    const QuintuplePmf lhs = enumerate_lhs(s, x, i_max, j_max, rule);
    const GreenTables g = green_measures(s, x, i_max, j_max);
    const auto& asc = rule == MaxTieRule::last_attain ? g.asc_weak : g.asc_strict;
    const auto& desc = rule == MaxTieRule::last_attain ? g.desc_strict : g.desc_weak;

    const int max_step = *std::max_element(s.support.begin(), s.support.end());
    IdentityReport rep;
    auto prob_of_step = [&](int v) {
        for (std::size_t k = 0; k < s.support.size(); ++k)
            if (s.support[k] == v) return s.probs[k];
        return 0.0;
    };
    for (int i = 0; i <= i_max; ++i)
        for (int j = 0; j <= j_max; ++j)
            for (int y = 0; y <= x; ++y)
                for (int v = y; v <= y + max_step - 1; ++v)
                    for (int u = 1; u + v <= max_step; ++u) {
                        const double f = prob_of_step(u + v);
                        if (f == 0.0) continue;
                        const int w = v - y;
                        double rhs = 0.0;
                        if (w < static_cast<int>(desc[0].size()))
                            rhs = asc[static_cast<std::size_t>(j)][static_cast<std::size_t>(
                                      x - y)] *
                                  desc[static_cast<std::size_t>(i)]
                                      [static_cast<std::size_t>(w)] *
                                  f;
                        const QuintupleKey key{i, j, u, v, y};
                        auto it = lhs.find(key);
                        const double l = it == lhs.end() ? 0.0 : it->second;
                        if (l == 0.0 && rhs == 0.0) continue;
                        IdentityRow row{key, l, rhs, std::fabs(l - rhs)};
                        rep.max_abs_err = std::max(rep.max_abs_err, row.abs_err);
                        rep.rows.push_back(row);
                    }
    return rep;
}

std::map<int, double> overshoot_pmf_direct(const LatticeStep& s, int x, int max_steps) {
    validate_lattice(s);
    const int min_step = *std::min_element(s.support.begin(), s.support.end());
    const int max_step = *std::max_element(s.support.begin(), s.support.end());
    const int lo = std::min(0, max_steps * std::min(0, min_step));
    const int width = x - lo + 1;
    std::vector<double> dist(static_cast<std::size_t>(width), 0.0);
    dist[static_cast<std::size_t>(-lo)] = 1.0;  // S_0 = 0, not yet passed
    std::map<int, double> pmf;
    for (int n = 1; n <= max_steps; ++n) {
        std::vector<double> next(static_cast<std::size_t>(width), 0.0);
        for (int lev = lo; lev <= x; ++lev) {
            const double p0 = dist[static_cast<std::size_t>(lev - lo)];
            if (p0 == 0.0) continue;
            for (std::size_t k = 0; k < s.support.size(); ++k) {
                const int l2 = lev + s.support[k];
                const double pr = p0 * s.probs[k];
                if (pr == 0.0) continue;
                if (l2 > x)
                    pmf[l2 - x] += pr;  // absorbed with overshoot l2 - x
                else if (l2 >= lo)
                    next[static_cast<std::size_t>(l2 - lo)] += pr;
            }
        }
        dist.swap(next);
    }
    (void)max_step;
    return pmf;
}

}  // namespace levyfluct
