#include "levyfluct/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>

#include "levyfluct/config.hpp"
#include "levyfluct/csv.hpp"
#include "levyfluct/errors.hpp"
#include "levyfluct/laws.hpp"
#include "levyfluct/quadrature.hpp"
#include "levyfluct/stats.hpp"

namespace levyfluct {

namespace {

std::string outpath(const CliOptions& opt, const std::string& name) {
    std::filesystem::create_directories(opt.out_dir);
    return (std::filesystem::path(opt.out_dir) / name).string();
}

void print_check(const CheckLine& c) {
    std::printf("[%s] %s%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.detail.empty() ? "" : " — ", c.detail.c_str());
}

struct WeightedSummary {
    std::vector<double> u, v, y, w;
    double weight_sum = 0.0, weight_sq = 0.0;
    std::size_t passages = 0, misses = 0;
};

WeightedSummary summarize(const std::vector<PassageOutcome>& outcomes) {
    WeightedSummary s;
    for (const auto& o : outcomes) {
        if (std::holds_alternative<NoPassage>(o)) {
            ++s.misses;
            continue;
        }
        const auto& q = std::get<QuintupleSample>(o);
        ++s.passages;
        s.u.push_back(q.overshoot);
        s.v.push_back(q.undershoot);
        s.y.push_back(q.lastmax_undershoot);
        s.w.push_back(q.weight);
        s.weight_sum += q.weight;
        s.weight_sq += q.weight * q.weight;
    }
    return s;
}

void write_samples_csv(const std::string& path, const std::vector<PassageOutcome>& outcomes,
                       const Config& cfg, const SimConfig& sim) {
    CsvWriter csv(path);
    char buf[160];
    std::snprintf(buf, sizeof buf, "seed=%llu model=%s miss_epsilon=%.3g n=%zu",
                  static_cast<unsigned long long>(sim.seed), cfg.source_digest.c_str(),
                  sim.miss_epsilon, sim.n_samples);
    csv.comment(buf);
    std::size_t misses = 0;
    for (const auto& o : outcomes)
        if (std::holds_alternative<NoPassage>(o)) ++misses;
    std::snprintf(buf, sizeof buf, "misses=%zu (per-path truncation bias <= miss_epsilon)",
                  misses);
    csv.comment(buf);
    csv.header({"t_rel", "g", "u", "v", "y", "crept", "weight"});
    for (const auto& o : outcomes) {
        if (std::holds_alternative<NoPassage>(o)) continue;
        const auto& q = std::get<QuintupleSample>(o);
        csv.row({q.t_rel, q.g, q.overshoot, q.undershoot, q.lastmax_undershoot,
                 q.crept ? 1.0 : 0.0, q.weight});
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// verify-rw
// ---------------------------------------------------------------------------

int cmd_verify_rw(const CliOptions& opt) {
    Config cfg = load_config(opt.config_path);
    if (cfg.lattices.empty())
        throw config_error("verify-rw: config must provide at least one lattice step law");

    RunManifest manifest;
    manifest.command = "verify-rw";
    manifest.config_digest = cfg.source_digest;

    CsvWriter csv(outpath(opt, "rw_identity.csv"));
    csv.header({"lattice", "tie_rule", "x", "i", "j", "u", "v", "y", "lhs", "rhs", "abs_err"});

    double max_err = 0.0;
    for (const auto& nl : cfg.lattices) {
        for (int x = 1; x <= cfg.barrier_max; ++x) {
            for (auto rule : {MaxTieRule::last_attain, MaxTieRule::first_attain}) {
                IdentityReport rep = verify_identity(nl.step, x, cfg.i_max, cfg.j_max, rule);
                const char* rname = rule == MaxTieRule::last_attain ? "last" : "first";
                for (const auto& row : rep.rows) {
                    double rhs = row.rhs;
                    if (opt.negative_control) rhs += 1e-9;
                    csv.raw_row(nl.name + "," + rname + "," + std::to_string(x) + "," +
                                std::to_string(row.k.i) + "," + std::to_string(row.k.j) + "," +
                                std::to_string(row.k.u) + "," + std::to_string(row.k.v) + "," +
                                std::to_string(row.k.y) + "," + format_g17(row.lhs) + "," +
                                format_g17(rhs) + "," + format_g17(std::fabs(row.lhs - rhs)));
                    max_err = std::max(max_err, std::fabs(row.lhs - rhs));
                }
            }
        }
        // independent cross-check: quintuple marginal vs direct level sweep
        const int horizon = cfg.i_max + cfg.j_max + 1;
        const QuintuplePmf full = enumerate_lhs(nl.step, 1, horizon - 1, horizon - 1,
                                                MaxTieRule::last_attain);
        std::map<int, double> marg;
        for (const auto& [k, p] : full) marg[k.u] += p;
        const auto direct = overshoot_pmf_direct(nl.step, 1, horizon);
        double sweep_err = 0.0;
        for (const auto& [u, p] : direct)
            sweep_err = std::max(sweep_err, std::fabs(p - (marg.count(u) ? marg.at(u) : 0.0)));
        for (const auto& [u, p] : marg)
            if (!direct.count(u)) sweep_err = std::max(sweep_err, p);
        manifest.checks.push_back({"overshoot sweep cross-check (" + nl.name + ")",
                                   sweep_err <= 1e-12,
                                   "max abs err " + format_g17(sweep_err)});
    }

    char detail[96];
    std::snprintf(detail, sizeof detail, "max abs error %.3g over all tuples", max_err);
    manifest.checks.push_back({"quintuple identity tuple-by-tuple <= 1e-12", max_err <= 1e-12,
                               detail});
    manifest.outputs.push_back("rw_identity.csv");
    manifest.write(outpath(opt, "manifest.json"));
    for (const auto& c : manifest.checks) print_check(c);
    return manifest.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify-passage
// ---------------------------------------------------------------------------

int cmd_verify_passage(const CliOptions& opt) {
    Config cfg = load_config(opt.config_path);
    if (!cfg.model) throw config_error("verify-passage: config must provide a model");
    if (opt.seed) cfg.sim.seed = *opt.seed;
    if (opt.samples) cfg.sim.n_samples = *opt.samples;
    if (opt.tilt) cfg.sim.tilt_theta = *opt.tilt;
    validate_sim_config(cfg.sim);

    const SpectrallyPositiveBV model = make_sp_model(*cfg.model);
    const LadderData lad = build_ladder(model, cfg.grid);
    const LadderData bound = build_bound_ladder(*cfg.model, cfg.bound_grid);
    const PassageModel pm = make_passage_model(*cfg.model, cfg.sim.tilt_theta, bound);

    const auto outcomes = sample_passage(pm, cfg.sim);
    WeightedSummary s = summarize(outcomes);

    const double n_eff =
        s.weight_sq > 0.0 ? s.weight_sum * s.weight_sum / s.weight_sq : 0.0;
    if (n_eff < 100.0)
        throw config_error("verify-passage: insufficient n_effective (" +
                           format_g17(n_eff) + " < 100); refusing statistical claims");

    write_samples_csv(outpath(opt, "samples.csv"), outcomes, cfg, cfg.sim);

    RunManifest manifest;
    manifest.command = "verify-passage";
    manifest.config_digest = cfg.source_digest;
    manifest.seed = cfg.sim.seed;
    manifest.outputs.push_back("samples.csv");

    const double x = cfg.sim.barrier;
    const double pk = pollaczek_khintchine(lad, x);
    char detail[200];

    if (cfg.sim.tilt_theta == 0.0) {
        const auto n = static_cast<double>(cfg.sim.n_samples);
        const auto wi = wilson_interval(static_cast<double>(s.passages), n, 3.0);
        std::snprintf(detail, sizeof detail,
                      "frequency %.6g, Wilson z=3 [%.6g, %.6g], q U(x,inf) = %.6g",
                      static_cast<double>(s.passages) / n, wi.lo, wi.hi, pk);
        manifest.checks.push_back(
            {"passage frequency vs closed form", wi.lo <= pk && pk <= wi.hi, detail});
    } else {
        const auto n = static_cast<double>(cfg.sim.n_samples);
        const double est = s.weight_sum / n;
        double var = 0.0;
        for (double w : s.w) var += w * w;
        var = var / n - est * est;
        const double se = std::sqrt(std::max(0.0, var) / n);
        std::snprintf(detail, sizeof detail,
                      "weighted estimate %.6g +- 3*%.3g, q U(x,inf) = %.6g", est, se, pk);
        manifest.checks.push_back({"weighted passage probability vs closed form",
                                   std::fabs(est - pk) <= 3.0 * se + 1e-12, detail});
    }

    const FiniteTripleLaw law(model, lad, x);
    const auto marg = [&](const char* name, const std::vector<double>& vals,
                          const std::function<double(double)>& cdf) {
        const auto ed = EmpiricalDist::from_samples(vals, s.w);
        const auto ks = ks_distance(ed, cdf);
        const double crit = ks_critical(ed.n_effective, opt.level);
        std::snprintf(detail, sizeof detail, "KS %.5g vs critical %.5g (n_eff %.0f)",
                      ks.statistic, crit, ed.n_effective);
        manifest.checks.push_back(
            {std::string(name) + " marginal vs closed form", ks.statistic <= crit, detail});
    };
    marg("overshoot", s.u, [&](double t) { return law.overshoot_cdf(t); });
    marg("undershoot", s.v, [&](double t) { return law.undershoot_cdf(t); });
    marg("last-max undershoot", s.y, [&](double t) { return law.lastmax_cdf(t); });

    {
        CsvWriter sum(outpath(opt, "passage_summary.csv"));
        sum.header({"check", "pass", "detail"});
        for (const auto& c : manifest.checks)
            sum.raw_row("\"" + c.name + "\"," + (c.pass ? "1" : "0") + ",\"" + c.detail + "\"");
        manifest.outputs.push_back("passage_summary.csv");
    }
    manifest.write(outpath(opt, "manifest.json"));
    for (const auto& c : manifest.checks) print_check(c);
    return manifest.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify-asymptotic
// ---------------------------------------------------------------------------

int cmd_verify_asymptotic(const CliOptions& opt) {
    Config cfg = load_config(opt.config_path);
    if (!cfg.model) throw config_error("verify-asymptotic: config must provide a model");
    if (opt.seed) cfg.sim.seed = *opt.seed;
    if (opt.tilt) cfg.asym.tilt = *opt.tilt;

    const SpectrallyPositiveBV model = make_sp_model(*cfg.model);
    const RegimeData regime = make_regime(model, cfg.asym.alpha, cfg.grid);

    RunManifest manifest;
    manifest.command = "verify-asymptotic";
    manifest.config_digest = cfg.source_digest;
    manifest.seed = cfg.sim.seed;
    char detail[240];

    // overshoot-law decomposition on a u-grid
    {
        double worst = 0.0, at = 0.0;
        CsvWriter csv(outpath(opt, "decomposition.csv"));
        csv.header({"u", "comp_jump", "comp_drift_in", "sum", "gbar"});
        for (double u = 0.0; u <= 10.0 + 1e-9; u += 0.1) {
            DecompositionCheck c = decomposition_check(regime, u, 1.0);
            csv.row({u, c.comp_jump, c.comp_drift_in, c.sum, c.gbar_value});
            const double err = std::fabs(c.sum - c.gbar_value);
            if (err > worst) {
                worst = err;
                at = u;
            }
        }
        std::snprintf(detail, sizeof detail, "max |components - gbar| = %.3g at u = %.2f",
                      worst, at);
        manifest.checks.push_back({"overshoot decomposition <= 1e-8", worst <= 1e-8, detail});
        manifest.outputs.push_back("decomposition.csv");
    }

    // mass accounting
    {
        const MassAccounting m = mass_accounting(regime, 1.0);
        std::snprintf(detail, sizeof detail,
                      "jump %.6f + drift-in %.6f + creep %.6f = %.8f", m.jump_component,
                      m.drift_component, m.creep_atom, m.total);
        manifest.checks.push_back(
            {"mass accounting total = 1 +- 1e-6", std::fabs(m.total - 1.0) <= 1e-6, detail});
    }

    // two-route consistency and the continuous limit at zero
    {
        const double lhs = regime.q_plus_xi_neg_alpha;
        const double rhs = -laplace_exponent(regime.process, -regime.alpha) / regime.alpha;
        const double rel = std::fabs(lhs - rhs) / std::fabs(rhs);
        std::snprintf(detail, sizeof detail, "tail route %.12g vs psi route %.12g (rel %.2g)",
                      lhs, rhs, rel);
        manifest.checks.push_back({"q + xi(-alpha) = -psi(-alpha)/alpha", rel <= 1e-8, detail});

        const double g0 = gbar(regime, 0.0);
        const double atom = creeping_atom(regime);
        std::snprintf(detail, sizeof detail, "1 - gbar(0+) = %.3g, creep atom = %.3g",
                      1.0 - g0, atom);
        manifest.checks.push_back(
            {"1 - gbar(0+) equals the creeping atom", std::fabs(1.0 - g0 - atom) <= 1e-8,
             detail});
    }

    // renewal-tail equivalence ratio
    {
        CsvWriter csv(outpath(opt, "tail_ratio.csv"));
        csv.header({"u", "ratio"});
        const double k2 = regime.q_plus_xi_neg_alpha * regime.q_plus_xi_neg_alpha;
        double at20 = 0.0;
        for (double u = 1.0; u <= std::min(30.0, regime.ladder.U.length()) + 1e-9; u += 1.0) {
            const double ratio =
                regime.ladder.U.tail_mass(u) * k2 / regime.ladder.piH_tail(u);
            csv.row({u, ratio});
            if (std::fabs(u - 20.0) < 1e-9) at20 = ratio;
        }
        std::snprintf(detail, sizeof detail, "U(u,inf)(q+xi)^2 / PiH(u,inf) = %.4f at u = 20",
                      at20);
        manifest.checks.push_back(
            {"renewal tail equivalence within 5% by u=20", std::fabs(at20 - 1.0) <= 0.05,
             detail});
        manifest.outputs.push_back("tail_ratio.csv");
    }

    // Monte Carlo vs gbar over the barrier ladder
    {
        const LadderData bound = build_bound_ladder(*cfg.model, cfg.bound_grid);
        const double theta = cfg.asym.tilt;
        const PassageModel pm = make_passage_model(*cfg.model, theta, bound);
        CsvWriter csv(outpath(opt, "gbar_convergence.csv"));
        csv.header({"x", "n_eff", "ks_sup_distance"});
        std::vector<double> dists;
        for (double x : cfg.asym.x_ladder) {
            SimConfig sc = cfg.sim;
            sc.barrier = x;
            sc.n_samples = cfg.asym.samples_per_x;
            sc.tilt_theta = theta;
            const auto outcomes = sample_passage(pm, sc);
            WeightedSummary s = summarize(outcomes);
            const auto ed = EmpiricalDist::from_samples(s.u, s.w);
            const auto ks =
                ks_distance(ed, [&](double t) { return 1.0 - gbar(regime, std::max(0.0, t)); });
            csv.row({x, ed.n_effective, ks.statistic});
            dists.push_back(ks.statistic);
        }
        bool monotone = true;
        for (std::size_t k = 1; k < dists.size(); ++k)
            if (dists[k] >= dists[k - 1]) monotone = false;
        std::string seq;
        for (double d : dists) seq += format_g17(d) + " ";
        manifest.checks.push_back({"MC vs gbar distances monotone decreasing in x", monotone,
                                   seq});
        manifest.checks.push_back({"MC vs gbar sup distance <= 0.02 at the largest barrier",
                                   !dists.empty() && dists.back() <= 0.02,
                                   "final distance " + format_g17(dists.back())});
        manifest.outputs.push_back("gbar_convergence.csv");
    }

    manifest.write(outpath(opt, "manifest.json"));
    for (const auto& c : manifest.checks) print_check(c);
    return manifest.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

namespace {

struct LawTable {
    std::vector<std::string> coords;
    std::function<double(std::span<const double>)> density;
    double mass = 1.0;
    bool defective = false;
};

std::vector<std::string> known_laws() {
    return {"gbar",        "barrier_overshoot", "origin_overshoot", "lastmax",
            "pk",          "triple_sp",         "triple_stable",    "barrier_law",
            "origin_law",  "insurance_barrier", "insurance_origin", "decomposition"};
}

}  // namespace

int cmd_eval(const CliOptions& opt) {
    Config cfg = load_config(opt.config_path);
    if (!cfg.eval) throw config_error("eval: config must provide an eval section");
    const EvalConfig& ev = *cfg.eval;

    const auto known = known_laws();
    if (std::find(known.begin(), known.end(), ev.law) == known.end()) {
        std::string msg = "eval: unknown law '" + ev.law + "'; available:";
        for (const auto& n : known) msg += " " + n;
        throw config_error(msg);
    }

    // laws over regimes
    std::optional<RegimeData> regime;
    std::optional<LadderData> ladder;
    std::optional<SpectrallyPositiveBV> model;
    if (cfg.model && cfg.model->kind == ModelConfig::Kind::sp_bv) {
        model = make_sp_model(*cfg.model);
        ladder = build_ladder(*model, cfg.grid);
        if (ev.law != "pk" && ev.law != "triple_sp")
            regime = make_regime(*model, cfg.asym.alpha, cfg.grid);
    }
    auto need_regime = [&]() -> const RegimeData& {
        if (!regime) throw config_error("eval: this law needs a spectrally positive model");
        return *regime;
    };

    LawTable t;
    if (ev.law == "gbar") {
        t.coords = {"u"};
        t.density = [&](std::span<const double> c) { return gbar(need_regime(), c[0]); };
    } else if (ev.law == "barrier_overshoot") {
        t.coords = {"u"};
        const MassAccounting m = mass_accounting(need_regime(), 1.0);
        t.mass = m.jump_component;
        t.defective = true;
        t.density = [&](std::span<const double> c) {
            return limit_barrier_overshoot_density(need_regime(), c[0]);
        };
    } else if (ev.law == "origin_overshoot") {
        t.coords = {"u"};
        t.mass = need_regime().q_plus_xi_neg_alpha / need_regime().q;
        t.defective = true;
        t.density = [&](std::span<const double> c) {
            return limit_origin_overshoot_density(need_regime(), c[0]);
        };
    } else if (ev.law == "lastmax") {
        t.coords = {"z"};
        t.mass = need_regime().q_plus_xi_neg_alpha / need_regime().q;
        t.defective = true;
        t.density = [&](std::span<const double> c) {
            return last_max_asymptotic(need_regime(), c[0]);
        };
    } else if (ev.law == "pk") {
        t.coords = {"x"};
        if (!ladder) throw config_error("eval: pk needs a spectrally positive model");
        t.density = [&](std::span<const double> c) {
            return pollaczek_khintchine(*ladder, c[0]);
        };
    } else if (ev.law == "triple_sp") {
        t.coords = {"u", "v", "y"};
        if (!model) throw config_error("eval: triple_sp needs a spectrally positive model");
        auto law = std::make_shared<FiniteTripleLaw>(*model, *ladder, ev.barrier);
        t.density = [law](std::span<const double> c) {
            return law->density(c[0], c[1], c[2]);
        };
    } else if (ev.law == "triple_stable") {
        t.coords = {"u", "v", "y"};
        if (!cfg.model || cfg.model->kind != ModelConfig::Kind::stable)
            throw config_error("eval: triple_stable needs a stable model");
        const StableSpec s = cfg.model->stable;
        const double x = ev.barrier;
        t.density = [s, x](std::span<const double> c) {
            return triple_law_stable(s, x, c[0], c[1], c[2]);
        };
    } else if (ev.law == "barrier_law") {
        t.coords = {"u", "v", "y"};
        t.density = [&](std::span<const double> c) {
            return limit_barrier_law(need_regime(), c[0], c[1], c[2]);
        };
    } else if (ev.law == "origin_law") {
        t.coords = {"u", "phi", "theta"};
        t.density = [&](std::span<const double> c) {
            return limit_origin_law(need_regime(), c[0], c[1], c[2]);
        };
    } else if (ev.law == "insurance_barrier") {
        t.coords = {"u", "v", "y"};
        t.density = [&](std::span<const double> c) {
            return insurance_barrier_law(need_regime(), c[0], c[1], c[2]);
        };
    } else if (ev.law == "insurance_origin") {
        t.coords = {"u", "phi", "theta"};
        t.density = [&](std::span<const double> c) {
            return insurance_origin_law(need_regime(), c[0], c[1], c[2]);
        };
    } else if (ev.law == "decomposition") {
        t.coords = {"u"};
        t.density = {};  // handled below (multi-column)
    }

    RunManifest manifest;
    manifest.command = "eval";
    manifest.config_digest = cfg.source_digest;
    const std::string csvname = ev.law + ".csv";
    CsvWriter csv(outpath(opt, csvname));

    if (ev.law == "decomposition") {
        csv.header({"u", "comp_jump", "comp_drift_in", "sum", "gbar"});
        auto it = ev.coords.find("u");
        if (it == ev.coords.end()) throw config_error("eval: decomposition needs a u range");
        for (double u : it->second.expand()) {
            const DecompositionCheck c = decomposition_check(need_regime(), u, 1.0);
            csv.row({u, c.comp_jump, c.comp_drift_in, c.sum, c.gbar_value});
        }
    } else {
        if (t.defective) csv.comment("mass=" + format_g17(t.mass) + " (defective law)");
        std::vector<std::vector<double>> axes;
        for (const auto& name : t.coords) {
            auto it = ev.coords.find(name);
            if (it == ev.coords.end())
                throw config_error("eval: missing coordinate '" + name + "' for law " + ev.law);
            axes.push_back(it->second.expand());
        }
        auto cols = t.coords;
        cols.push_back("value");
        csv.header(cols);
        std::vector<double> point(axes.size(), 0.0);
        std::function<void(std::size_t)> rec = [&](std::size_t dim) {
            if (dim == axes.size()) {
                std::vector<double> row(point.begin(), point.end());
                row.push_back(t.density(point));
                csv.row(row);
                return;
            }
            for (double val : axes[dim]) {
                point[dim] = val;
                rec(dim + 1);
            }
        };
        rec(0);
    }
    manifest.outputs.push_back(csvname);
    manifest.write(outpath(opt, "manifest.json"));
    std::printf("wrote %s\n", outpath(opt, csvname).c_str());
    return 0;
}

}  // namespace levyfluct
