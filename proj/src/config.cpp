#include "levyfluct/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "levyfluct/errors.hpp"
#include "levyfluct/quadrature.hpp"

namespace levyfluct {

using nlohmann::json;

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::vector<double> EvalRange::expand() const {
    if (fixed) return {value};
    if (!(step > 0.0) || to < from) throw config_error("eval range: need step > 0 and to >= from");
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9));
    out.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) out.push_back(from + static_cast<double>(k) * step);
    return out;
}

namespace {

JumpConfig parse_jump(const json& j) {
    JumpConfig jc;
    const std::string family = j.value("family", "exponential");
    if (family == "exponential")
        jc.kind = JumpConfig::Kind::exponential;
    else if (family == "tilted_pareto")
        jc.kind = JumpConfig::Kind::tilted_pareto;
    else if (family == "tabulated")
        jc.kind = JumpConfig::Kind::tabulated;
    else
        throw config_error("unknown jump family '" + family +
                           "' (expected exponential, tilted_pareto or tabulated)");
    jc.rate = j.value("rate", 1.0);
    if (!(jc.rate >= 0.0)) throw config_error("jump family: rate must be nonnegative");
    switch (jc.kind) {
        case JumpConfig::Kind::exponential:
            jc.mu = j.value("mu", 1.0);
            if (!(jc.mu > 0.0)) throw config_error("exponential jumps: mu must be positive");
            break;
        case JumpConfig::Kind::tilted_pareto:
            jc.alpha = j.value("alpha", 1.0);
            jc.p = j.value("p", 2.0);
            if (!(jc.alpha > 0.0) || !(jc.p > 0.0))
                throw config_error("tilted_pareto jumps: alpha and p must be positive");
            break;
        case JumpConfig::Kind::tabulated: {
            if (j.contains("csv")) {
                std::ifstream in(j["csv"].get<std::string>());
                if (!in)
                    throw config_error("tabulated jumps: cannot open " +
                                       j["csv"].get<std::string>());
                std::string line;
                while (std::getline(in, line)) {
                    if (line.empty() || line[0] == '#') continue;
                    std::replace(line.begin(), line.end(), ',', ' ');
                    std::istringstream ls(line);
                    double y, d;
                    if (ls >> y >> d) jc.table.emplace_back(y, d);
                }
            } else if (j.contains("table")) {
                for (const auto& row : j["table"])
                    jc.table.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
            }
            if (jc.table.size() < 2)
                throw config_error("tabulated jumps: need a csv path or a table with >= 2 rows");
            std::sort(jc.table.begin(), jc.table.end());
            for (auto& [y, d] : jc.table)
                if (y < 0.0 || d < 0.0)
                    throw config_error("tabulated jumps: nodes must have y >= 0, density >= 0");
            break;
        }
    }
    return jc;
}

ModelConfig parse_model(const json& j) {
    ModelConfig mc;
    const std::string type = j.value("type", "");
    if (type == "spectrally_positive_bv") {
        mc.kind = ModelConfig::Kind::sp_bv;
        mc.drift = j.at("drift").get<double>();
        mc.up = parse_jump(j.at("jumps"));
    } else if (type == "two_sided_cpp") {
        mc.kind = ModelConfig::Kind::two_sided;
        mc.drift = j.at("drift").get<double>();
        mc.up = parse_jump(j.at("up_jumps"));
        if (j.contains("down_jumps")) mc.down = parse_jump(j.at("down_jumps"));
        else mc.down.rate = 0.0;
    } else if (type == "stable") {
        mc.kind = ModelConfig::Kind::stable;
        mc.stable.index = j.at("gamma").get<double>();
        mc.stable.rho = j.at("rho").get<double>();
        mc.stable.cplus = j.value("cplus", 1.0);
        mc.stable.cminus = j.value("cminus", 0.0);
        validate_stable(mc.stable);
    } else {
        throw config_error(
            "model type '" + type +
            "' is not representable: only compound Poisson plus drift "
            "(spectrally_positive_bv, two_sided_cpp) and stable are supported; general "
            "triplets have no explicit renewal measures and no exact passage simulation");
    }
    return mc;
}

}  // namespace

Config parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw config_error(std::string("config: invalid JSON: ") + e.what());
    }
    Config c;
    c.source_digest = [&] {
        char buf[24];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(fnv1a64(text)));
        return std::string(buf);
    }();
    if (j.contains("model")) c.model = parse_model(j["model"]);
    if (j.contains("grid")) {
        c.grid.step = j["grid"].value("step", c.grid.step);
        c.grid.length = j["grid"].value("length", c.grid.length);
    }
    if (j.contains("bound_grid")) {
        c.bound_grid.step = j["bound_grid"].value("step", c.bound_grid.step);
        c.bound_grid.length = j["bound_grid"].value("length", c.bound_grid.length);
    } else {
        c.bound_grid.length = std::max(c.bound_grid.length, 1.25 * c.grid.length);
    }
    if (j.contains("sim")) {
        const auto& s = j["sim"];
        c.sim.seed = s.value("seed", std::uint64_t{1});
        c.sim.n_samples = s.value("n_samples", std::size_t{100000});
        c.sim.barrier = s.value("barrier", 1.0);
        c.sim.miss_epsilon = s.value("miss_epsilon", 1e-7);
        c.sim.tilt_theta = s.value("tilt_theta", 0.0);
    }
    if (j.contains("asymptotic")) {
        const auto& a = j["asymptotic"];
        c.asym.alpha = a.value("alpha", 1.0);
        if (a.contains("x_ladder")) c.asym.x_ladder = a["x_ladder"].get<std::vector<double>>();
        c.asym.samples_per_x = a.value("samples_per_x", std::size_t{100000});
        c.asym.tilt = a.value("tilt", 1.0);
    }
    if (j.contains("lattices")) {
        for (const auto& l : j["lattices"]) {
            NamedLattice nl;
            nl.name = l.value("name", "lattice");
            nl.step.support = l.at("support").get<std::vector<int>>();
            nl.step.probs = l.at("probs").get<std::vector<double>>();
            validate_lattice(nl.step);
            c.lattices.push_back(std::move(nl));
        }
        c.barrier_max = j.value("barrier_max", 5);
        c.i_max = j.value("i_max", 6);
        c.j_max = j.value("j_max", 6);
    }
    if (j.contains("eval")) {
        EvalConfig e;
        e.law = j["eval"].at("law").get<std::string>();
        e.barrier = j["eval"].value("barrier", 2.0);
        if (j["eval"].contains("coords")) {
            for (const auto& [name, r] : j["eval"]["coords"].items()) {
                EvalRange er;
                if (r.is_number()) {
                    er.fixed = true;
                    er.value = r.get<double>();
                } else {
                    er.from = r.value("from", 0.0);
                    er.to = r.value("to", 0.0);
                    er.step = r.value("step", 1.0);
                }
                e.coords[name] = er;
            }
        }
        c.eval = std::move(e);
    }
    if (j.contains("stable_grid")) {
        for (const auto& row : j["stable_grid"])
            c.stable_grid.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
    }
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// jump measures
// ---------------------------------------------------------------------------

namespace {

struct TabulatedLaw {
    std::vector<double> y, d;     // nodes
    std::vector<double> cum;      // cumulative mass up to node k
    double total = 0.0;

    explicit TabulatedLaw(const std::vector<std::pair<double, double>>& table) {
        y.reserve(table.size());
        d.reserve(table.size());
        for (const auto& [yy, dd] : table) {
            y.push_back(yy);
            d.push_back(dd);
        }
        cum.assign(y.size(), 0.0);
        for (std::size_t k = 1; k < y.size(); ++k)
            cum[k] = cum[k - 1] + 0.5 * (d[k] + d[k - 1]) * (y[k] - y[k - 1]);
        total = cum.back();
        if (!(total > 0.0)) throw config_error("tabulated jumps: table integrates to zero");
    }
    double density(double x) const {
        if (x <= y.front() || x >= y.back()) return 0.0;
        const auto it = std::upper_bound(y.begin(), y.end(), x);
        const auto k = static_cast<std::size_t>(it - y.begin());
        const double t = (x - y[k - 1]) / (y[k] - y[k - 1]);
        return d[k - 1] + t * (d[k] - d[k - 1]);
    }
    double cdf(double x) const {
        if (x <= y.front()) return 0.0;
        if (x >= y.back()) return total;
        const auto it = std::upper_bound(y.begin(), y.end(), x);
        const auto k = static_cast<std::size_t>(it - y.begin());
        const double w = x - y[k - 1];
        const double dk = density(x);
        return cum[k - 1] + 0.5 * (d[k - 1] + dk) * w;
    }
    /// inverse of cdf/total; exact for the piecewise-linear density
    double quantile(double u) const {
        const double target = u * total;
        auto it = std::lower_bound(cum.begin(), cum.end(), target);
        if (it == cum.begin()) return y.front();
        const auto k = static_cast<std::size_t>(it - cum.begin());
        const double m = target - cum[k - 1];
        const double w = y[k] - y[k - 1];
        const double a = d[k - 1], b = d[k];
        const double slope = (b - a) / w;
        if (std::fabs(slope) < 1e-300) return y[k - 1] + (a > 0.0 ? m / a : 0.0);
        // solve a t + slope t^2 / 2 = m on [0, w]
        const double disc = a * a + 2.0 * slope * m;
        const double t = (std::sqrt(std::max(0.0, disc)) - a) / slope;
        return y[k - 1] + std::clamp(t, 0.0, w);
    }
};

TabulatedLaw tilted_table(const JumpConfig& jc, double theta) {
    auto t = jc.table;
    for (auto& [yy, dd] : t) dd *= std::exp(theta * yy);
    return TabulatedLaw(t);
}

}  // namespace

JumpMeasure make_jump_measure(const JumpConfig& jc) {
    JumpMeasure m;
    m.rate = jc.rate;
    switch (jc.kind) {
        case JumpConfig::Kind::exponential: {
            const double lam = jc.rate, mu = jc.mu;
            m.density = [lam, mu](double y) { return y < 0.0 ? 0.0 : lam * mu * std::exp(-mu * y); };
            m.tail = [lam, mu](double y) { return y < 0.0 ? lam : lam * std::exp(-mu * y); };
            m.tilted_tail_fn = [lam, mu](double a, double y) {
                return lam * std::exp((a - mu) * y);
            };
            m.tilted_density_fn = [lam, mu](double a, double y) {
                return lam * mu * std::exp((a - mu) * y);
            };
            m.mean_jump = 1.0 / mu;
            break;
        }
        case JumpConfig::Kind::tilted_pareto: {
            const double lam = jc.rate, a = jc.alpha, p = jc.p;
            m.tail = [lam, a, p](double y) {
                return y < 0.0 ? lam : lam * std::exp(-a * y) * std::pow(1.0 + y, -p);
            };
            m.density = [lam, a, p](double y) {
                if (y < 0.0) return 0.0;
                return lam * std::exp(-a * y) *
                       (a * std::pow(1.0 + y, -p) + p * std::pow(1.0 + y, -p - 1.0));
            };
            m.tilted_tail_fn = [lam, a, p](double t, double y) {
                return lam * std::exp((t - a) * y) * std::pow(1.0 + y, -p);
            };
            m.tilted_density_fn = [lam, a, p](double t, double y) {
                return lam * std::exp((t - a) * y) * std::pow(1.0 + y, -p) *
                       (a + p / (1.0 + y));
            };
            m.mean_jump = integrate_to_inf([&, a, p](double y) {
                               return std::exp(-a * y) * std::pow(1.0 + y, -p);
                           },
                           0.0, 1e-13)
                              .value;
            break;
        }
        case JumpConfig::Kind::tabulated: {
            auto law = std::make_shared<TabulatedLaw>(jc.table);
            const double lam = jc.rate;
            const double total = law->total;
            m.density = [law, lam, total](double y) { return lam * law->density(y) / total; };
            m.tail = [law, lam, total](double y) {
                return y < 0.0 ? lam : lam * (1.0 - law->cdf(y) / total);
            };
            double mean = 0.0;
            {
                const auto& Y = law->y;
                const auto& D = law->d;
                for (std::size_t k = 1; k < Y.size(); ++k) {
                    const double w = Y[k] - Y[k - 1];
                    mean += w / 6.0 *
                            (D[k - 1] * (2.0 * Y[k - 1] + Y[k]) + D[k] * (Y[k - 1] + 2.0 * Y[k]));
                }
            }
            m.mean_jump = mean / total;
            break;
        }
    }
    return m;
}

SpectrallyPositiveBV make_sp_model(const ModelConfig& mc) {
    if (mc.kind != ModelConfig::Kind::sp_bv)
        throw config_error("expected a spectrally_positive_bv model");
    SpectrallyPositiveBV p{mc.drift, make_jump_measure(mc.up)};
    validate_sp_bv(p);
    return p;
}

TwoSidedCPP make_two_sided_model(const ModelConfig& mc) {
    if (mc.kind != ModelConfig::Kind::two_sided)
        throw config_error("expected a two_sided_cpp model");
    TwoSidedCPP p{mc.drift, make_jump_measure(mc.up), make_jump_measure(mc.down)};
    validate_two_sided(p);
    return p;
}

double tilted_jump_rate(const JumpConfig& jc, double theta) {
    if (theta == 0.0) return jc.rate;
    switch (jc.kind) {
        case JumpConfig::Kind::exponential:
            if (theta >= jc.mu)
                throw config_error("tilt outside the jump moment radius (theta >= mu)");
            return jc.rate * jc.mu / (jc.mu - theta);
        case JumpConfig::Kind::tilted_pareto: {
            if (theta > jc.alpha)
                throw config_error("tilt outside the jump moment radius (theta > alpha)");
            if (theta == jc.alpha && jc.p <= 1.0)
                throw config_error("tilt outside the jump moment radius (p <= 1 at theta = alpha)");
            const JumpMeasure m = make_jump_measure(jc);
            auto r = integrate_to_inf(
                [&](double y) { return std::exp(theta * y) * m.density(y); }, 0.0, 1e-12);
            if (!r.converged) throw config_error("tilt outside the jump moment radius");
            return r.value;
        }
        case JumpConfig::Kind::tabulated:
            return jc.rate * tilted_table(jc, theta).total / TabulatedLaw(jc.table).total;
    }
    throw config_error("unreachable jump kind");
}

JumpSampler make_jump_sampler(const JumpConfig& jc, double theta) {
    JumpSampler s;
    s.rate = tilted_jump_rate(jc, theta);
    switch (jc.kind) {
        case JumpConfig::Kind::exponential: {
            const double mu = jc.mu - theta;  // tilted law is Exp(mu - theta)
            s.draw = [mu](SampleRng& rng) { return rng.exponential(mu); };
            break;
        }
        case JumpConfig::Kind::tilted_pareto: {
            const double a = jc.alpha, p = jc.p;
            if (theta < a) {
                // rejection from Exp(a - theta): accept with the bracket ratio
                const double rate = a - theta;
                s.draw = [rate, a, p](SampleRng& rng) {
                    for (;;) {
                        const double y = rng.exponential(rate);
                        const double accept =
                            (a * std::pow(1.0 + y, -p) + p * std::pow(1.0 + y, -p - 1.0)) /
                            (a + p);
                        if (rng.uniform() < accept) return y;
                    }
                };
            } else {
                // theta == alpha: mixture of two pure power laws (p > 1 checked)
                const double w1 = (a / (p - 1.0)) / (a / (p - 1.0) + 1.0);
                s.draw = [w1, p](SampleRng& rng) {
                    const double u = rng.uniform();
                    double v;
                    do {
                        v = rng.uniform();
                    } while (v == 0.0);
                    if (u < w1) return std::pow(v, -1.0 / (p - 1.0)) - 1.0;
                    return std::pow(v, -1.0 / p) - 1.0;
                };
            }
            break;
        }
        case JumpConfig::Kind::tabulated: {
            auto law = std::make_shared<TabulatedLaw>(
                theta == 0.0 ? TabulatedLaw(jc.table) : tilted_table(jc, theta));
            s.draw = [law](SampleRng& rng) { return law->quantile(rng.uniform()); };
            break;
        }
    }
    return s;
}

LadderData build_bound_ladder(const ModelConfig& mc, const GridSpec& grid) {
    SpectrallyPositiveBV dom;
    if (mc.kind == ModelConfig::Kind::sp_bv) {
        dom = make_sp_model(mc);
    } else if (mc.kind == ModelConfig::Kind::two_sided) {
        // dominator: drop the downward jumps; requires downward drift
        if (!(mc.drift < 0.0))
            throw config_error("two-sided simulation requires negative drift (passage must "
                               "happen at jump epochs only)");
        dom = SpectrallyPositiveBV{-mc.drift, make_jump_measure(mc.up)};
        if (!(mean_x1(dom) < 0.0))
            throw config_error("two-sided model: the spectrally positive dominator does not "
                               "drift to -infinity, so non-passage cannot be certified");
    } else {
        throw config_error("stable models have no path simulator (no exact overshoot "
                           "extraction under discretization)");
    }
    return build_ladder(dom, grid);
}

PassageModel make_passage_model(const ModelConfig& mc, double theta,
                                const LadderData& bound_ladder) {
    PassageModel pm;
    pm.theta = theta;
    if (mc.kind == ModelConfig::Kind::sp_bv) {
        pm.drift_down = mc.drift;
        pm.up = make_jump_sampler(mc.up, theta);
        pm.down = JumpSampler{0.0, {}};
        if (theta > 0.0) {
            pm.log_mgf = -mc.drift * theta + (pm.up.rate - mc.up.rate);
            // the tilted process must drift upward so passage is certain
            const JumpMeasure m = make_jump_measure(mc.up);
            auto mean_tilted = integrate_to_inf(
                [&](double y) { return y * std::exp(theta * y) * m.density(y); }, 0.0, 1e-10);
            if (mean_tilted.converged && mean_tilted.value - mc.drift <= 0.0)
                throw config_error("tilt too small: the tilted process still drifts downward, "
                                   "so passage is not certain under the sampling measure");
        }
    } else if (mc.kind == ModelConfig::Kind::two_sided) {
        if (theta > 0.0)
            throw config_error("exponential tilting is implemented for the spectrally "
                               "positive class only");
        pm.drift_down = -mc.drift;
        pm.up = make_jump_sampler(mc.up, 0.0);
        pm.down = mc.down.rate > 0.0 ? make_jump_sampler(mc.down, 0.0) : JumpSampler{0.0, {}};
    } else {
        throw config_error("stable models have no path simulator");
    }
    const double q = bound_ladder.q;
    const GridMeasure U = bound_ladder.U;
    const double cap = 0.75 * U.length();
    pm.comeback_bound = [q, U, cap](double d) {
        if (d <= 0.0) return 1.0;
        return q * U.tail_mass(std::min(d, cap));
    };
    return pm;
}

}  // namespace levyfluct
