#include "levyfluct/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "levyfluct/errors.hpp"
#include "levyfluct/parallel.hpp"

namespace levyfluct {

void validate_sim_config(const SimConfig& cfg) {
    if (!(cfg.miss_epsilon > 0.0) || cfg.miss_epsilon > 1e-6)
        throw config_error("sim config: miss_epsilon must lie in (0, 1e-6]");
    if (!(cfg.barrier >= 0.0)) throw config_error("sim config: barrier must be nonnegative");
    if (cfg.tilt_theta < 0.0) throw config_error("sim config: tilt_theta must be nonnegative");
}

namespace {
inline std::uint64_t splitmix64(std::uint64_t& z) {
    z += 0x9E3779B97F4A7C15ull;
    std::uint64_t x = z;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

SampleRng::SampleRng(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed ^ (0xD2B74407B1CE6E93ull * (index + 1));
    for (auto& s : s_) s = splitmix64(z);
}

std::uint64_t SampleRng::next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double SampleRng::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SampleRng::exponential(double rate) {
    double u;
    do {
        u = uniform();
    } while (u == 0.0);
    return -std::log(u) / rate;
}

PassageOutcome sample_passage_one(const PassageModel& m, const SimConfig& cfg,
                                  std::uint64_t index) {
    SampleRng rng(cfg.seed, index);
    const double x = cfg.barrier;
    const double total_rate = m.up.rate + m.down.rate;
    const double p_up = m.up.rate / total_rate;
    const bool tilted = m.theta > 0.0;

    double t = 0.0;
    double pos = 0.0;
    double max_val = 0.0, max_time = 0.0;

    // Start-level miss check: a path may be hopeless from the outset.
    if (!tilted && m.comeback_bound) {
        const double b = m.comeback_bound(x - pos);
        if (b < cfg.miss_epsilon) return NoPassage{b};
    }

    for (;;) {
        const double dt = rng.exponential(total_rate);
        t += dt;
        const double pre = pos - m.drift_down * dt;
        const bool up = m.down.rate == 0.0 || rng.uniform() < p_up;
        const double jump = up ? m.up.draw(rng) : -m.down.draw(rng);
        const double post = pre + jump;
        if (up && post > x) {
            QuintupleSample s;
            s.overshoot = post - x;
            s.undershoot = x - pre;
            s.lastmax_undershoot = x - max_val;
            s.g = max_time;
            s.t_rel = t - max_time;
            s.crept = false;
            s.weight = tilted ? std::exp(-m.theta * post + t * m.log_mgf) : 1.0;
            return s;
        }
        pos = post;
        if (pos >= max_val) {  // ties take the later time
            max_val = pos;
            max_time = t;
        }
        if (!tilted && m.comeback_bound) {
            const double b = m.comeback_bound(x - pos);
            if (b < cfg.miss_epsilon) return NoPassage{b};
        }
    }
}

std::vector<PassageOutcome> sample_passage(const PassageModel& m, const SimConfig& cfg) {
    validate_sim_config(cfg);
    if (!(m.drift_down > 0.0))
        throw config_error("sample_passage: zero drift makes X a compound Poisson process, "
                           "which the passage identities exclude; use a nonzero drift");
    if (!(m.up.rate > 0.0)) throw config_error("sample_passage: upward jump rate must be positive");
    if (m.theta == 0.0 && m.comeback_bound && cfg.barrier > 0.0 &&
        !(m.comeback_bound(0.0) >= 0.0))
        throw config_error("sample_passage: comeback bound is not evaluable");
    std::vector<PassageOutcome> out(cfg.n_samples);
    parallel_blocks(cfg.n_samples, 4096, [&](std::size_t i0, std::size_t i1) {
        for (std::size_t i = i0; i < i1; ++i) out[i] = sample_passage_one(m, cfg, i);
    });
    return out;
}

LastMaxRecord record_last_max(std::span<const PathEvent> events, double drift_down,
                              double barrier) {
    if (events.empty()) throw config_error("record_last_max: empty event list");
    double pos = 0.0, tprev = 0.0;
    double max_val = 0.0, max_time = 0.0;
    for (std::size_t k = 0; k < events.size(); ++k) {
        const double t = events[k].time;
        const double pre = pos - drift_down * (t - tprev);
        const double post = pre + events[k].jump;
        if (k + 1 == events.size()) {
            if (!(post > barrier))
                throw config_error("record_last_max: final event does not cross the barrier");
            LastMaxRecord r;
            r.g = max_time;
            r.t_rel = t - max_time;
            r.y = barrier - max_val;
            r.undershoot = barrier - pre;
            return r;
        }
        pos = post;
        tprev = t;
        if (pos >= max_val) {
            max_val = pos;
            max_time = t;
        }
    }
    throw config_error("record_last_max: unreachable");
}

}  // namespace levyfluct
